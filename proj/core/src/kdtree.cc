#include "netalign/kdtree.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace netalign {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    sum += diff * diff;
  }
  return sum;
}

KdTree::KdTree(const RowMatrix& points, int leaf_size)
    : points_(points), leaf_size_(std::max(1, leaf_size)) {
  if (points_.rows() == 0) throw std::invalid_argument("k-d tree needs at least one point");
  if (points_.cols() == 0) throw std::invalid_argument("k-d tree points have dimension 0");
  if (!points_.allFinite()) throw std::invalid_argument("k-d tree points must be finite");
  order_.resize(static_cast<std::size_t>(points_.rows()));
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(static_cast<std::size_t>(2 * points_.rows() / leaf_size_ + 2));
  Build(0, size(), 0);
  leaf_points_.resize(points_.rows(), points_.cols());
  for (int i = 0; i < size(); ++i) leaf_points_.row(i) = points_.row(order_[i]);
}

int KdTree::Build(int begin, int end, int depth) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= leaf_size_) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  const int axis = depth % dim();
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](int a, int b) {
                     const double va = points_(a, axis), vb = points_(b, axis);
                     return va < vb || (va == vb && a < b);
                   });
  const double split = points_(order_[mid], axis);
  const int left = Build(begin, mid, depth + 1);
  const int right = Build(mid, end, depth + 1);
  Node& node = nodes_[id];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  node.begin = begin;
  node.end = end;
  return id;
}

NearestNeighbor KdTree::Nearest(std::span<const double> query) const {
  if (static_cast<int>(query.size()) != dim())
    throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                " != tree dimension " + std::to_string(dim()));
  Best best{std::numeric_limits<double>::infinity(), -1};
  std::vector<double> offsets(static_cast<std::size_t>(dim()), 0.0);
  Search(0, query.data(), 0.0, offsets, best);
  return {best.index, std::sqrt(best.squared)};
}

void KdTree::Search(int node_id, const double* query, double bound,
                    std::vector<double>& offsets, Best& best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    const int d = dim();
    for (int i = node.begin; i < node.end; ++i) {
      const double* p = leaf_points_.row(i).data();
      double sum = 0.0;
      int j = 0;
      for (; j < d; ++j) {
        const double diff = query[j] - p[j];
        sum += diff * diff;
        if (sum > best.squared) break;
      }
      if (j < d) continue;
      const int index = order_[i];
      if (sum < best.squared || (sum == best.squared && index < best.index)) {
        best.squared = sum;
        best.index = index;
      }
    }
    return;
  }
  const double diff = query[node.axis] - node.split;
  const int near = diff <= 0.0 ? node.left : node.right;
  const int far = diff <= 0.0 ? node.right : node.left;
  Search(near, query, bound, offsets, best);
  const double old = offsets[node.axis];
  const double far_bound = bound - old * old + diff * diff;
  // The slack keeps the test conservative against rounding in the
  // incremental bound; equality must be visited for the index tie rule.
  if (far_bound <= best.squared * (1.0 + 1e-12)) {
    offsets[node.axis] = diff;
    Search(far, query, far_bound, offsets, best);
    offsets[node.axis] = old;
  }
}

std::vector<NearestNeighbor> KdTree::NearestAll(const RowMatrix& queries,
                                                int threads) const {
  if (queries.rows() > 0 && queries.cols() != dim())
    throw std::invalid_argument("query dimension mismatch");
  const int n = static_cast<int>(queries.rows());
  std::vector<NearestNeighbor> out(static_cast<std::size_t>(n));
  auto work = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      out[i] = Nearest({queries.row(i).data(), static_cast<std::size_t>(dim())});
    }
  };
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

void KdTree::CheckInvariants() const {
  std::vector<int> seen(static_cast<std::size_t>(size()), 0);
  // Walk with explicit per-axis bounds.
  struct Frame {
    int node;
    std::vector<double> lo, hi;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Frame> stack;
  stack.push_back({0, std::vector<double>(dim(), -inf), std::vector<double>(dim(), inf)});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const Node& node = nodes_[f.node];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        if (idx < 0 || idx >= size() || seen[idx]++ != 0)
          throw std::logic_error("point appears in more than one leaf");
        for (int a = 0; a < dim(); ++a) {
          const double v = points_(idx, a);
          if (v < f.lo[a] || v > f.hi[a])
            throw std::logic_error("point violates a split threshold");
        }
      }
      continue;
    }
    Frame left{node.left, f.lo, f.hi};
    left.hi[node.axis] = std::min(left.hi[node.axis], node.split);
    Frame right{node.right, f.lo, f.hi};
    right.lo[node.axis] = std::max(right.lo[node.axis], node.split);
    stack.push_back(std::move(left));
    stack.push_back(std::move(right));
  }
  for (int c : seen)
    if (c != 1) throw std::logic_error("point missing from the leaves");
}

}  // namespace netalign
