#ifndef NETALIGN_KDTREE_H_
#define NETALIGN_KDTREE_H_

#include <span>
#include <vector>

#include "netalign/types.h"

namespace netalign {

struct NearestNeighbor {
  int index = -1;
  double distance = 0.0;  // Euclidean

  friend bool operator==(const NearestNeighbor&, const NearestNeighbor&) = default;
};

// Squared Euclidean distance summed in dimension order. Both the tree and
// callers that need bit-identical distances use this.
double SquaredDistance(std::span<const double> a, std::span<const double> b);

// Exact nearest-neighbor index over a fixed point set. Splits cycle through the
// axes by depth at the median; leaves hold at most `leaf_size` points.
// Immutable after construction, so concurrent queries are safe.
class KdTree {
 public:
  static constexpr int kDefaultLeafSize = 16;

  // Throws std::invalid_argument on an empty or non-finite point set.
  explicit KdTree(const RowMatrix& points, int leaf_size = kDefaultLeafSize);

  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  int leaf_size() const { return leaf_size_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  // Exact argmin of Euclidean distance; ties go to the smallest point index.
  // Throws std::invalid_argument on a dimension mismatch.
  NearestNeighbor Nearest(std::span<const double> query) const;

  // One query per row of `queries`. With threads > 1 rows are split across
  // workers; the result does not depend on the thread count.
  std::vector<NearestNeighbor> NearestAll(const RowMatrix& queries,
                                          int threads = 1) const;

  // Throws std::logic_error if leaf membership or split ordering is violated.
  void CheckInvariants() const;

 private:
  struct Node {
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    int left = -1;
    int right = -1;
    int begin = 0;  // range in order_ (leaves only)
    int end = 0;
  };

  struct Best {
    double squared = 0.0;
    int index = -1;
  };

  int Build(int begin, int end, int depth);
  void Search(int node, const double* query, double bound,
              std::vector<double>& offsets, Best& best) const;

  RowMatrix points_;      // original order
  RowMatrix leaf_points_;  // points_ permuted into leaf order
  std::vector<int> order_;  // leaf order -> original index
  std::vector<Node> nodes_;
  int leaf_size_;
};

}  // namespace netalign

#endif  // NETALIGN_KDTREE_H_
