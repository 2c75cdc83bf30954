#ifndef NETALIGN_TESTS_TEST_UTIL_H_
#define NETALIGN_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include "netalign/graph.h"
#include "netalign/losses.h"
#include "netalign/random.h"
#include "netalign/types.h"
#include "netalign/walk_embedding.h"

namespace netalign::testing {

inline RowMatrix GaussianMatrix(int rows, int cols, std::uint64_t seed, double sigma = 1.0) {
  Rng rng = MakeRng(seed, {0x746573ULL});
  std::normal_distribution<double> n(0.0, sigma);
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

inline RowMatrix UniformMatrix(int rows, int cols, std::uint64_t seed) {
  Rng rng = MakeRng(seed, {0x756e69ULL});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Haar-distributed orthogonal matrix (QR of a gaussian, signs fixed by R).
inline Matrix RandomOrthogonal(int d, std::uint64_t seed) {
  Matrix a = GaussianMatrix(d, d, seed);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

inline std::vector<std::string> IndexLabels(int n, const std::string& prefix = "") {
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = prefix + std::to_string(i);
  return labels;
}

inline EmbeddingMatrix MakeEmbedding(RowMatrix m, const std::string& prefix = "") {
  EmbeddingMatrix e;
  e.labels = IndexLabels(static_cast<int>(m.rows()), prefix);
  e.vectors = std::move(m);
  return e;
}

inline Correspondence IdentityTruth(int n, const std::string& p1 = "", const std::string& p2 = "") {
  Correspondence c;
  for (int i = 0; i < n; ++i) c.pairs.emplace_back(p1 + std::to_string(i), p2 + std::to_string(i));
  return c;
}

// Ring lattice with k nearest neighbors, each edge rewired with probability beta.
inline Graph WattsStrogatz(int n, int k, double beta, std::uint64_t seed) {
  Rng rng = MakeRng(seed, {0x7773ULL});
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::set<std::pair<int, int>> edges;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= k / 2; ++j) edges.insert(key(i, (i + j) % n));
  for (int j = 1; j <= k / 2; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto e = key(i, (i + j) % n);
      if (coin(rng) >= beta || !edges.contains(e)) continue;
      int w = pick(rng);
      int guard = 0;
      while ((w == i || edges.contains(key(i, w))) && guard++ < 10 * n) w = pick(rng);
      if (w == i || edges.contains(key(i, w))) continue;
      edges.erase(e);
      edges.insert(key(i, w));
    }
  }
  std::vector<Edge> list(edges.begin(), edges.end());
  return Graph::FromEdges(IndexLabels(n), list);
}

// Flat mutable/const views over all four networks, in a fixed order.
inline std::vector<std::span<double>> AllViews(AlignerParams& p) {
  std::vector<std::span<double>> out;
  for (auto v : ParameterViews(p.g12)) out.push_back(v);
  for (auto v : ParameterViews(p.g21)) out.push_back(v);
  for (auto v : ParameterViews(p.d1)) out.push_back(v);
  for (auto v : ParameterViews(p.d2)) out.push_back(v);
  return out;
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

// Central differences of `loss` against the analytic gradient `grad` for every
// parameter of `p`. Relative error uses max(1e-8, |a| + |n|) as denominator.
inline GradCheck CheckGradient(AlignerParams p, AlignerParams grad,
                               const std::function<double(const AlignerParams&)>& loss,
                               double step = 1e-5) {
  GradCheck out;
  auto params = AllViews(p);
  auto grads = AllViews(grad);
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size(); ++i) {
      const double saved = params[t][i];
      params[t][i] = saved + step;
      const double up = loss(p);
      params[t][i] = saved - step;
      const double down = loss(p);
      params[t][i] = saved;
      const double numeric = (up - down) / (2 * step);
      const double analytic = grads[t][i];
      const double rel = std::abs(analytic - numeric) /
                         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      out.max_rel_error = std::max(out.max_rel_error, rel);
      ++out.checked;
    }
  }
  return out;
}

}  // namespace netalign::testing

#endif  // NETALIGN_TESTS_TEST_UTIL_H_
