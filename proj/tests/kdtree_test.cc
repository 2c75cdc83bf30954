#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "netalign/kdtree.h"
#include "test_util.h"

namespace netalign {
namespace {

NearestNeighbor LinearScan(const RowMatrix& pts, std::span<const double> q) {
  NearestNeighbor best{-1, std::numeric_limits<double>::infinity()};
  double best_sq = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pts.rows(); ++i) {
    const double sq = SquaredDistance({pts.row(i).data(), static_cast<std::size_t>(pts.cols())}, q);
    if (sq < best_sq) {
      best_sq = sq;
      best.index = i;
    }
  }
  best.distance = std::sqrt(best_sq);
  return best;
}

std::span<const double> Row(const RowMatrix& m, int i) {
  return {m.row(i).data(), static_cast<std::size_t>(m.cols())};
}

TEST(KdTree, SinglePoint) {
  RowMatrix p(1, 3);
  p << 1, 2, 3;
  const KdTree tree(p);
  const std::vector<double> q = {1, 2, 7};
  const NearestNeighbor nn = tree.Nearest(q);
  EXPECT_EQ(nn.index, 0);
  EXPECT_DOUBLE_EQ(nn.distance, 4.0);
  tree.CheckInvariants();
}

TEST(KdTree, TieGoesToLowestIndex) {
  RowMatrix p(2, 2);
  p << 0, 0, 1, 1;
  const KdTree tree(p);
  EXPECT_EQ(tree.Nearest(std::vector<double>{0.5, 0.5}).index, 0);
  EXPECT_EQ(tree.Nearest(std::vector<double>{0.1, 0.0}), (NearestNeighbor{0, 0.1}));

  RowMatrix dup = RowMatrix::Zero(40, 2);
  for (int i = 0; i < 40; ++i) dup(i, 0) = i % 2 == 0 ? 5.0 : 5.0;
  const KdTree flat(dup, 4);
  EXPECT_EQ(flat.Nearest(std::vector<double>{5, 0}).index, 0);
  EXPECT_EQ(flat.Nearest(std::vector<double>{-3, 9}).index, 0);
  flat.CheckInvariants();
}

TEST(KdTree, TieAcrossSubtrees) {
  // equidistant points land in different leaves; the lower index must win
  RowMatrix p(64, 1);
  for (int i = 0; i < 64; ++i) p(i, 0) = static_cast<double>(63 - i);
  const KdTree tree(p, 2);
  // 31.5 is equidistant from 31 (index 32) and 32 (index 31)
  EXPECT_EQ(tree.Nearest(std::vector<double>{31.5}).index, 31);
}

TEST(KdTree, SelfQueryReturnsZeroDistance) {
  const RowMatrix p = testing::GaussianMatrix(300, 5, 3);
  const KdTree tree(p);
  for (int i = 0; i < p.rows(); ++i) {
    const NearestNeighbor nn = tree.Nearest(Row(p, i));
    EXPECT_EQ(nn.index, i);
    EXPECT_EQ(nn.distance, 0.0);
  }
}

class KdTreeOracle : public ::testing::TestWithParam<std::tuple<int, int, int>> {};

TEST_P(KdTreeOracle, MatchesLinearScan) {
  const auto [n, d, leaf] = GetParam();
  const RowMatrix p = testing::GaussianMatrix(n, d, 10 + n + d);
  const RowMatrix q = testing::GaussianMatrix(200, d, 20 + n + d, 1.3);
  const KdTree tree(p, leaf);
  tree.CheckInvariants();
  for (int i = 0; i < q.rows(); ++i) {
    const NearestNeighbor got = tree.Nearest(Row(q, i));
    const NearestNeighbor want = LinearScan(p, Row(q, i));
    EXPECT_EQ(got.index, want.index);
    EXPECT_EQ(got.distance, want.distance);
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, KdTreeOracle,
                         ::testing::Values(std::make_tuple(1, 1, 16), std::make_tuple(17, 2, 16),
                                           std::make_tuple(500, 3, 1), std::make_tuple(1000, 16, 16),
                                           std::make_tuple(257, 64, 8)));

TEST(KdTree, GridDataWithManyTies) {
  RowMatrix p(100, 2);
  for (int i = 0; i < 100; ++i) {
    p(i, 0) = i % 10;
    p(i, 1) = i / 10;
  }
  const KdTree tree(p, 3);
  tree.CheckInvariants();
  const RowMatrix q = testing::UniformMatrix(300, 2, 4) * 10.0;
  for (int i = 0; i < q.rows(); ++i) {
    RowMatrix r = q.row(i).array().round().matrix() + RowMatrix::Constant(1, 2, 0.5);
    for (const RowMatrix& query : {RowMatrix(q.row(i)), r})
      EXPECT_EQ(tree.Nearest(Row(query, 0)), LinearScan(p, Row(query, 0)));
  }
}

TEST(KdTree, NearestAllIndependentOfThreads) {
  const RowMatrix p = testing::GaussianMatrix(2000, 8, 5);
  const RowMatrix q = testing::GaussianMatrix(1500, 8, 6);
  const KdTree tree(p);
  const auto one = tree.NearestAll(q, 1);
  ASSERT_EQ(one.size(), 1500u);
  for (int t : {2, 3, 8, 5000}) EXPECT_EQ(tree.NearestAll(q, t), one);
  EXPECT_TRUE(tree.NearestAll(RowMatrix(0, 8), 4).empty());
}

TEST(KdTree, Errors) {
  EXPECT_THROW(KdTree(RowMatrix(0, 3)), std::invalid_argument);
  RowMatrix bad = RowMatrix::Zero(3, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(KdTree{bad}, std::invalid_argument);
  const KdTree tree(RowMatrix::Zero(3, 2));
  EXPECT_THROW(tree.Nearest(std::vector<double>{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(tree.NearestAll(RowMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(KdTree, LeafSizeBound) {
  const RowMatrix p = testing::GaussianMatrix(1000, 4, 7);
  const KdTree tree(p, 16);
  EXPECT_EQ(tree.leaf_size(), 16);
  // a balanced median tree over 1000 points with leaves <= 16 has 64 leaves
  EXPECT_EQ(tree.num_nodes(), 127);
}

}  // namespace
}  // namespace netalign
