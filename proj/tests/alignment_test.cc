#include <sstream>

#include <gtest/gtest.h>

#include "netalign/alignment.h"
#include "netalign/errors.h"
#include "test_util.h"

namespace netalign {
namespace {

AlignerParams IdentityAligner(int d) {
  AlignerParams p;
  p.g12 = p.g21 = MapperParams::Identity(d);
  p.d1 = p.d2 = CriticParams::Zero(d, 1);
  return p;
}

TEST(AlignDirection, IdentityOnSameSet) {
  const EmbeddingMatrix x = testing::MakeEmbedding(testing::GaussianMatrix(50, 4, 1), "a");
  EmbeddingMatrix y = x;
  y.labels = testing::IndexLabels(50, "b");
  const AlignmentResult r = AlignDirection(MapperParams::Identity(4), x, y);
  ASSERT_EQ(r.pairs.size(), 50u);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(r.pairs[i], std::make_pair("a" + std::to_string(i), "b" + std::to_string(i)));
    EXPECT_EQ(r.target_index[i], i);
  }
  EXPECT_EQ(r.mean_nn_distance, 0.0);
  EXPECT_EQ(r.direction, Direction::k1to2);
}

TEST(AlignDirection, BiasUndoesOffset) {
  // points separated by more than the offset: identity mis-matches, the
  // corrective bias recovers every pair
  RowMatrix base(4, 2);
  base << 0, 0, 10, 0, 0, 10, 10, 10;
  RowMatrix shifted = base.rowwise() + Eigen::RowVector2d(6, 0);
  const EmbeddingMatrix x1 = testing::MakeEmbedding(base);
  const EmbeddingMatrix x2 = testing::MakeEmbedding(shifted);
  MapperParams g = MapperParams::Identity(2);
  g.bias << 6, 0;
  const AlignmentResult good = AlignDirection(g, x1, x2);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(good.target_index[i], i);
  EXPECT_EQ(good.mean_nn_distance, 0.0);
  const AlignmentResult bad = AlignDirection(MapperParams::Identity(2), x1, x2);
  EXPECT_EQ(bad.target_index, (std::vector<int>{0, 0, 2, 2}));
  EXPECT_DOUBLE_EQ(bad.mean_nn_distance, 5.0);
}

TEST(AlignDirection, Errors) {
  const EmbeddingMatrix x = testing::MakeEmbedding(testing::GaussianMatrix(5, 3, 1));
  const EmbeddingMatrix y = testing::MakeEmbedding(testing::GaussianMatrix(5, 2, 1));
  EXPECT_THROW(AlignDirection(MapperParams::Identity(3), x, y), std::invalid_argument);
  EXPECT_THROW(AlignDirection(MapperParams::Identity(2), x, y), std::invalid_argument);
  EXPECT_THROW(AlignDirection(MapperParams::Identity(3), EmbeddingMatrix{}, x),
               std::invalid_argument);
}

TEST(AlignBothDirections, TieGoesTo1to2) {
  const EmbeddingMatrix x = testing::MakeEmbedding(testing::GaussianMatrix(20, 3, 2));
  const BidirectionalAlignment b = AlignBothDirections(IdentityAligner(3), x, x);
  EXPECT_EQ(b.forward.mean_nn_distance, b.backward.mean_nn_distance);
  EXPECT_EQ(b.chosen, Direction::k1to2);
  EXPECT_EQ(&b.result(), &b.forward);
}

TEST(AlignBothDirections, PicksLowerDistance) {
  const EmbeddingMatrix x1 = testing::MakeEmbedding(testing::GaussianMatrix(30, 3, 3), "u");
  const EmbeddingMatrix x2 = testing::MakeEmbedding(testing::GaussianMatrix(30, 3, 4), "v");
  AlignerParams p = IdentityAligner(3);
  p.g12.bias.setConstant(100.0);
  const BidirectionalAlignment b = AlignBothDirections(p, x1, x2);
  EXPECT_EQ(b.chosen, Direction::k2to1);
  EXPECT_LT(b.backward.mean_nn_distance, b.forward.mean_nn_distance);
  EXPECT_EQ(b.backward.pairs.front().first.front(), 'v');
  EXPECT_EQ(b.backward.pairs.front().second.front(), 'u');
  EXPECT_EQ(AlignBidirectional(p, x1, x2, 3).pairs, b.backward.pairs);
}

TEST(AlignDirection, ThreadsDoNotMatter) {
  const EmbeddingMatrix x1 = testing::MakeEmbedding(testing::GaussianMatrix(400, 6, 5));
  const EmbeddingMatrix x2 = testing::MakeEmbedding(testing::GaussianMatrix(300, 6, 6));
  Rng rng(1);
  const MapperParams g = InitMapper(6, MapperVariant::kNonlinear, rng, 0.3);
  const AlignmentResult a = AlignDirection(g, x1, x2, Direction::k1to2, 1);
  const AlignmentResult b = AlignDirection(g, x1, x2, Direction::k1to2, 7);
  EXPECT_EQ(a.pairs, b.pairs);
  EXPECT_EQ(a.per_pair_distance, b.per_pair_distance);
  EXPECT_EQ(a.mean_nn_distance, b.mean_nn_distance);
}

TEST(AlignmentFile, RoundTrip) {
  const EmbeddingMatrix x1 = testing::MakeEmbedding(testing::GaussianMatrix(25, 3, 7), "n");
  const EmbeddingMatrix x2 = testing::MakeEmbedding(testing::GaussianMatrix(25, 3, 8), "m");
  const AlignmentResult r = AlignDirection(MapperParams::Identity(3), x2, x1, Direction::k2to1);
  std::stringstream ss;
  WriteAlignment(r, ss);
  EXPECT_EQ(ss.str().rfind("# direction=2to1 mean_nn_distance=", 0), 0u);
  const AlignmentResult back = ReadAlignment(ss);
  EXPECT_EQ(back.pairs, r.pairs);
  EXPECT_EQ(back.direction, Direction::k2to1);
  EXPECT_EQ(back.per_pair_distance, r.per_pair_distance);
  EXPECT_EQ(back.mean_nn_distance, r.mean_nn_distance);
}

TEST(AlignmentFile, Malformed) {
  std::istringstream no_header("a\tb\t0.5\n");
  EXPECT_ANY_THROW(ReadAlignment(no_header));
  std::istringstream one_col("# direction=1to2 mean_nn_distance=0\na\n");
  EXPECT_THROW(ReadAlignment(one_col), ParseError);
  std::istringstream bad_dist("# direction=1to2 mean_nn_distance=0\na\tb\tfar\n");
  EXPECT_THROW(ReadAlignment(bad_dist), ParseError);
  // the distance column is optional
  std::istringstream two_col("# direction=1to2 mean_nn_distance=0\na\tb\n");
  EXPECT_EQ(ReadAlignment(two_col).per_pair_distance, std::vector<double>{0.0});
  EXPECT_THROW(ParseDirection("sideways"), DataError);
  EXPECT_EQ(ParseDirection(DirectionName(Direction::k2to1)), Direction::k2to1);
}

}  // namespace
}  // namespace netalign
