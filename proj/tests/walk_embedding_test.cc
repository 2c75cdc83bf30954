#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "netalign/errors.h"
#include "netalign/walk_embedding.h"
#include "test_util.h"

namespace netalign {
namespace {

Graph FromText(const std::string& text) {
  std::istringstream in(text);
  return ParseEdgeList(in);
}

TEST(StepDistribution, UniformWithoutBias) {
  const Graph g = FromText("c a\nc b\nc d\nc e\na b\n");
  const int c = *g.IndexOf("c");
  for (double p : StepDistribution(g, std::nullopt, c, 0.5, 2.0)) EXPECT_DOUBLE_EQ(p, 0.25);
  for (double p : StepDistribution(g, *g.IndexOf("a"), c, 1.0, 1.0)) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(StepDistribution, TrianglePlusPendant) {
  // cur's neighbours: prev, common (adjacent to prev), far (not adjacent)
  const Graph g = FromText("prev cur\ncur common\nprev common\ncur far\n");
  const int cur = *g.IndexOf("cur");
  const auto probs = StepDistribution(g, *g.IndexOf("prev"), cur, 0.5, 2.0);
  const auto nbrs = g.neighbors(cur);
  ASSERT_EQ(probs.size(), 3u);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const std::string& l = g.label(nbrs[i]);
    const double expect = l == "prev" ? 4.0 / 7 : l == "common" ? 2.0 / 7 : 1.0 / 7;
    EXPECT_NEAR(probs[i], expect, 1e-12) << l;
  }
  EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(probs[0] + probs[1] + probs[2], 1.0, 1e-12);
}

TEST(StepDistribution, IsolatedNodeThrows) {
  const Graph g = Graph::FromEdges({"a", "b", "c"}, std::vector<Edge>{{0, 1}});
  EXPECT_THROW(StepDistribution(g, std::nullopt, 2, 1.0, 1.0), std::invalid_argument);
}

TEST(GenerateWalks, ForcedPath) {
  const Graph g = FromText("a b");
  WalkConfig cfg;
  cfg.walk_length = 5;
  cfg.walks_per_node = 3;
  const WalkCorpus c = GenerateWalks(g, cfg);
  ASSERT_EQ(c.walks.size(), 6u);
  for (const auto& w : c.walks) {
    ASSERT_EQ(w.size(), 5u);
    for (std::size_t i = 1; i < w.size(); ++i) EXPECT_NE(w[i], w[i - 1]);
  }
}

TEST(GenerateWalks, CountsAdjacencyDeterminism) {
  const Graph g = testing::WattsStrogatz(30, 4, 0.2, 1);
  WalkConfig cfg;
  cfg.walks_per_node = 10;
  cfg.walk_length = 20;
  cfg.return_param_p = 0.5;
  cfg.inout_param_q = 2.0;
  const WalkCorpus a = GenerateWalks(g, cfg);
  EXPECT_EQ(a.walks.size(), 300u);
  for (const auto& w : a.walks) {
    EXPECT_EQ(w.size(), 20u);
    for (std::size_t i = 1; i < w.size(); ++i) EXPECT_TRUE(g.HasEdge(w[i - 1], w[i]));
  }
  EXPECT_EQ(GenerateWalks(g, cfg).walks, a.walks);
  cfg.seed = 2;
  EXPECT_NE(GenerateWalks(g, cfg).walks, a.walks);
}

TEST(GenerateWalks, SkipsIsolated) {
  const Graph g = Graph::FromEdges({"a", "b", "lone"}, std::vector<Edge>{{0, 1}});
  WalkConfig cfg;
  cfg.walks_per_node = 2;
  cfg.walk_length = 4;
  const WalkCorpus c = GenerateWalks(g, cfg);
  EXPECT_EQ(c.walks.size(), 4u);
  EXPECT_EQ(c.skipped_isolated, 1);
}

TEST(GenerateWalks, UniformStepFrequencies) {
  // star centre with 5 leaves; second steps from the centre are uniform
  const Graph g = FromText("c l1\nc l2\nc l3\nc l4\nc l5\n");
  WalkConfig cfg;
  cfg.walks_per_node = 20000;
  cfg.walk_length = 2;
  const int c = *g.IndexOf("c");
  std::vector<double> count(g.num_nodes(), 0.0);
  double total = 0;
  for (const auto& w : GenerateWalks(g, cfg).walks)
    if (w[0] == c) {
      count[w[1]] += 1;
      total += 1;
    }
  ASSERT_EQ(total, 20000);
  const double p = 0.2, se = std::sqrt(total * p * (1 - p));
  for (int v = 0; v < g.num_nodes(); ++v)
    if (v != c) EXPECT_LT(std::abs(count[v] - total * p), 3 * se);
}

TEST(TrainSkipGram, ShapeDeterminismAndLoss) {
  const Graph g = testing::WattsStrogatz(34, 4, 0.1, 3);
  WalkConfig w;
  w.walks_per_node = 10;
  w.walk_length = 40;
  const auto corpus = GenerateWalks(g, w);
  SkipGramConfig s;
  s.dim = 64;
  s.epochs = 5;
  const SkipGramResult a = TrainSkipGram(corpus.walks, g.num_nodes(), s);
  EXPECT_EQ(a.embedding.vectors.cols(), 64);
  EXPECT_EQ(a.embedding.vectors.rows(), 34);
  EXPECT_TRUE(a.embedding.vectors.allFinite());
  ASSERT_EQ(a.epoch_loss.size(), 5u);
  EXPECT_EQ(TrainSkipGram(corpus.walks, g.num_nodes(), s).embedding, a.embedding);
  // with a wide window the per-epoch loss can creep back up late; short window is monotone
  s.window = 2;
  const SkipGramResult narrow = TrainSkipGram(corpus.walks, g.num_nodes(), s);
  for (std::size_t e = 1; e < narrow.epoch_loss.size(); ++e)
    EXPECT_LT(narrow.epoch_loss[e], narrow.epoch_loss[e - 1]);
  EXPECT_THROW(TrainSkipGram({}, 3, s), std::invalid_argument);
  std::vector<std::vector<int>> bad = {{0, 7}};
  EXPECT_THROW(TrainSkipGram(bad, 3, s), std::invalid_argument);
}

TEST(EmbedGraph, TwoCliquesSeparate) {
  std::vector<Edge> edges;
  for (int base : {0, 10})
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) edges.emplace_back(base + i, base + j);
  const Graph g = Graph::FromEdges(testing::IndexLabels(20), edges);
  WalkConfig w;
  w.walk_length = 30;
  SkipGramConfig s;
  s.dim = 16;
  const EmbeddingMatrix x = EmbedGraph(g, w, s);
  auto cosine = [&](int a, int b) {
    return x.vectors.row(a).dot(x.vectors.row(b)) /
           (x.vectors.row(a).norm() * x.vectors.row(b).norm());
  };
  double intra = 0, inter = 0;
  int ni = 0, nx = 0;
  for (int a = 0; a < 20; ++a)
    for (int b = a + 1; b < 20; ++b) {
      if ((a < 10) == (b < 10)) {
        intra += cosine(a, b);
        ++ni;
      } else {
        inter += cosine(a, b);
        ++nx;
      }
    }
  EXPECT_GT(intra / ni, inter / nx);
}

TEST(EmbedGraph, ShapeIsolatedAndDeterminism) {
  const Graph ws = testing::WattsStrogatz(100, 4, 0.1, 2);
  WalkConfig w;
  w.walks_per_node = 2;
  w.walk_length = 10;
  SkipGramConfig s;
  s.epochs = 1;
  const EmbeddingMatrix x = EmbedGraph(ws, w, s);
  EXPECT_EQ(x.rows(), 100);
  EXPECT_EQ(x.dim(), 64);
  EXPECT_EQ(x.labels, ws.labels());
  EXPECT_EQ(EmbedGraph(ws, w, s), x);

  const Graph g = Graph::FromEdges({"a", "b", "c", "lone"}, std::vector<Edge>{{0, 1}, {1, 2}});
  const EmbeddingMatrix y = EmbedGraph(g, w, s);
  EXPECT_TRUE(y.vectors.row(3).isZero(0.0));
  EXPECT_FALSE(y.vectors.row(0).isZero(0.0));
}

TEST(EmbeddingIo, RoundTripExact) {
  EmbeddingMatrix x = testing::MakeEmbedding(testing::GaussianMatrix(7, 5, 1), "n");
  x.vectors(0, 0) = 0.1;
  x.vectors(1, 1) = -1e-300;
  x.vectors(2, 2) = 123456789.123456789;
  std::ostringstream out;
  WriteEmbedding(x, out);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadEmbedding(in), x);
  EXPECT_EQ(out.str().substr(0, 4), "7 5\n");
}

TEST(EmbeddingIo, Malformed) {
  std::istringstream short_row("2 3\na 1 2 3\nb 1 2\n");
  EXPECT_THROW(ReadEmbedding(short_row), ParseError);
  std::istringstream bad_number("1 2\na 1 zz\n");
  EXPECT_THROW(ReadEmbedding(bad_number), ParseError);
  std::istringstream missing("3 2\na 1 2\n");
  EXPECT_THROW(ReadEmbedding(missing), DataError);
}

TEST(StandardizeColumns, ZeroMeanUnitVariance) {
  const EmbeddingMatrix x = testing::MakeEmbedding(testing::GaussianMatrix(50, 4, 3, 5.0));
  const EmbeddingMatrix z = StandardizeColumns(x);
  for (int c = 0; c < 4; ++c) {
    const auto col = z.vectors.col(c);
    const double mean = col.mean();
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR((col.array() - mean).square().mean(), 1.0, 1e-12);
  }
}

TEST(Configs, Validation) {
  WalkConfig w;
  w.walk_length = 1;
  EXPECT_THROW(w.Validate(), std::invalid_argument);
  w = WalkConfig{};
  w.return_param_p = 0;
  EXPECT_THROW(w.Validate(), std::invalid_argument);
  SkipGramConfig s;
  s.negatives_per_positive = 0;
  EXPECT_THROW(s.Validate(), std::invalid_argument);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(2.0), "2");
  EXPECT_EQ(FormatDouble(-1.5e-7), "-1.5e-07");
}

}  // namespace
}  // namespace netalign
