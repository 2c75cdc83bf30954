#include <sstream>

#include <gtest/gtest.h>

#include "netalign/errors.h"
#include "netalign/evaluation.h"
#include "test_util.h"

namespace netalign {
namespace {

AlignmentResult Pairs(std::vector<std::pair<std::string, std::string>> pairs,
                      Direction d = Direction::k1to2) {
  AlignmentResult r;
  r.pairs = std::move(pairs);
  r.direction = d;
  return r;
}

Correspondence Truth(std::vector<std::pair<std::string, std::string>> pairs) {
  Correspondence c;
  c.pairs = std::move(pairs);
  return c;
}

TEST(Accuracy, Examples) {
  const Correspondence truth = Truth({{"a", "x"}, {"b", "y"}});
  EXPECT_EQ(Accuracy(Pairs({{"a", "x"}, {"b", "y"}}), truth), 1.0);
  EXPECT_EQ(Accuracy(Pairs({{"a", "y"}, {"b", "x"}}), truth), 0.0);

  const Correspondence four = Truth({{"1", "1"}, {"2", "2"}, {"3", "3"}, {"4", "4"}});
  const AccuracyBreakdown half =
      ScoreAlignment(Pairs({{"1", "1"}, {"2", "2"}, {"3", "1"}, {"4", "3"}}), four);
  EXPECT_EQ(half.correct, 2u);
  EXPECT_EQ(half.evaluated, 4u);
  EXPECT_EQ(half.accuracy(), 0.5);
}

TEST(Accuracy, ReversedDirectionFlipsTruth) {
  const Correspondence truth = Truth({{"a", "x"}, {"b", "y"}, {"c", "z"}});
  const AlignmentResult r = Pairs({{"x", "a"}, {"y", "c"}, {"z", "c"}}, Direction::k2to1);
  const AccuracyBreakdown s = ScoreAlignment(r, truth);
  EXPECT_EQ(s.correct, 2u);
  EXPECT_EQ(s.evaluated, 3u);
}

TEST(Accuracy, DenominatorCountsOnlyCoveredSources) {
  const Correspondence truth = Truth({{"a", "x"}, {"b", "y"}, {"q", "w"}});
  const AccuracyBreakdown s = ScoreAlignment(Pairs({{"a", "x"}, {"b", "x"}}), truth);
  EXPECT_EQ(s.truth_pairs, 3u);
  EXPECT_EQ(s.evaluated, 2u);
  EXPECT_EQ(s.correct, 1u);
}

TEST(Accuracy, RelabelInvariant) {
  const Correspondence truth = Truth({{"a", "x"}, {"b", "y"}, {"c", "z"}});
  const AlignmentResult r = Pairs({{"a", "x"}, {"b", "z"}, {"c", "z"}});
  auto rename = [](const std::string& s) { return "node_" + s + "_renamed"; };
  Correspondence t2;
  for (const auto& [s, t] : truth.pairs) t2.pairs.emplace_back(rename(s), rename(t));
  AlignmentResult r2 = r;
  for (auto& [s, t] : r2.pairs) s = rename(s), t = rename(t);
  EXPECT_EQ(Accuracy(r, truth), Accuracy(r2, t2));
}

TEST(Accuracy, Errors) {
  EXPECT_THROW(Accuracy(Pairs({{"a", "x"}}), Correspondence{}), DataError);
  EXPECT_THROW(Accuracy(Pairs({{"a", "x"}}), Truth({{"b", "y"}})), DataError);
}

TEST(HeuristicReport, SelfAlignmentAtEverySnapshot) {
  const EmbeddingMatrix x = testing::MakeEmbedding(testing::GaussianMatrix(40, 3, 1));
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.snapshot_every = 1;
  cfg.hidden_units = 8;
  cfg.batch_size = 8;
  const TrainedAligner t = Train(x, x, cfg);
  const auto rows = HeuristicReport(t.history, testing::IdentityTruth(40), x, x);
  ASSERT_EQ(rows.size(), t.history.records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].epoch, t.history.records[i].epoch);
    EXPECT_EQ(rows[i].mean_nn_distance, t.history.records[i].mean_nn());
  }
  EXPECT_EQ(rows.front().accuracy, 1.0);  // identity init, same set
  std::ostringstream out;
  WriteHeuristicReport(rows, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "epoch\tmean_nn_distance\taccuracy\tdirection");
}

TEST(HeuristicReport, NeedsSnapshots) {
  const EmbeddingMatrix x = testing::MakeEmbedding(testing::GaussianMatrix(5, 2, 1));
  EXPECT_THROW(HeuristicReport(TrainHistory{}, testing::IdentityTruth(5), x, x),
               std::invalid_argument);
}

}  // namespace
}  // namespace netalign
