#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "netalign/errors.h"
#include "netalign/evaluation.h"
#include "netalign/experiment.h"
#include "test_util.h"

namespace netalign {
namespace {

namespace fs = std::filesystem;

PipelineConfig Tiny() {
  PipelineConfig cfg = PipelineConfigFromMap({{"walks", "2"},
                                              {"walk_length", "10"},
                                              {"dim", "8"},
                                              {"window", "3"},
                                              {"sg_epochs", "1"},
                                              {"epochs", "3"},
                                              {"hidden", "8"},
                                              {"grid", "single"},
                                              {"seed", "5"}});
  return cfg;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(PipelineConfig, FromMap) {
  const PipelineConfig d = PipelineConfigFromMap({});
  EXPECT_EQ(d.grid.size(), 18u);
  EXPECT_NE(d.walk1.seed, d.walk2.seed);
  EXPECT_NE(d.skipgram1.seed, d.walk1.seed);
  const PipelineConfig t = Tiny();
  ASSERT_EQ(t.grid.size(), 1u);
  EXPECT_EQ(t.grid[0].epochs, 3);
  EXPECT_EQ(t.skipgram2.dim, 8);
  EXPECT_EQ(PipelineConfigToMap(t).at("grid_size"), "1");
  EXPECT_THROW(PipelineConfigFromMap({{"bogus", "1"}}), std::invalid_argument);
  EXPECT_THROW(PipelineConfigFromMap({{"grid", "/no/such/grid"}}), DataError);
}

TEST(PseudoGroundTruth, PermutationAndNoise) {
  const Graph g = testing::WattsStrogatz(60, 4, 0.1, 1);
  const PseudoGroundTruth clean = MakePseudoGroundTruth(g, 0.0, 3);
  EXPECT_EQ(clean.graph.num_nodes(), 60);
  EXPECT_EQ(clean.graph.num_edges(), g.num_edges());
  ASSERT_EQ(clean.truth.size(), 60u);
  clean.truth.Validate();
  std::map<std::string, std::string> to_orig(clean.truth.pairs.begin(), clean.truth.pairs.end());
  for (const auto& [a, b] : clean.truth.pairs) {
    const int u = *clean.graph.IndexOf(a), v = *g.IndexOf(b);
    std::set<std::string> mapped, orig;
    for (int x : clean.graph.neighbors(u)) mapped.insert(to_orig.at(clean.graph.label(x)));
    for (int x : g.neighbors(v)) orig.insert(g.label(x));
    EXPECT_EQ(mapped, orig);
  }
  const PseudoGroundTruth noisy = MakePseudoGroundTruth(g, 0.2, 3);
  EXPECT_EQ(noisy.graph.num_edges(), g.num_edges() - g.num_edges() / 5);
  EXPECT_EQ(noisy.truth.pairs, clean.truth.pairs);
}

TEST(NoiseExperiment, IdentityHooksGivePerfectAccuracy) {
  const Graph g = testing::WattsStrogatz(40, 4, 0.1, 2);
  NoiseExperimentOptions opt;
  opt.share_embeddings = true;
  opt.train = false;
  const ExperimentReport r = RunNoiseExperiment(g, {0.0}, Tiny(), opt);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].accuracy, 1.0);
  EXPECT_EQ(r.records[0].mean_nn_distance, 0.0);
}

TEST(NoiseExperiment, RecordsSortedAndReproducible) {
  const Graph g = testing::WattsStrogatz(40, 4, 0.1, 2);
  const ExperimentReport a = RunNoiseExperiment(g, {0.2, 0.05, 0.1}, Tiny());
  ASSERT_EQ(a.records.size(), 3u);
  EXPECT_EQ(a.records[0].noise, 0.05);
  EXPECT_EQ(a.records[1].noise, 0.1);
  EXPECT_EQ(a.records[2].noise, 0.2);
  // a level's result depends only on (seed, level)
  const ExperimentReport b = RunNoiseExperiment(g, {0.1}, Tiny());
  EXPECT_EQ(b.records[0].accuracy, a.records[1].accuracy);
  EXPECT_EQ(b.records[0].mean_nn_distance, a.records[1].mean_nn_distance);
  for (const auto& rec : a.records) {
    EXPECT_GE(rec.accuracy, 0.0);
    EXPECT_LE(rec.accuracy, 1.0);
  }
  EXPECT_THROW(RunNoiseExperiment(g, {0.1, 0.1}, Tiny()), std::invalid_argument);
  EXPECT_THROW(RunNoiseExperiment(g, {1.5}, Tiny()), std::invalid_argument);
}

TEST(Report, JsonRoundTripAndTable) {
  ExperimentReport r;
  r.seed = 42;
  r.config = {{"lambda", "10"}, {"grid", "single"}};
  r.records = {NoiseRecord{0.05, 0.5, 1.0 / 3.0, Direction::k2to1, 0.125},
               NoiseRecord{0.1, 0.25, 2.5, Direction::k1to2, 7}};
  std::stringstream ss;
  WriteReport(r, ss);
  EXPECT_EQ(ReadReport(ss), r);
  std::ostringstream table;
  WriteReportTable(r, table);
  EXPECT_EQ(table.str().substr(0, table.str().find('\n')),
            "noise\taccuracy\tmean_nn_distance\tdirection\truntime_seconds");
  std::istringstream bad("[1, 2]");
  EXPECT_THROW(ReadReport(bad), DataError);
}

TEST(Pipeline, SmokeAndArtifacts) {
  const Graph g1 = testing::WattsStrogatz(100, 4, 0.1, 8);
  const PseudoGroundTruth pg = MakePseudoGroundTruth(g1, 0.05, 9);
  const fs::path root = fs::temp_directory_path() / "netalign_pipeline_test";
  fs::remove_all(root);
  PipelineConfig cfg = Tiny();
  cfg.output_dir = (root / "a").string();
  const PipelineResult a = RunPipeline(pg.graph, g1, cfg);
  EXPECT_EQ(a.result().pairs.size(), 100u);
  const double acc = Accuracy(a.result(), pg.truth);
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
  for (const char* f : {"emb1.txt", "emb2.txt", "checkpoint.json", "train.log",
                        "selection.tsv", "alignment.tsv"})
    EXPECT_TRUE(fs::exists(root / "a" / f)) << f;

  cfg.output_dir = (root / "b").string();
  RunPipeline(pg.graph, g1, cfg);
  for (const auto& entry : fs::directory_iterator(root / "a"))
    EXPECT_EQ(Slurp(entry.path()), Slurp(root / "b" / entry.path().filename()))
        << entry.path().filename();

  cfg.output_dir.clear();
  const PipelineResult e = RunPipelineFromEmbeddings(a.x1, a.x2, cfg);
  EXPECT_EQ(e.result().pairs, a.result().pairs);
  fs::remove_all(root);
}

TEST(Pipeline, StageNameInErrors) {
  const Graph g1 = testing::WattsStrogatz(30, 4, 0.1, 8);
  PipelineConfig cfg = Tiny();
  cfg.skipgram2.dim = 9;
  EXPECT_THROW(RunPipeline(g1, g1, cfg), std::invalid_argument);

  const EmbeddingMatrix x1 = testing::MakeEmbedding(testing::GaussianMatrix(10, 8, 1));
  const EmbeddingMatrix x2 = testing::MakeEmbedding(testing::GaussianMatrix(10, 9, 2));
  try {
    RunPipelineFromEmbeddings(x1, x2, Tiny());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("reading embeddings: ", 0), 0u) << e.what();
  }
}

}  // namespace
}  // namespace netalign
