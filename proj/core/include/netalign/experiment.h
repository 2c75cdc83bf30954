#ifndef NETALIGN_EXPERIMENT_H_
#define NETALIGN_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netalign/alignment.h"
#include "netalign/config.h"
#include "netalign/graph.h"
#include "netalign/trainer.h"
#include "netalign/walk_embedding.h"

namespace netalign {

struct PipelineConfig {
  WalkConfig walk1, walk2;
  SkipGramConfig skipgram1, skipgram2;
  std::vector<TrainConfig> grid;
  bool standardize = false;
  bool signed_mode = false;   // edge-list parsing
  std::string output_dir;     // artifacts are written here when non-empty
  int threads = 1;
  std::uint64_t seed = 1;
  std::vector<double> noise_levels = {0.05, 0.10, 0.20};

  void Validate() const;  // throws std::invalid_argument
};

// Builds a config from flat settings. Per-graph walk / skip-gram seeds are
// derived from `seed`. `grid` is `default` (the 18-entry grid), `single` (just
// the train keys) or a grid file path; it defaults to `default`.
PipelineConfig PipelineConfigFromMap(const ConfigMap& config);

// Flat echo of the settings, suitable for reports.
ConfigMap PipelineConfigToMap(const PipelineConfig& cfg);

struct PipelineResult {
  EmbeddingMatrix x1, x2;
  ModelSelection selection;
  BidirectionalAlignment alignment;

  const AlignmentResult& result() const { return alignment.result(); }
  const TrainHistory& history() const { return selection.aligner.history; }
};

// embed -> model selection -> bidirectional alignment. With an output
// directory, writes emb1.txt, emb2.txt, checkpoint.json, train.log,
// selection.tsv and alignment.tsv there. Errors keep their type but gain the
// failing stage as a message prefix.
PipelineResult RunPipeline(const Graph& g1, const Graph& g2, const PipelineConfig& cfg);
PipelineResult RunPipelineFromEmbeddings(const EmbeddingMatrix& x1,
                                         const EmbeddingMatrix& x2,
                                         const PipelineConfig& cfg);

struct PseudoGroundTruth {
  Graph graph;           // permuted, index-labeled, edges removed
  Correspondence truth;  // (label in `graph`, label in the original)
};

// Permutes g with `seed`, replaces labels by the new indices and removes
// floor(noise * |E|) edges.
PseudoGroundTruth MakePseudoGroundTruth(const Graph& g, double noise,
                                        std::uint64_t seed);

struct NoiseRecord {
  double noise = 0.0;
  double accuracy = 0.0;
  double mean_nn_distance = 0.0;
  Direction direction = Direction::k1to2;
  double runtime_seconds = 0.0;

  friend bool operator==(const NoiseRecord&, const NoiseRecord&) = default;
};

struct ExperimentReport {
  std::vector<NoiseRecord> records;  // noise strictly increasing
  ConfigMap config;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct NoiseExperimentOptions {
  // Test hooks: reuse the original graph's embedding for the permuted copy,
  // and skip training (identity mappers).
  bool share_embeddings = false;
  bool train = true;
};

// For each level: permute g into N1 (index labels), drop that fraction of
// its edges, embed N1 and g independently, select a model, align and score
// against the permutation. Levels are sorted and must be distinct and lie in
// [0, 1]. Each level draws its randomness from (seed, level) only.
ExperimentReport RunNoiseExperiment(const Graph& g, std::vector<double> noise_levels,
                                    const PipelineConfig& cfg,
                                    const NoiseExperimentOptions& options = {});

// Exact JSON round-trip.
void WriteReport(const ExperimentReport& report, std::ostream& out);
ExperimentReport ReadReport(std::istream& in);
// `noise accuracy mean_nn_distance direction runtime_seconds`, with a header.
void WriteReportTable(const ExperimentReport& report, std::ostream& out);

}  // namespace netalign

#endif  // NETALIGN_EXPERIMENT_H_
