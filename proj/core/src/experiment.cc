#include "netalign/experiment.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "netalign/checkpoint.h"
#include "netalign/errors.h"
#include "netalign/evaluation.h"
#include "netalign/log.h"
#include "netalign/random.h"

namespace netalign {
namespace {

using nlohmann::json;

template <typename F>
auto Stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const NumericError& e) {
    throw NumericError(name + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(name + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(name + ": " + e.what());
  }
}

std::filesystem::path Artifact(const PipelineConfig& cfg, const char* name) {
  return std::filesystem::path(cfg.output_dir) / name;
}

template <typename W>
void WriteText(const std::filesystem::path& path, W&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write(out);
  if (!out) throw DataError("write error on '" + path.string() + "'");
}

void Persist(const PipelineConfig& cfg, const PipelineResult& r) {
  if (cfg.output_dir.empty()) return;
  std::filesystem::create_directories(cfg.output_dir);
  WriteEmbeddingFile(r.x1, Artifact(cfg, "emb1.txt").string());
  WriteEmbeddingFile(r.x2, Artifact(cfg, "emb2.txt").string());
  SaveCheckpointFile({r.selection.aligner.params, r.selection.config},
                     Artifact(cfg, "checkpoint.json").string());
  WriteText(Artifact(cfg, "train.log"),
            [&](std::ostream& out) { WriteTrainLog(r.history(), out); });
  WriteText(Artifact(cfg, "selection.tsv"), [&](std::ostream& out) {
    out << "index\tlambda\teta\tvariant\tscore\tchosen\n";
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
      const TrainConfig& t = cfg.grid[i];
      out << i << '\t' << FormatDouble(t.lambda) << '\t' << t.eta << '\t'
          << (t.mapper_variant == MapperVariant::kLinear ? "linear" : "nonlinear")
          << '\t' << FormatDouble(r.selection.scores[i]) << '\t'
          << (i == r.selection.config_index ? 1 : 0) << '\n';
    }
  });
  WriteAlignmentFile(r.result(), Artifact(cfg, "alignment.tsv").string());
}

PipelineResult SelectAndAlign(EmbeddingMatrix x1, EmbeddingMatrix x2,
                              const PipelineConfig& cfg) {
  PipelineResult r;
  if (cfg.standardize) {
    x1 = StandardizeColumns(x1);
    x2 = StandardizeColumns(x2);
  }
  r.x1 = std::move(x1);
  r.x2 = std::move(x2);
  r.selection = Stage("model selection",
                      [&] { return ModelSelect(r.x1, r.x2, cfg.grid, cfg.threads); });
  r.alignment = Stage("alignment", [&] {
    return AlignBothDirections(r.selection.aligner.params, r.x1, r.x2, cfg.threads);
  });
  Stage("writing artifacts", [&] { Persist(cfg, r); });
  return r;
}

std::uint64_t LevelKey(double level) { return std::bit_cast<std::uint64_t>(level); }

AlignerParams IdentityAligner(int dim, const TrainConfig& t) {
  AlignerParams p;
  p.g12 = MapperParams::Identity(dim, t.mapper_variant);
  p.g21 = MapperParams::Identity(dim, t.mapper_variant);
  p.d1 = CriticParams::Zero(dim, t.hidden_units);
  p.d2 = CriticParams::Zero(dim, t.hidden_units);
  return p;
}

}  // namespace

void PipelineConfig::Validate() const {
  walk1.Validate();
  walk2.Validate();
  skipgram1.Validate();
  skipgram2.Validate();
  if (skipgram1.dim != skipgram2.dim)
    throw std::invalid_argument("both graphs must be embedded in the same dimension");
  if (grid.empty()) throw std::invalid_argument("training grid is empty");
  for (const auto& t : grid) t.Validate();
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  for (double f : noise_levels)
    if (!(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("noise levels must lie in [0, 1]");
}

PipelineConfig PipelineConfigFromMap(const ConfigMap& config) {
  ValidateKeys(config);
  PipelineConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(GetInt(config, "seed", 1));
  cfg.threads = static_cast<int>(GetInt(config, "threads", 1));
  cfg.standardize = GetBool(config, "standardize", false);
  cfg.signed_mode = GetBool(config, "signed", false);
  cfg.noise_levels = GetDoubleList(config, "noise_levels", cfg.noise_levels);

  WalkConfig walk;
  SkipGramConfig sg;
  ApplyWalkConfig(config, walk);
  ApplySkipGramConfig(config, sg);
  cfg.walk1 = cfg.walk2 = walk;
  cfg.skipgram1 = cfg.skipgram2 = sg;
  cfg.walk1.seed = DeriveSeed(cfg.seed, {1, 0x77616c6bULL});
  cfg.walk2.seed = DeriveSeed(cfg.seed, {2, 0x77616c6bULL});
  cfg.skipgram1.seed = DeriveSeed(cfg.seed, {1, 0x73676e73ULL});
  cfg.skipgram2.seed = DeriveSeed(cfg.seed, {2, 0x73676e73ULL});

  TrainConfig base;
  ApplyTrainConfig(config, base);
  auto it = config.find("grid");
  const std::string grid = it == config.end() ? "default" : it->second;
  if (grid == "default") {
    cfg.grid = DefaultGrid(base);
  } else if (grid == "single") {
    cfg.grid = {base};
  } else {
    cfg.grid = ReadGridFile(grid, base);
  }
  cfg.Validate();
  return cfg;
}

ConfigMap PipelineConfigToMap(const PipelineConfig& cfg) {
  ConfigMap m = cfg.grid.empty() ? ConfigMap{} : TrainConfigToMap(cfg.grid.front());
  m["seed"] = std::to_string(static_cast<long long>(cfg.seed));
  m["threads"] = std::to_string(cfg.threads);
  m["standardize"] = cfg.standardize ? "true" : "false";
  m["signed"] = cfg.signed_mode ? "true" : "false";
  m["walks"] = std::to_string(cfg.walk1.walks_per_node);
  m["walk_length"] = std::to_string(cfg.walk1.walk_length);
  m["p"] = FormatDouble(cfg.walk1.return_param_p);
  m["q"] = FormatDouble(cfg.walk1.inout_param_q);
  m["dim"] = std::to_string(cfg.skipgram1.dim);
  m["window"] = std::to_string(cfg.skipgram1.window);
  m["negatives"] = std::to_string(cfg.skipgram1.negatives_per_positive);
  m["sg_epochs"] = std::to_string(cfg.skipgram1.epochs);
  m["sg_lr"] = FormatDouble(cfg.skipgram1.learning_rate);
  m["grid_size"] = std::to_string(cfg.grid.size());
  return m;
}

PipelineResult RunPipeline(const Graph& g1, const Graph& g2, const PipelineConfig& cfg) {
  cfg.Validate();
  EmbeddingMatrix x1 =
      Stage("embedding graph 1", [&] { return EmbedGraph(g1, cfg.walk1, cfg.skipgram1); });
  EmbeddingMatrix x2 =
      Stage("embedding graph 2", [&] { return EmbedGraph(g2, cfg.walk2, cfg.skipgram2); });
  return SelectAndAlign(std::move(x1), std::move(x2), cfg);
}

PipelineResult RunPipelineFromEmbeddings(const EmbeddingMatrix& x1,
                                         const EmbeddingMatrix& x2,
                                         const PipelineConfig& cfg) {
  if (cfg.grid.empty()) throw std::invalid_argument("training grid is empty");
  for (const auto& t : cfg.grid) t.Validate();
  Stage("reading embeddings", [&] {
    x1.Validate();
    x2.Validate();
    if (x1.dim() != x2.dim())
      throw DataError("embeddings differ in dimension (" + std::to_string(x1.dim()) +
                      " vs " + std::to_string(x2.dim()) + ")");
  });
  return SelectAndAlign(x1, x2, cfg);
}

PseudoGroundTruth MakePseudoGroundTruth(const Graph& g, double noise,
                                        std::uint64_t seed) {
  PermutedGraph permuted = PermuteNodes(g, DeriveSeed(seed, {0x7065726dULL}));
  PseudoGroundTruth out;
  out.graph = WithIndexLabels(
      RemoveEdges(permuted.graph, noise, DeriveSeed(seed, {0x64726f70ULL})));
  out.truth.pairs.reserve(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v)
    out.truth.pairs.emplace_back(std::to_string(permuted.permutation[v]), g.label(v));
  return out;
}

ExperimentReport RunNoiseExperiment(const Graph& g, std::vector<double> noise_levels,
                                    const PipelineConfig& cfg,
                                    const NoiseExperimentOptions& options) {
  if (noise_levels.empty()) throw std::invalid_argument("no noise levels given");
  std::sort(noise_levels.begin(), noise_levels.end());
  for (std::size_t i = 0; i < noise_levels.size(); ++i) {
    if (!(noise_levels[i] >= 0.0 && noise_levels[i] <= 1.0))
      throw std::invalid_argument("noise levels must lie in [0, 1]");
    if (i > 0 && noise_levels[i] == noise_levels[i - 1])
      throw std::invalid_argument("noise levels must be distinct");
  }
  PipelineConfig base = cfg;
  base.noise_levels = noise_levels;
  base.Validate();

  ExperimentReport report;
  report.seed = cfg.seed;
  report.config = PipelineConfigToMap(base);
  for (double level : noise_levels) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t level_seed = DeriveSeed(cfg.seed, {LevelKey(level)});
    PipelineConfig lc = base;
    lc.walk1.seed = DeriveSeed(level_seed, {1, 0x77616c6bULL});
    lc.walk2.seed = DeriveSeed(level_seed, {2, 0x77616c6bULL});
    lc.skipgram1.seed = DeriveSeed(level_seed, {1, 0x73676e73ULL});
    lc.skipgram2.seed = DeriveSeed(level_seed, {2, 0x73676e73ULL});
    for (auto& t : lc.grid) t.seed = DeriveSeed(t.seed, {LevelKey(level)});
    if (!cfg.output_dir.empty())
      lc.output_dir =
          (std::filesystem::path(cfg.output_dir) / ("noise_" + FormatDouble(level))).string();

    const PseudoGroundTruth bench = Stage("perturbing graph", [&] {
      return MakePseudoGroundTruth(g, level, level_seed);
    });

    EmbeddingMatrix x2 =
        Stage("embedding original", [&] { return EmbedGraph(g, lc.walk2, lc.skipgram2); });
    EmbeddingMatrix x1;
    if (options.share_embeddings) {
      x1.vectors.resize(x2.vectors.rows(), x2.vectors.cols());
      x1.labels = bench.graph.labels();
      for (int v = 0; v < g.num_nodes(); ++v) {
        const int nv = *bench.graph.IndexOf(bench.truth.pairs[v].first);
        x1.vectors.row(nv) = x2.vectors.row(v);
      }
    } else {
      x1 = Stage("embedding permuted copy",
                 [&] { return EmbedGraph(bench.graph, lc.walk1, lc.skipgram1); });
    }

    AlignmentResult result;
    if (options.train) {
      PipelineResult r = SelectAndAlign(std::move(x1), std::move(x2), lc);
      result = r.result();
    } else {
      if (lc.standardize) {
        x1 = StandardizeColumns(x1);
        x2 = StandardizeColumns(x2);
      }
      result = AlignBidirectional(IdentityAligner(x1.dim(), lc.grid.front()), x1, x2,
                                  lc.threads);
    }
    if (!lc.output_dir.empty()) {
      std::filesystem::create_directories(lc.output_dir);
      WriteEdgeListFile(bench.graph, (std::filesystem::path(lc.output_dir) / "graph1.txt").string());
      WriteCorrespondenceFile(bench.truth,
                              (std::filesystem::path(lc.output_dir) / "truth.tsv").string());
    }

    NoiseRecord rec;
    rec.noise = level;
    rec.accuracy = Stage("evaluation", [&] { return Accuracy(result, bench.truth); });
    rec.mean_nn_distance = result.mean_nn_distance;
    rec.direction = result.direction;
    rec.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    LogInfo("noise " + FormatDouble(level) + ": accuracy " + FormatDouble(rec.accuracy));
    report.records.push_back(rec);
  }
  return report;
}

void WriteReport(const ExperimentReport& report, std::ostream& out) {
  json records = json::array();
  for (const auto& r : report.records)
    records.push_back({{"noise", r.noise},
                       {"accuracy", r.accuracy},
                       {"mean_nn_distance", r.mean_nn_distance},
                       {"direction", std::string(DirectionName(r.direction))},
                       {"runtime_seconds", r.runtime_seconds}});
  json config = json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  json j = {{"seed", report.seed}, {"config", config}, {"records", records}};
  out << j.dump(1) << '\n';
}

ExperimentReport ReadReport(std::istream& in) {
  ExperimentReport report;
  try {
    const json j = json::parse(in);
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("config").items()) report.config[k] = v.get<std::string>();
    for (const auto& r : j.at("records")) {
      NoiseRecord rec;
      rec.noise = r.at("noise").get<double>();
      rec.accuracy = r.at("accuracy").get<double>();
      rec.mean_nn_distance = r.at("mean_nn_distance").get<double>();
      rec.direction = ParseDirection(r.at("direction").get<std::string>());
      rec.runtime_seconds = r.at("runtime_seconds").get<double>();
      report.records.push_back(rec);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  return report;
}

void WriteReportTable(const ExperimentReport& report, std::ostream& out) {
  out << "noise\taccuracy\tmean_nn_distance\tdirection\truntime_seconds\n";
  for (const auto& r : report.records)
    out << FormatDouble(r.noise) << '\t' << FormatDouble(r.accuracy) << '\t'
        << FormatDouble(r.mean_nn_distance) << '\t' << DirectionName(r.direction) << '\t'
        << FormatDouble(r.runtime_seconds) << '\n';
}

}  // namespace netalign
