// netalign: command-line front end for every pipeline stage.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netalign/alignment.h"
#include "netalign/checkpoint.h"
#include "netalign/config.h"
#include "netalign/errors.h"
#include "netalign/evaluation.h"
#include "netalign/experiment.h"
#include "netalign/graph.h"
#include "netalign/log.h"
#include "netalign/pca.h"
#include "netalign/trainer.h"
#include "netalign/walk_embedding.h"

namespace na = netalign;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

const std::vector<std::string> kWalkKeys = {"walks", "walk_length", "p", "q"};
const std::vector<std::string> kSkipGramKeys = {"dim", "window", "negatives", "sg_epochs",
                                                "sg_lr"};
const std::vector<std::string> kTrainKeys = {
    "lambda", "eta",       "epochs", "batch", "variant", "snapshot_every", "loss_mode",
    "hidden", "slope",     "lr",     "g_lr",  "d_lr",    "beta1",          "beta2",
    "adam_eps"};

// Settings given on the command line; merged over the --config file later.
struct Overrides {
  na::ConfigMap values;
};

void AddKeys(CLI::App* app, Overrides& ov, const std::vector<std::string>& keys) {
  for (const auto& key : keys) {
    std::string names = "--" + key;
    std::string dashed = key;
    for (char& c : dashed)
      if (c == '_') c = '-';
    if (dashed != key) names += ",--" + dashed;
    app->add_option_function<std::string>(
        names, [&ov, key](const std::string& v) { ov.values[key] = v; }, "sets " + key);
  }
}

void AddBoolKey(CLI::App* app, Overrides& ov, const std::string& key, const std::string& help) {
  app->add_flag_callback("--" + key, [&ov, key] { ov.values[key] = "true"; }, help);
}

na::ConfigMap Merge(const std::string& config_path, const Overrides& ov) {
  na::ConfigMap m;
  if (!config_path.empty()) m = na::ReadConfigFile(config_path);
  for (const auto& [k, v] : ov.values) m[k] = v;
  na::ValidateKeys(m);
  return m;
}

std::pair<std::string, std::string> SplitPair(const std::vector<std::string>& outs,
                                              const char* what) {
  if (outs.size() != 2)
    throw std::invalid_argument(std::string("-o expects two paths: ") + what);
  return {outs[0], outs[1]};
}

template <typename W>
void WriteTo(const std::string& path, W&& write) {
  if (path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw na::DataError("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw na::DataError("write error on '" + path + "'");
}

void PrintStats(const na::GraphStats& s) {
  std::cout << "nodes1\t" << s.num_nodes1 << "\nedges1\t" << s.num_edges1 << '\n';
  if (s.num_nodes2) std::cout << "nodes2\t" << *s.num_nodes2 << "\nedges2\t" << *s.num_edges2 << '\n';
  if (s.overlap_nodes) std::cout << "overlap_nodes\t" << *s.overlap_nodes << '\n';
  if (s.overlap_edges) std::cout << "overlap_edges\t" << *s.overlap_edges << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised network alignment via adversarial embedding mapping"};
  app.require_subcommand(1);
  std::string config_path;
  bool verbose = false, quiet = false;
  app.add_option("--config", config_path, "flat key=value settings file")
      ->check(CLI::ExistingFile);
  app.add_flag("-v,--verbose", verbose, "progress on stderr");
  app.add_flag("-q,--quiet", quiet, "suppress warnings");
  Overrides ov;

  // embed
  std::string embed_graph, embed_out;
  auto* embed = app.add_subcommand("embed", "random walks + skip-gram node embedding");
  embed->add_option("graph", embed_graph, "edge list")->required();
  embed->add_option("-o,--output", embed_out, "embedding file")->required();
  AddKeys(embed, ov, kWalkKeys);
  AddKeys(embed, ov, kSkipGramKeys);
  AddKeys(embed, ov, {"seed"});
  AddBoolKey(embed, ov, "signed", "keep negative-weight edges");

  // perturb
  std::string perturb_graph;
  double perturb_noise = 0.0;
  std::vector<std::string> perturb_out;
  auto* perturb = app.add_subcommand("perturb", "permuted, edge-dropped copy with ground truth");
  perturb->add_option("graph", perturb_graph, "edge list")->required();
  perturb->add_option("--noise", perturb_noise, "fraction of edges removed")->required();
  AddKeys(perturb, ov, {"seed"});
  AddBoolKey(perturb, ov, "signed", "keep negative-weight edges");
  perturb->add_option("-o,--output", perturb_out, "graph,truth")
      ->required()->delimiter(',')->expected(2);

  // train
  std::string train_emb1, train_emb2, train_truth, train_report;
  std::vector<std::string> train_out;
  auto* train = app.add_subcommand("train", "adversarial training of one configuration");
  train->add_option("emb1", train_emb1)->required();
  train->add_option("emb2", train_emb2)->required();
  train->add_option("-o,--output", train_out, "checkpoint,log")
      ->required()->delimiter(',')->expected(2);
  train->add_option("--truth", train_truth, "ground truth for --report");
  train->add_option("--report", train_report, "per-snapshot heuristic/accuracy table")
      ->needs("--truth");
  AddKeys(train, ov, kTrainKeys);
  AddKeys(train, ov, {"seed"});
  AddBoolKey(train, ov, "standardize", "standardize embedding columns first");
  bool train_final = false;
  train->add_flag("--final", train_final, "save final parameters instead of the best snapshot");

  // select
  std::string select_emb1, select_emb2, select_grid = "default";
  std::vector<std::string> select_out;
  auto* select = app.add_subcommand("select", "train a grid and keep the best heuristic score");
  select->add_option("emb1", select_emb1)->required();
  select->add_option("emb2", select_emb2)->required();
  select->add_option("--grid", select_grid, "grid file, or 'default'");
  select->add_option("-o,--output", select_out, "checkpoint,log")->delimiter(',')->expected(2);
  AddKeys(select, ov, kTrainKeys);
  AddKeys(select, ov, {"seed", "threads"});
  AddBoolKey(select, ov, "standardize", "standardize embedding columns first");

  // align
  std::string align_ckpt, align_emb1, align_emb2, align_out, align_direction = "auto";
  auto* align = app.add_subcommand("align", "nearest-neighbor alignment with a checkpoint");
  align->add_option("checkpoint", align_ckpt)->required();
  align->add_option("emb1", align_emb1)->required();
  align->add_option("emb2", align_emb2)->required();
  align->add_option("-o,--output", align_out, "alignment tsv")->required();
  align->add_option("--direction", align_direction, "auto, 1to2 or 2to1");
  AddKeys(align, ov, {"threads"});
  AddBoolKey(align, ov, "standardize", "standardize embedding columns first");

  // eval
  std::string eval_alignment, eval_truth;
  auto* eval = app.add_subcommand("eval", "accuracy of an alignment against ground truth");
  eval->add_option("alignment", eval_alignment)->required();
  eval->add_option("truth", eval_truth)->required();

  // pipeline
  std::string pipe_g1, pipe_g2, pipe_out = "netalign_out", pipe_truth;
  auto* pipeline = app.add_subcommand("pipeline", "embed, select, align end to end");
  pipeline->add_option("graph1", pipe_g1)->required();
  pipeline->add_option("graph2", pipe_g2)->required();
  pipeline->add_option("-o,--output", pipe_out, "artifact directory");
  pipeline->add_option("--truth", pipe_truth, "ground truth to score against");
  AddKeys(pipeline, ov, kWalkKeys);
  AddKeys(pipeline, ov, kSkipGramKeys);
  AddKeys(pipeline, ov, kTrainKeys);
  AddKeys(pipeline, ov, {"seed", "threads", "grid"});
  AddBoolKey(pipeline, ov, "standardize", "standardize embedding columns first");
  AddBoolKey(pipeline, ov, "signed", "keep negative-weight edges");

  // sweep
  std::string sweep_graph, sweep_out = "netalign_sweep";
  auto* sweep = app.add_subcommand("sweep", "noise sweep on a pseudo-ground-truth benchmark");
  sweep->add_option("graph", sweep_graph)->required();
  sweep->add_option("-o,--output", sweep_out, "report directory");
  AddKeys(sweep, ov, kWalkKeys);
  AddKeys(sweep, ov, kSkipGramKeys);
  AddKeys(sweep, ov, kTrainKeys);
  AddKeys(sweep, ov, {"seed", "threads", "grid", "noise_levels"});
  AddBoolKey(sweep, ov, "standardize", "standardize embedding columns first");
  AddBoolKey(sweep, ov, "signed", "keep negative-weight edges");

  // pca
  std::string pca_emb, pca_out = "-";
  int pca_k = 2;
  auto* pca = app.add_subcommand("pca", "principal component coordinates");
  pca->add_option("embedding", pca_emb)->required();
  pca->add_option("-k", pca_k, "components")->check(CLI::PositiveNumber);
  pca->add_option("-o,--output", pca_out, "coordinates tsv");

  // stats
  std::string stats_g1, stats_g2, stats_truth;
  auto* stats = app.add_subcommand("stats", "node/edge counts and overlap");
  stats->add_option("graph1", stats_g1)->required();
  stats->add_option("graph2", stats_g2);
  stats->add_option("truth", stats_truth);
  AddBoolKey(stats, ov, "signed", "keep negative-weight edges");

  // pipeline accepts its own --config after the subcommand too
  pipeline->add_option("--config", config_path, "flat key=value settings file")
      ->check(CLI::ExistingFile);
  sweep->add_option("--config", config_path, "flat key=value settings file")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (verbose) na::SetLogLevel(na::LogLevel::kInfo);
  if (quiet) na::SetLogLevel(na::LogLevel::kQuiet);

  try {
    const na::ConfigMap cfg = Merge(config_path, ov);
    const bool signed_mode = na::GetBool(cfg, "signed", false);
    const int threads = static_cast<int>(na::GetInt(cfg, "threads", 1));

    if (*embed) {
      na::WalkConfig w;
      na::SkipGramConfig s;
      na::ApplyWalkConfig(cfg, w);
      na::ApplySkipGramConfig(cfg, s);
      const na::Graph g = na::ReadEdgeListFile(embed_graph, signed_mode);
      na::WriteEmbeddingFile(na::EmbedGraph(g, w, s), embed_out);
    } else if (*perturb) {
      const auto [graph_out, truth_out] = SplitPair(perturb_out, "graph,truth");
      const na::Graph g = na::ReadEdgeListFile(perturb_graph, signed_mode);
      const auto seed = static_cast<std::uint64_t>(na::GetInt(cfg, "seed", 1));
      const na::PseudoGroundTruth bench = na::MakePseudoGroundTruth(g, perturb_noise, seed);
      na::WriteEdgeListFile(bench.graph, graph_out);
      na::WriteCorrespondenceFile(bench.truth, truth_out);
    } else if (*train) {
      const auto [ckpt_out, log_out] = SplitPair(train_out, "checkpoint,log");
      na::TrainConfig t;
      na::ApplyTrainConfig(cfg, t);
      na::EmbeddingMatrix x1 = na::ReadEmbeddingFile(train_emb1);
      na::EmbeddingMatrix x2 = na::ReadEmbeddingFile(train_emb2);
      if (na::GetBool(cfg, "standardize", false)) {
        x1 = na::StandardizeColumns(x1);
        x2 = na::StandardizeColumns(x2);
      }
      const na::TrainedAligner run = na::Train(x1, x2, t);
      na::SaveCheckpointFile({train_final ? run.params : na::BestParams(run), t}, ckpt_out);
      WriteTo(log_out, [&](std::ostream& o) { na::WriteTrainLog(run.history, o); });
      if (!train_report.empty()) {
        const na::Correspondence truth = na::ReadCorrespondenceFile(train_truth);
        const auto rows = na::HeuristicReport(run.history, truth, x1, x2, threads);
        WriteTo(train_report, [&](std::ostream& o) { na::WriteHeuristicReport(rows, o); });
      }
    } else if (*select) {
      na::TrainConfig base;
      na::ApplyTrainConfig(cfg, base);
      const std::vector<na::TrainConfig> grid =
          select_grid == "default" ? na::DefaultGrid(base) : na::ReadGridFile(select_grid, base);
      na::EmbeddingMatrix x1 = na::ReadEmbeddingFile(select_emb1);
      na::EmbeddingMatrix x2 = na::ReadEmbeddingFile(select_emb2);
      if (na::GetBool(cfg, "standardize", false)) {
        x1 = na::StandardizeColumns(x1);
        x2 = na::StandardizeColumns(x2);
      }
      const na::ModelSelection sel = na::ModelSelect(x1, x2, grid, threads);
      std::cout << "index\tlambda\teta\tvariant\tscore\n";
      for (std::size_t i = 0; i < grid.size(); ++i)
        std::cout << i << '\t' << na::FormatDouble(grid[i].lambda) << '\t' << grid[i].eta
                  << '\t'
                  << (grid[i].mapper_variant == na::MapperVariant::kLinear ? "linear"
                                                                           : "nonlinear")
                  << '\t' << na::FormatDouble(sel.scores[i]) << '\n';
      std::cout << "chosen\t" << sel.config_index << '\n';
      if (!select_out.empty()) {
        const auto [ckpt_out, log_out] = SplitPair(select_out, "checkpoint,log");
        na::SaveCheckpointFile({sel.aligner.params, sel.config}, ckpt_out);
        WriteTo(log_out, [&](std::ostream& o) { na::WriteTrainLog(sel.aligner.history, o); });
      }
    } else if (*align) {
      const na::Checkpoint ckpt = na::LoadCheckpointFile(align_ckpt);
      na::EmbeddingMatrix x1 = na::ReadEmbeddingFile(align_emb1);
      na::EmbeddingMatrix x2 = na::ReadEmbeddingFile(align_emb2);
      if (na::GetBool(cfg, "standardize", false)) {
        x1 = na::StandardizeColumns(x1);
        x2 = na::StandardizeColumns(x2);
      }
      na::AlignmentResult result;
      if (align_direction == "auto") {
        result = na::AlignBidirectional(ckpt.params, x1, x2, threads);
      } else if (na::ParseDirection(align_direction) == na::Direction::k1to2) {
        result = na::AlignDirection(ckpt.params.g12, x1, x2, na::Direction::k1to2, threads);
      } else {
        result = na::AlignDirection(ckpt.params.g21, x2, x1, na::Direction::k2to1, threads);
      }
      WriteTo(align_out, [&](std::ostream& o) { na::WriteAlignment(result, o); });
    } else if (*eval) {
      const na::AlignmentResult result = na::ReadAlignmentFile(eval_alignment);
      const na::Correspondence truth = na::ReadCorrespondenceFile(eval_truth);
      const na::AccuracyBreakdown b = na::ScoreAlignment(result, truth);
      std::cout << "accuracy\t" << na::FormatDouble(b.accuracy()) << "\ncorrect\t" << b.correct
                << "\nevaluated\t" << b.evaluated << "\ntruth_pairs\t" << b.truth_pairs
                << "\ndirection\t" << na::DirectionName(result.direction) << '\n';
    } else if (*pipeline) {
      na::PipelineConfig pc = na::PipelineConfigFromMap(cfg);
      pc.output_dir = pipe_out;
      const na::Graph g1 = na::ReadEdgeListFile(pipe_g1, pc.signed_mode);
      const na::Graph g2 = na::ReadEdgeListFile(pipe_g2, pc.signed_mode);
      const na::PipelineResult r = na::RunPipeline(g1, g2, pc);
      std::cout << "direction\t" << na::DirectionName(r.result().direction)
                << "\nmean_nn_distance\t" << na::FormatDouble(r.result().mean_nn_distance)
                << "\nchosen_config\t" << r.selection.config_index << '\n';
      if (!pipe_truth.empty()) {
        const na::Correspondence truth = na::ReadCorrespondenceFile(pipe_truth);
        std::cout << "accuracy\t" << na::FormatDouble(na::Accuracy(r.result(), truth)) << '\n';
      }
    } else if (*sweep) {
      na::PipelineConfig pc = na::PipelineConfigFromMap(cfg);
      pc.output_dir = sweep_out;
      const na::Graph g = na::ReadEdgeListFile(sweep_graph, pc.signed_mode);
      const na::ExperimentReport report = na::RunNoiseExperiment(g, pc.noise_levels, pc);
      std::filesystem::create_directories(sweep_out);
      const auto dir = std::filesystem::path(sweep_out);
      WriteTo((dir / "report.json").string(), [&](std::ostream& o) { na::WriteReport(report, o); });
      WriteTo((dir / "report.tsv").string(),
              [&](std::ostream& o) { na::WriteReportTable(report, o); });
      na::WriteReportTable(report, std::cout);
    } else if (*pca) {
      const na::EmbeddingMatrix x = na::ReadEmbeddingFile(pca_emb);
      const na::PcaResult p = na::PcaProject(x.vectors, pca_k);
      WriteTo(pca_out, [&](std::ostream& o) { na::WritePcaCoordinates(x, p, o); });
    } else if (*stats) {
      const na::Graph g1 = na::ReadEdgeListFile(stats_g1, signed_mode);
      std::optional<na::Graph> g2;
      std::optional<na::Correspondence> truth;
      if (!stats_g2.empty()) g2 = na::ReadEdgeListFile(stats_g2, signed_mode);
      if (!stats_truth.empty()) truth = na::ReadCorrespondenceFile(stats_truth);
      PrintStats(na::ComputeGraphStats(g1, g2 ? &*g2 : nullptr, truth ? &*truth : nullptr));
    }
  } catch (const na::NumericError& e) {
    std::cerr << "netalign: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const na::DataError& e) {
    std::cerr << "netalign: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "netalign: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "netalign: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "netalign: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
