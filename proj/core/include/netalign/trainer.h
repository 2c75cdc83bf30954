#ifndef NETALIGN_TRAINER_H_
#define NETALIGN_TRAINER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "netalign/losses.h"
#include "netalign/neural.h"
#include "netalign/walk_embedding.h"

namespace netalign {

struct TrainConfig {
  double lambda = 10.0;  // cycle-loss weight
  int eta = 1;           // generator updates per critic update
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 1;
  MapperVariant mapper_variant = MapperVariant::kLinear;
  int snapshot_every = 10;
  GeneratorLossMode generator_loss_mode = GeneratorLossMode::kNonsaturating;
  int hidden_units = 512;
  double leaky_slope = 0.2;
  AdamConfig generator_adam;
  AdamConfig critic_adam;
  bool keep_snapshots = true;

  void Validate() const;  // throws std::invalid_argument
};

// Losses are the minimax values evaluated on the full embedding matrices;
// nn12 / nn21 are the mean nearest-neighbor distances of G12(X1) in X2 and of
// G21(X2) in X1.
struct SnapshotRecord {
  int epoch = 0;
  double adv12 = 0.0;
  double adv21 = 0.0;
  double cycle = 0.0;
  double total = 0.0;
  double nn12 = 0.0;
  double nn21 = 0.0;

  double mean_nn() const { return 0.5 * (nn12 + nn21); }
};

struct TrainHistory {
  std::vector<SnapshotRecord> records;
  // Parameter copies parallel to `records` (empty if keep_snapshots is off).
  std::vector<AlignerParams> snapshots;
  // Record with the smallest direction-averaged mean NN distance; -1 if none.
  int best_snapshot = -1;
};

struct TrainedAligner {
  AlignerParams params;
  TrainHistory history;
};

// Randomly initialized networks for `dim`-dimensional embeddings.
AlignerParams InitAligner(int dim, const TrainConfig& cfg);

// Adversarial training with cycle consistency. Each epoch draws independent
// shuffles of both sets; when sizes differ the smaller set is resampled with
// replacement to pair with every row of the larger one. Critics take one
// ascent step every `eta` batches; generators take a descent step on every
// batch. A snapshot is recorded before the first epoch, every
// `snapshot_every` epochs and after the last one. Returns the final
// parameters. Throws std::invalid_argument on a dimension mismatch and
// NumericError if a loss becomes non-finite.
TrainedAligner Train(const EmbeddingMatrix& x1, const EmbeddingMatrix& x2,
                     const TrainConfig& cfg);

// Mean over rows of `mapped` of the Euclidean distance to the nearest row of
// `target`. Throws std::invalid_argument on empty input.
double MeanNNDistance(const RowMatrix& mapped, const RowMatrix& target);

SnapshotRecord MeasureSnapshot(const AlignerParams& params, const RowMatrix& x1,
                               const RowMatrix& x2, double lambda, int epoch);

// Parameters of the best snapshot, or the final parameters if none were kept.
AlignerParams BestParams(const TrainedAligner& aligner);

struct ModelSelection {
  TrainedAligner aligner;  // params restored from its best snapshot
  TrainConfig config;
  std::size_t config_index = 0;
  std::vector<double> scores;  // per grid entry, lower is better
};

// Trains every grid entry and keeps the one whose best snapshot has the
// smallest direction-averaged mean NN distance (first entry wins ties). Runs
// use independent streams, so `threads` does not change the result.
ModelSelection ModelSelect(const EmbeddingMatrix& x1, const EmbeddingMatrix& x2,
                           std::span<const TrainConfig> grid, int threads = 1);

// lambda in {1, 10, 100} x eta in {1, 5, 25} x {linear, nonlinear}.
std::vector<TrainConfig> DefaultGrid(const TrainConfig& base);

// Tab-separated `epoch adv12 adv21 cyc total nn12 nn21`, one line per record.
void WriteTrainLog(const TrainHistory& history, std::ostream& out);

}  // namespace netalign

#endif  // NETALIGN_TRAINER_H_
