#include "netalign/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "netalign/errors.h"
#include "netalign/kdtree.h"
#include "netalign/log.h"
#include "netalign/random.h"

namespace netalign {
namespace {

RowMatrix GatherRows(const RowMatrix& x, std::span<const int> rows) {
  RowMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

void Negate(CriticParams& g) {
  g.w1 = -g.w1;
  g.b1 = -g.b1;
  g.w2 = -g.w2;
  g.b2 = -g.b2;
}

// Row order for one epoch: a permutation of the larger set, and either a
// permutation or a with-replacement resample of the smaller one.
void EpochOrder(int n1, int n2, Rng& rng, std::vector<int>& order1,
                std::vector<int>& order2) {
  auto permutation = [&](int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  };
  auto resample = [&](int n, int count) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> p(count);
    for (int& v : p) v = pick(rng);
    return p;
  };
  if (n1 == n2) {
    order1 = permutation(n1);
    order2 = permutation(n2);
  } else if (n1 > n2) {
    order1 = permutation(n1);
    order2 = resample(n2, n1);
  } else {
    order1 = resample(n1, n2);
    order2 = permutation(n2);
  }
}

std::string Describe(const SnapshotRecord& r) {
  std::ostringstream os;
  os << "epoch " << r.epoch << ": adv12=" << r.adv12 << " adv21=" << r.adv21
     << " cyc=" << r.cycle << " nn12=" << r.nn12 << " nn21=" << r.nn21;
  return os.str();
}

double SelectionScore(const TrainedAligner& a, const RowMatrix& x1,
                      const RowMatrix& x2, double lambda) {
  if (a.history.best_snapshot >= 0)
    return a.history.records[a.history.best_snapshot].mean_nn();
  return MeasureSnapshot(a.params, x1, x2, lambda, 0).mean_nn();
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (eta < 1) throw std::invalid_argument("eta must be >= 1");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  if (hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
    throw std::invalid_argument("leaky_slope must lie in (0, 1)");
  for (const AdamConfig* a : {&generator_adam, &critic_adam}) {
    if (!(a->learning_rate > 0.0)) throw std::invalid_argument("adam learning rate must be > 0");
    if (!(a->beta1 >= 0.0 && a->beta1 < 1.0) || !(a->beta2 >= 0.0 && a->beta2 < 1.0))
      throw std::invalid_argument("adam betas must lie in [0, 1)");
  }
}

AlignerParams InitAligner(int dim, const TrainConfig& cfg) {
  Rng rng = MakeRng(cfg.seed, {0x696e6974ULL});
  AlignerParams p;
  p.g12 = InitMapper(dim, cfg.mapper_variant, rng, 0.01, cfg.leaky_slope);
  p.g21 = InitMapper(dim, cfg.mapper_variant, rng, 0.01, cfg.leaky_slope);
  p.d1 = InitCritic(dim, cfg.hidden_units, rng, 0.02, cfg.leaky_slope);
  p.d2 = InitCritic(dim, cfg.hidden_units, rng, 0.02, cfg.leaky_slope);
  return p;
}

double MeanNNDistance(const RowMatrix& mapped, const RowMatrix& target) {
  if (mapped.rows() == 0 || target.rows() == 0)
    throw std::invalid_argument("mean NN distance needs non-empty point sets");
  if (mapped.cols() != target.cols())
    throw std::invalid_argument("mean NN distance: dimension mismatch");
  KdTree tree(target);
  double sum = 0.0;
  for (const auto& nn : tree.NearestAll(mapped)) sum += nn.distance;
  return sum / static_cast<double>(mapped.rows());
}

SnapshotRecord MeasureSnapshot(const AlignerParams& params, const RowMatrix& x1,
                               const RowMatrix& x2, double lambda, int epoch) {
  SnapshotRecord r;
  r.epoch = epoch;
  LossTerms losses = EvaluateLosses(params, x1, x2, lambda);
  r.adv12 = losses.adv12;
  r.adv21 = losses.adv21;
  r.cycle = losses.cycle;
  r.total = losses.total;
  r.nn12 = MeanNNDistance(MapperForwardBatch(params.g12, x1), x2);
  r.nn21 = MeanNNDistance(MapperForwardBatch(params.g21, x2), x1);
  return r;
}

TrainedAligner Train(const EmbeddingMatrix& x1, const EmbeddingMatrix& x2,
                     const TrainConfig& cfg) {
  cfg.Validate();
  if (x1.dim() != x2.dim())
    throw std::invalid_argument("embeddings differ in dimension (" +
                                std::to_string(x1.dim()) + " vs " +
                                std::to_string(x2.dim()) + ")");
  if (x1.rows() == 0 || x2.rows() == 0)
    throw std::invalid_argument("embeddings must be non-empty");

  TrainedAligner out;
  out.params = InitAligner(x1.dim(), cfg);
  if (cfg.epochs == 0) return out;

  AlignerParams& p = out.params;
  TrainHistory& history = out.history;
  AdamState adam_g12 = MakeAdamState(p.g12, cfg.generator_adam);
  AdamState adam_g21 = MakeAdamState(p.g21, cfg.generator_adam);
  AdamState adam_d1 = MakeAdamState(p.d1, cfg.critic_adam);
  AdamState adam_d2 = MakeAdamState(p.d2, cfg.critic_adam);

  auto record = [&](int epoch) {
    SnapshotRecord r = MeasureSnapshot(p, x1.vectors, x2.vectors, cfg.lambda, epoch);
    if (!std::isfinite(r.total) || !std::isfinite(r.nn12) || !std::isfinite(r.nn21))
      throw NumericError("non-finite snapshot at " + Describe(r));
    history.records.push_back(r);
    if (cfg.keep_snapshots) history.snapshots.push_back(p);
    LogInfo(Describe(r));
  };

  record(0);
  Rng rng = MakeRng(cfg.seed, {0x7472616e5ULL});
  std::vector<int> order1, order2;
  std::int64_t step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochOrder(x1.rows(), x2.rows(), rng, order1, order2);
    const int total = static_cast<int>(order1.size());
    for (int start = 0; start < total; start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, total - start);
      RowMatrix batch1 = GatherRows(
          x1.vectors, std::span<const int>(order1).subspan(start, count));
      RowMatrix batch2 = GatherRows(
          x2.vectors, std::span<const int>(order2).subspan(start, count));

      if (step % cfg.eta == 0) {
        LossGradient critic = CriticObjectiveGradient(p, batch1, batch2);
        if (!std::isfinite(critic.value))
          throw NumericError("non-finite critic objective in epoch " +
                             std::to_string(epoch) + "; last " +
                             Describe(history.records.back()));
        Negate(critic.grad.d1);
        Negate(critic.grad.d2);
        AdamStep(adam_d1, p.d1, critic.grad.d1);
        AdamStep(adam_d2, p.d2, critic.grad.d2);
      }
      LossGradient gen = GeneratorObjectiveGradient(p, batch1, batch2, cfg.lambda,
                                                    cfg.generator_loss_mode);
      if (!std::isfinite(gen.value))
        throw NumericError("non-finite generator objective in epoch " +
                           std::to_string(epoch) + "; last " +
                           Describe(history.records.back()));
      AdamStep(adam_g12, p.g12, gen.grad.g12);
      AdamStep(adam_g21, p.g21, gen.grad.g21);
      ++step;
    }
    if (epoch % cfg.snapshot_every == 0 || epoch == cfg.epochs) record(epoch);
  }

  int best = 0;
  for (int i = 1; i < static_cast<int>(history.records.size()); ++i)
    if (history.records[i].mean_nn() < history.records[best].mean_nn()) best = i;
  history.best_snapshot = best;
  return out;
}

AlignerParams BestParams(const TrainedAligner& aligner) {
  const auto& h = aligner.history;
  if (h.best_snapshot >= 0 && h.best_snapshot < static_cast<int>(h.snapshots.size()))
    return h.snapshots[h.best_snapshot];
  return aligner.params;
}

ModelSelection ModelSelect(const EmbeddingMatrix& x1, const EmbeddingMatrix& x2,
                           std::span<const TrainConfig> grid, int threads) {
  if (grid.empty()) throw std::invalid_argument("model selection grid is empty");
  for (const auto& cfg : grid) cfg.Validate();

  std::vector<TrainedAligner> runs(grid.size());
  std::vector<double> scores(grid.size());
  auto run_one = [&](std::size_t i) {
    runs[i] = Train(x1, x2, grid[i]);
    scores[i] = SelectionScore(runs[i], x1.vectors, x2.vectors, grid[i].lambda);
  };
  threads = std::clamp(threads, 1, static_cast<int>(grid.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < grid.size(); i += threads) run_one(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (scores[i] < scores[best]) best = i;
  ModelSelection sel;
  sel.config = grid[best];
  sel.config_index = best;
  sel.scores = std::move(scores);
  sel.aligner = std::move(runs[best]);
  sel.aligner.params = BestParams(sel.aligner);
  return sel;
}

std::vector<TrainConfig> DefaultGrid(const TrainConfig& base) {
  std::vector<TrainConfig> grid;
  for (MapperVariant variant : {MapperVariant::kLinear, MapperVariant::kNonlinear})
    for (double lambda : {1.0, 10.0, 100.0})
      for (int eta : {1, 5, 25}) {
        TrainConfig cfg = base;
        cfg.lambda = lambda;
        cfg.eta = eta;
        cfg.mapper_variant = variant;
        grid.push_back(cfg);
      }
  return grid;
}

void WriteTrainLog(const TrainHistory& history, std::ostream& out) {
  for (const auto& r : history.records) {
    out << r.epoch << '\t' << FormatDouble(r.adv12) << '\t' << FormatDouble(r.adv21)
        << '\t' << FormatDouble(r.cycle) << '\t' << FormatDouble(r.total) << '\t'
        << FormatDouble(r.nn12) << '\t' << FormatDouble(r.nn21) << '\n';
  }
}

}  // namespace netalign
