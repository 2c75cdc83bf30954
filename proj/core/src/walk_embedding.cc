#include "netalign/walk_embedding.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netalign/errors.h"
#include "netalign/log.h"
#include "netalign/random.h"

namespace netalign {
namespace {

// Walker/Vose alias table: O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights) {
    const int n = static_cast<int>(weights.size());
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<int> small, large;
    for (int i = 0; i < n; ++i) {
      scaled[i] = weights[i] * n / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const int s = small.back();
      small.pop_back();
      const int l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (int i : large) prob_[i] = 1.0;
    for (int i : small) prob_[i] = 1.0;
  }

  int operator()(Rng& rng) const {
    std::uniform_int_distribution<int> column(0, static_cast<int>(prob_.size()) - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int i = column(rng);
    return coin(rng) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

int SampleIndex(std::span<const double> probs, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r = unit(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

void WalkConfig::Validate() const {
  if (walks_per_node < 1) throw std::invalid_argument("walks_per_node must be >= 1");
  if (walk_length < 2) throw std::invalid_argument("walk_length must be >= 2");
  if (!(return_param_p > 0.0) || !(inout_param_q > 0.0))
    throw std::invalid_argument("p and q must be strictly positive");
}

void SkipGramConfig::Validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (negatives_per_positive < 1)
    throw std::invalid_argument("negatives_per_positive must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be positive");
}

void EmbeddingMatrix::Validate() const {
  if (static_cast<std::size_t>(vectors.rows()) != labels.size())
    throw DataError("embedding has " + std::to_string(vectors.rows()) +
                    " rows but " + std::to_string(labels.size()) + " labels");
  if (!vectors.allFinite()) throw NumericError("embedding has non-finite entries");
}

std::vector<double> StepDistribution(const Graph& g, std::optional<int> prev,
                                     int cur, double p, double q) {
  auto nbrs = g.neighbors(cur);
  if (nbrs.empty())
    throw std::invalid_argument("node " + g.label(cur) + " has no neighbors");
  std::vector<double> probs(nbrs.size());
  if (!prev) {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(nbrs.size()));
    return probs;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const int x = nbrs[i];
    double w;
    if (x == *prev) {
      w = 1.0 / p;
    } else if (g.HasEdge(x, *prev)) {
      w = 1.0;
    } else {
      w = 1.0 / q;
    }
    probs[i] = w;
    total += w;
  }
  for (double& v : probs) v /= total;
  return probs;
}

WalkCorpus GenerateWalks(const Graph& g, const WalkConfig& cfg) {
  cfg.Validate();
  WalkCorpus corpus;
  const int n = g.num_nodes();
  std::vector<int> starts;
  starts.reserve(n);
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) > 0) {
      starts.push_back(v);
    } else {
      ++corpus.skipped_isolated;
    }
  }
  const bool unbiased = cfg.return_param_p == 1.0 && cfg.inout_param_q == 1.0;
  corpus.walks.reserve(starts.size() * static_cast<std::size_t>(cfg.walks_per_node));
  for (int round = 0; round < cfg.walks_per_node; ++round) {
    std::vector<int> order = starts;
    Rng order_rng = MakeRng(cfg.seed, {0x77616c6bULL, static_cast<std::uint64_t>(round)});
    std::shuffle(order.begin(), order.end(), order_rng);
    for (int start : order) {
      Rng rng = MakeRng(cfg.seed, {static_cast<std::uint64_t>(round),
                                   static_cast<std::uint64_t>(start)});
      std::vector<int> walk;
      walk.reserve(cfg.walk_length);
      walk.push_back(start);
      std::optional<int> prev;
      while (static_cast<int>(walk.size()) < cfg.walk_length) {
        const int cur = walk.back();
        auto nbrs = g.neighbors(cur);
        if (nbrs.empty()) break;
        int next;
        if (unbiased || !prev) {
          std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
          next = nbrs[pick(rng)];
        } else {
          auto probs = StepDistribution(g, prev, cur, cfg.return_param_p,
                                        cfg.inout_param_q);
          next = nbrs[SampleIndex(probs, rng)];
        }
        prev = cur;
        walk.push_back(next);
      }
      corpus.walks.push_back(std::move(walk));
    }
  }
  return corpus;
}

SkipGramResult TrainSkipGram(std::span<const std::vector<int>> walks,
                             int vocab_size, const SkipGramConfig& cfg) {
  cfg.Validate();
  if (walks.empty()) throw std::invalid_argument("walk corpus is empty");
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be >= 1");

  std::vector<double> counts(vocab_size, 0.0);
  std::size_t tokens = 0;
  for (const auto& walk : walks) {
    for (int v : walk) {
      if (v < 0 || v >= vocab_size)
        throw std::invalid_argument("walk entry outside vocabulary");
      counts[v] += 1.0;
    }
    tokens += walk.size();
  }
  if (tokens == 0) throw std::invalid_argument("walk corpus has no tokens");
  for (double& c : counts) c = std::pow(c, 0.75);
  const AliasTable noise(counts);

  const int d = cfg.dim;
  Rng rng = MakeRng(cfg.seed, {0x73676e73ULL});
  RowMatrix input(vocab_size, d);
  RowMatrix context = RowMatrix::Zero(vocab_size, d);
  {
    std::uniform_real_distribution<double> init(-0.5 / d, 0.5 / d);
    for (Eigen::Index i = 0; i < input.size(); ++i) input.data()[i] = init(rng);
  }

  const double total_steps = static_cast<double>(tokens) * cfg.epochs;
  const double min_lr = cfg.learning_rate * 1e-4;
  double processed = 0.0;
  Vector grad_center(d);
  SkipGramResult result;
  result.epoch_loss.reserve(cfg.epochs);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t pairs = 0;
    for (const auto& walk : walks) {
      const int len = static_cast<int>(walk.size());
      for (int pos = 0; pos < len; ++pos) {
        const double lr = std::max(
            min_lr, cfg.learning_rate * (1.0 - processed / total_steps));
        processed += 1.0;
        const int center = walk[pos];
        const int lo = std::max(0, pos - cfg.window);
        const int hi = std::min(len - 1, pos + cfg.window);
        for (int c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const int target = walk[c];
          double* u = input.row(center).data();
          double* gc = grad_center.data();
          std::fill(gc, gc + d, 0.0);
          double pair_loss = 0.0;
          for (int k = 0; k <= cfg.negatives_per_positive; ++k) {
            int out;
            double label;
            if (k == 0) {
              out = target;
              label = 1.0;
            } else {
              out = noise(rng);
              if (out == target) continue;
              label = 0.0;
            }
            double* v = context.row(out).data();
            double score = 0.0;
            for (int j = 0; j < d; ++j) score += u[j] * v[j];
            // one exp for both the loss and the sigmoid
            const double e = std::exp(-std::abs(score));
            const double sig = score >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
            const double signed_score = label > 0 ? score : -score;
            pair_loss += std::log1p(e) + (signed_score < 0 ? -signed_score : 0.0);
            const double g = lr * (label - sig);
            for (int j = 0; j < d; ++j) {
              gc[j] += g * v[j];
              v[j] += g * u[j];
            }
          }
          for (int j = 0; j < d; ++j) u[j] += gc[j];
          loss_sum += pair_loss;
          ++pairs;
        }
      }
    }
    result.epoch_loss.push_back(pairs > 0 ? loss_sum / static_cast<double>(pairs)
                                          : 0.0);
  }
  result.embedding.vectors = std::move(input);
  if (!result.embedding.vectors.allFinite())
    throw NumericError("skip-gram training diverged (non-finite vectors)");
  return result;
}

EmbeddingMatrix EmbedGraph(const Graph& g, const WalkConfig& wcfg,
                           const SkipGramConfig& scfg) {
  WalkCorpus corpus = GenerateWalks(g, wcfg);
  if (corpus.skipped_isolated > 0) {
    LogWarning(std::to_string(corpus.skipped_isolated) +
               " isolated node(s) receive the zero embedding");
  }
  EmbeddingMatrix x;
  x.labels = g.labels();
  if (corpus.walks.empty()) {
    x.vectors = RowMatrix::Zero(g.num_nodes(), scfg.dim);
    return x;
  }
  x.vectors = TrainSkipGram(corpus.walks, g.num_nodes(), scfg).embedding.vectors;
  for (int v = 0; v < g.num_nodes(); ++v)
    if (g.degree(v) == 0) x.vectors.row(v).setZero();
  return x;
}

EmbeddingMatrix StandardizeColumns(const EmbeddingMatrix& x) {
  EmbeddingMatrix out = x;
  const auto n = static_cast<double>(x.vectors.rows());
  if (n == 0) return out;
  for (Eigen::Index j = 0; j < x.vectors.cols(); ++j) {
    auto col = out.vectors.col(j);
    const double mean = col.sum() / n;
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (sd > 0) col /= sd;
  }
  return out;
}

}  // namespace netalign
