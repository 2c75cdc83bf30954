#ifndef NETALIGN_WALK_EMBEDDING_H_
#define NETALIGN_WALK_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netalign/graph.h"
#include "netalign/types.h"

namespace netalign {

// Second-order (return / in-out biased) random walk parameters.
struct WalkConfig {
  int walks_per_node = 10;
  int walk_length = 80;
  double return_param_p = 1.0;
  double inout_param_q = 1.0;
  std::uint64_t seed = 1;

  void Validate() const;  // throws std::invalid_argument
};

// Skip-gram with negative sampling. The learning rate decays linearly towards
// 1e-4 of its start value over all epochs.
struct SkipGramConfig {
  int dim = 64;
  int window = 10;
  int negatives_per_positive = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;

  void Validate() const;  // throws std::invalid_argument
};

// n x d node vectors, row i belonging to labels[i].
struct EmbeddingMatrix {
  RowMatrix vectors;
  std::vector<std::string> labels;

  int rows() const { return static_cast<int>(vectors.rows()); }
  int dim() const { return static_cast<int>(vectors.cols()); }

  // Throws NumericError on a non-finite entry, DataError on a label/row
  // count mismatch.
  void Validate() const;

  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    return a.labels == b.labels && a.vectors.rows() == b.vectors.rows() &&
           a.vectors.cols() == b.vectors.cols() && a.vectors == b.vectors;
  }
};

// Transition probabilities from `cur` over its sorted neighbor list. With no
// previous node the distribution is uniform; otherwise the unnormalized
// weight is 1/p to return to `prev`, 1 for neighbors also adjacent to `prev`
// and 1/q for the rest. Throws std::invalid_argument if `cur` is isolated.
std::vector<double> StepDistribution(const Graph& g, std::optional<int> prev,
                                     int cur, double p, double q);

struct WalkCorpus {
  std::vector<std::vector<int>> walks;
  int skipped_isolated = 0;
};

// walks_per_node walks from every non-isolated node. Each (round, start node)
// walk draws from its own stream derived from the seed, so the output does not
// depend on evaluation order.
WalkCorpus GenerateWalks(const Graph& g, const WalkConfig& cfg);

struct SkipGramResult {
  EmbeddingMatrix embedding;  // labels left empty
  // Mean negative-sampling loss per (center, context) pair in each epoch.
  std::vector<double> epoch_loss;
};

// Throws std::invalid_argument on an empty corpus or an out-of-range entry.
SkipGramResult TrainSkipGram(std::span<const std::vector<int>> walks,
                             int vocab_size, const SkipGramConfig& cfg);

// Walks + skip-gram; isolated nodes get the zero vector (with a warning).
EmbeddingMatrix EmbedGraph(const Graph& g, const WalkConfig& wcfg,
                           const SkipGramConfig& scfg);

// Per-dimension zero mean / unit variance (constant columns are centered only).
EmbeddingMatrix StandardizeColumns(const EmbeddingMatrix& x);

// Text format: header "n d", then "label v1 ... vd" per row. Values are written
// in shortest round-trip form so a write/read cycle is exact.
EmbeddingMatrix ReadEmbedding(std::istream& in);
EmbeddingMatrix ReadEmbeddingFile(const std::string& path);
void WriteEmbedding(const EmbeddingMatrix& x, std::ostream& out);
void WriteEmbeddingFile(const EmbeddingMatrix& x, const std::string& path);

// Shortest decimal representation that parses back to exactly `value`.
std::string FormatDouble(double value);

}  // namespace netalign

#endif  // NETALIGN_WALK_EMBEDDING_H_
