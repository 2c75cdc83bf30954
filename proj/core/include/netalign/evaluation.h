#ifndef NETALIGN_EVALUATION_H_
#define NETALIGN_EVALUATION_H_

#include <iosfwd>
#include <vector>

#include "netalign/alignment.h"
#include "netalign/graph.h"
#include "netalign/trainer.h"

namespace netalign {

struct AccuracyBreakdown {
  std::size_t correct = 0;
  std::size_t evaluated = 0;     // truth pairs whose source is in the result
  std::size_t truth_pairs = 0;   // all truth pairs
  double accuracy() const {
    return evaluated == 0 ? 0.0 : static_cast<double>(correct) / evaluated;
  }
};

// Truth pairs are (label in N1, label in N2) and get flipped when the result
// runs 2to1. Only pairs whose source label appears among the result's sources
// count towards the denominator. Throws DataError if truth is empty or no
// truth pair can be evaluated.
AccuracyBreakdown ScoreAlignment(const AlignmentResult& result,
                                 const Correspondence& truth);
double Accuracy(const AlignmentResult& result, const Correspondence& truth);

struct HeuristicRow {
  int epoch = 0;
  double mean_nn_distance = 0.0;  // recorded heuristic, direction-averaged
  double accuracy = 0.0;          // of the bidirectional alignment at that snapshot
  Direction direction = Direction::k1to2;
};

// One row per stored snapshot. Throws std::invalid_argument when the history
// kept no snapshots.
std::vector<HeuristicRow> HeuristicReport(const TrainHistory& history,
                                          const Correspondence& truth,
                                          const EmbeddingMatrix& x1,
                                          const EmbeddingMatrix& x2,
                                          int threads = 1);

// Tab-separated `epoch mean_nn_distance accuracy direction` with a header.
void WriteHeuristicReport(const std::vector<HeuristicRow>& rows, std::ostream& out);

}  // namespace netalign

#endif  // NETALIGN_EVALUATION_H_
