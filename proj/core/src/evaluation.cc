#include "netalign/evaluation.h"

#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "netalign/errors.h"

namespace netalign {

AccuracyBreakdown ScoreAlignment(const AlignmentResult& result,
                                 const Correspondence& truth) {
  if (truth.empty()) throw DataError("ground truth is empty");
  std::unordered_map<std::string, const std::string*> predicted;
  predicted.reserve(result.pairs.size());
  for (const auto& [src, dst] : result.pairs) predicted.emplace(src, &dst);

  const bool flip = result.direction == Direction::k2to1;
  AccuracyBreakdown out;
  out.truth_pairs = truth.size();
  for (const auto& [u, v] : truth.pairs) {
    const std::string& src = flip ? v : u;
    const std::string& dst = flip ? u : v;
    auto it = predicted.find(src);
    if (it == predicted.end()) continue;
    ++out.evaluated;
    if (*it->second == dst) ++out.correct;
  }
  if (out.evaluated == 0)
    throw DataError("no ground-truth pair has its source node in the alignment");
  return out;
}

double Accuracy(const AlignmentResult& result, const Correspondence& truth) {
  return ScoreAlignment(result, truth).accuracy();
}

std::vector<HeuristicRow> HeuristicReport(const TrainHistory& history,
                                          const Correspondence& truth,
                                          const EmbeddingMatrix& x1,
                                          const EmbeddingMatrix& x2,
                                          int threads) {
  if (history.snapshots.empty())
    throw std::invalid_argument("heuristic report needs stored snapshots");
  if (history.snapshots.size() != history.records.size())
    throw std::invalid_argument("snapshot and record counts differ");
  std::vector<HeuristicRow> rows;
  rows.reserve(history.snapshots.size());
  for (std::size_t i = 0; i < history.snapshots.size(); ++i) {
    const BidirectionalAlignment both =
        AlignBothDirections(history.snapshots[i], x1, x2, threads);
    HeuristicRow row;
    row.epoch = history.records[i].epoch;
    row.mean_nn_distance = history.records[i].mean_nn();
    row.accuracy = Accuracy(both.result(), truth);
    row.direction = both.chosen;
    rows.push_back(row);
  }
  return rows;
}

void WriteHeuristicReport(const std::vector<HeuristicRow>& rows, std::ostream& out) {
  out << "epoch\tmean_nn_distance\taccuracy\tdirection\n";
  for (const auto& r : rows)
    out << r.epoch << '\t' << FormatDouble(r.mean_nn_distance) << '\t'
        << FormatDouble(r.accuracy) << '\t' << DirectionName(r.direction) << '\n';
}

}  // namespace netalign
