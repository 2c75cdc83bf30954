#include "netalign/alignment.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "netalign/errors.h"
#include "netalign/kdtree.h"

namespace netalign {

std::string_view DirectionName(Direction d) {
  return d == Direction::k1to2 ? "1to2" : "2to1";
}

Direction ParseDirection(std::string_view name) {
  if (name == "1to2") return Direction::k1to2;
  if (name == "2to1") return Direction::k2to1;
  throw DataError("unknown direction '" + std::string(name) + "'");
}

AlignmentResult AlignDirection(const MapperParams& mapper,
                               const EmbeddingMatrix& source,
                               const EmbeddingMatrix& target,
                               Direction direction, int threads) {
  if (source.rows() == 0 || target.rows() == 0)
    throw std::invalid_argument("cannot align empty embeddings");
  if (source.dim() != target.dim() || mapper.dim() != source.dim())
    throw std::invalid_argument("alignment dimension mismatch");

  const RowMatrix mapped = MapperForwardBatch(mapper, source.vectors);
  const KdTree tree(target.vectors);
  const auto hits = tree.NearestAll(mapped, threads);

  AlignmentResult result;
  result.direction = direction;
  result.pairs.reserve(hits.size());
  result.per_pair_distance.reserve(hits.size());
  result.target_index.reserve(hits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    result.pairs.emplace_back(source.labels[i], target.labels[hits[i].index]);
    result.per_pair_distance.push_back(hits[i].distance);
    result.target_index.push_back(hits[i].index);
    sum += hits[i].distance;
  }
  result.mean_nn_distance = sum / static_cast<double>(hits.size());
  return result;
}

BidirectionalAlignment AlignBothDirections(const AlignerParams& params,
                                           const EmbeddingMatrix& x1,
                                           const EmbeddingMatrix& x2,
                                           int threads) {
  BidirectionalAlignment both;
  both.forward = AlignDirection(params.g12, x1, x2, Direction::k1to2, threads);
  both.backward = AlignDirection(params.g21, x2, x1, Direction::k2to1, threads);
  both.chosen = both.backward.mean_nn_distance < both.forward.mean_nn_distance
                    ? Direction::k2to1
                    : Direction::k1to2;
  return both;
}

AlignmentResult AlignBidirectional(const AlignerParams& params,
                                   const EmbeddingMatrix& x1,
                                   const EmbeddingMatrix& x2, int threads) {
  BidirectionalAlignment both = AlignBothDirections(params, x1, x2, threads);
  return both.chosen == Direction::k1to2 ? std::move(both.forward)
                                         : std::move(both.backward);
}

void WriteAlignment(const AlignmentResult& result, std::ostream& out) {
  out << "# direction=" << DirectionName(result.direction)
      << " mean_nn_distance=" << FormatDouble(result.mean_nn_distance) << '\n';
  for (std::size_t i = 0; i < result.pairs.size(); ++i) {
    out << result.pairs[i].first << '\t' << result.pairs[i].second << '\t'
        << FormatDouble(result.per_pair_distance[i]) << '\n';
  }
}

void WriteAlignmentFile(const AlignmentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  WriteAlignment(result, out);
  if (!out) throw DataError("write error on '" + path + "'");
}

AlignmentResult ReadAlignment(std::istream& in) {
  AlignmentResult result;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string field;
      while (header >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "direction") {
          result.direction = ParseDirection(value);
          have_header = true;
        } else if (key == "mean_nn_distance") {
          std::from_chars(value.data(), value.data() + value.size(),
                          result.mean_nn_distance);
        }
      }
      continue;
    }
    std::istringstream row(line);
    std::string src, dst, dist;
    if (!std::getline(row, src, '\t') || !std::getline(row, dst, '\t'))
      throw ParseError(line_no, "expected 'source<TAB>target<TAB>distance'");
    double d = 0.0;
    if (std::getline(row, dist, '\t')) {
      auto [ptr, ec] = std::from_chars(dist.data(), dist.data() + dist.size(), d);
      if (ec != std::errc() || ptr != dist.data() + dist.size())
        throw ParseError(line_no, "distance '" + dist + "' is not a number");
    }
    result.pairs.emplace_back(std::move(src), std::move(dst));
    result.per_pair_distance.push_back(d);
  }
  if (!have_header) throw DataError("alignment file lacks a '# direction=' header");
  if (result.pairs.empty()) throw DataError("alignment file has no pairs");
  return result;
}

AlignmentResult ReadAlignmentFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return ReadAlignment(in);
}

}  // namespace netalign
