#ifndef NETALIGN_ALIGNMENT_H_
#define NETALIGN_ALIGNMENT_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netalign/losses.h"
#include "netalign/neural.h"
#include "netalign/walk_embedding.h"

namespace netalign {

enum class Direction { k1to2, k2to1 };

std::string_view DirectionName(Direction d);  // "1to2" / "2to1"
Direction ParseDirection(std::string_view name);

// One pair per source node: (label in the chosen source graph, label of its
// nearest mapped neighbor in the other graph). Targets may repeat.
struct AlignmentResult {
  std::vector<std::pair<std::string, std::string>> pairs;
  Direction direction = Direction::k1to2;
  double mean_nn_distance = 0.0;
  std::vector<double> per_pair_distance;
  std::vector<int> target_index;  // row of the matched target
};

// Maps every source row through `mapper` and pairs it with its exact nearest
// target row (k-d tree, lowest index on ties). Throws std::invalid_argument on
// empty inputs or mismatched dimensions.
AlignmentResult AlignDirection(const MapperParams& mapper,
                               const EmbeddingMatrix& source,
                               const EmbeddingMatrix& target,
                               Direction direction = Direction::k1to2,
                               int threads = 1);

struct BidirectionalAlignment {
  AlignmentResult forward;   // G12(X1) against X2
  AlignmentResult backward;  // G21(X2) against X1
  Direction chosen = Direction::k1to2;

  const AlignmentResult& result() const {
    return chosen == Direction::k1to2 ? forward : backward;
  }
};

// Both directions; the one with strictly lower mean NN distance is chosen,
// an exact tie goes to 1->2.
BidirectionalAlignment AlignBothDirections(const AlignerParams& params,
                                           const EmbeddingMatrix& x1,
                                           const EmbeddingMatrix& x2,
                                           int threads = 1);
AlignmentResult AlignBidirectional(const AlignerParams& params,
                                   const EmbeddingMatrix& x1,
                                   const EmbeddingMatrix& x2, int threads = 1);

// Header comment `# direction=<1to2|2to1> mean_nn_distance=<float>` followed
// by `source<TAB>target<TAB>distance` per source node.
void WriteAlignment(const AlignmentResult& result, std::ostream& out);
void WriteAlignmentFile(const AlignmentResult& result, const std::string& path);
AlignmentResult ReadAlignment(std::istream& in);
AlignmentResult ReadAlignmentFile(const std::string& path);

}  // namespace netalign

#endif  // NETALIGN_ALIGNMENT_H_
