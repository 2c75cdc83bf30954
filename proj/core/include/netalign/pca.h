#ifndef NETALIGN_PCA_H_
#define NETALIGN_PCA_H_

#include <iosfwd>

#include "netalign/types.h"
#include "netalign/walk_embedding.h"

namespace netalign {

struct PcaResult {
  RowMatrix coordinates;       // n x k
  Matrix components;           // d x k, unit columns (zero when rank-deficient)
  Vector explained_variance;   // k, non-increasing
};

// Projects centered rows onto the top-k covariance eigenvectors, found by
// power iteration with deflation. Each component is flipped so its
// largest-magnitude loading is positive. Components beyond the data's rank
// come back as zeros, with a warning. Throws std::invalid_argument unless
// 1 <= k <= d and n >= 2.
PcaResult PcaProject(const RowMatrix& x, int k);

// `label c1 ... ck` tab-separated with a header line.
void WritePcaCoordinates(const EmbeddingMatrix& x, const PcaResult& pca,
                         std::ostream& out);

}  // namespace netalign

#endif  // NETALIGN_PCA_H_
