#ifndef NETALIGN_TYPES_H_
#define NETALIGN_TYPES_H_

#include <Eigen/Core>

namespace netalign {

// Row-major so that a node's vector is contiguous.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace netalign

#endif  // NETALIGN_TYPES_H_
