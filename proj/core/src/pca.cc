#include "netalign/pca.h"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "netalign/log.h"

namespace netalign {
namespace {

constexpr int kMaxIterations = 100000;

// Dominant eigenpair of a symmetric PSD matrix; `basis` holds the components
// found so far and is projected out every step.
double PowerIterate(const Matrix& cov, const Matrix& basis, int found, Vector& v) {
  const int d = static_cast<int>(cov.rows());
  // deterministic start: the column of largest norm, nudged off any eigenvector
  Eigen::Index start = 0;
  cov.colwise().norm().maxCoeff(&start);
  v = cov.col(start);
  for (int i = 0; i < d; ++i) v(i) += 1e-3 * std::sqrt(static_cast<double>(i + 1));
  double lambda = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    for (int j = 0; j < found; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    v /= norm;
    Vector w = cov * v;
    for (int j = 0; j < found; ++j) w -= basis.col(j).dot(w) * basis.col(j);
    const double next = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    const double change = (w / wn - v).norm();
    v = w;
    if (it > 0 && std::abs(next - lambda) <= 1e-15 * std::abs(next) && change < 1e-10) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  for (int j = 0; j < found; ++j) v -= basis.col(j).dot(v) * basis.col(j);
  v.normalize();
  return v.dot(cov * v);
}

}  // namespace

PcaResult PcaProject(const RowMatrix& x, int k) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (n < 2) throw std::invalid_argument("PCA needs at least two rows");
  if (k < 1 || k > d) throw std::invalid_argument("PCA: k must lie in [1, d]");

  const Vector mean = x.colwise().mean().transpose();
  const RowMatrix centered = x.rowwise() - mean.transpose();
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  cov = 0.5 * (cov + cov.transpose());
  const double scale = std::max(cov.trace(), 1e-300);

  PcaResult out;
  out.components = Matrix::Zero(d, k);
  out.explained_variance = Vector::Zero(k);
  int found = 0;
  for (int c = 0; c < k; ++c) {
    Vector v;
    const double lambda = PowerIterate(cov, out.components, found, v);
    if (!(lambda > 1e-12 * scale) || !v.allFinite()) {
      LogWarning("PCA: data has rank " + std::to_string(found) + "; components " +
                 std::to_string(found + 1) + ".." + std::to_string(k) +
                 " set to zero");
      break;
    }
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    out.components.col(c) = v;
    out.explained_variance(c) = lambda;
    ++found;
  }
  out.coordinates = centered * out.components;
  return out;
}

void WritePcaCoordinates(const EmbeddingMatrix& x, const PcaResult& pca,
                         std::ostream& out) {
  out << "label";
  for (Eigen::Index c = 0; c < pca.coordinates.cols(); ++c) out << "\tpc" << (c + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < pca.coordinates.rows(); ++i) {
    out << (static_cast<std::size_t>(i) < x.labels.size() ? x.labels[i] : std::to_string(i));
    for (Eigen::Index c = 0; c < pca.coordinates.cols(); ++c)
      out << '\t' << FormatDouble(pca.coordinates(i, c));
    out << '\n';
  }
}

}  // namespace netalign
