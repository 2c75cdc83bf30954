#include "netalign/neural.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace netalign {
namespace {

template <typename Derived>
void ApplyLeakyRelu(Eigen::DenseBase<Derived>& m, double slope) {
  m = m.unaryExpr([slope](double v) { return v >= 0.0 ? v : slope * v; });
}

// Multiplies `grad` in place by the leaky ReLU derivative evaluated at `pre`.
void LeakyReluBackward(const RowMatrix& pre, double slope, RowMatrix& grad) {
  grad = grad.cwiseProduct(
      pre.unaryExpr([slope](double v) { return v >= 0.0 ? 1.0 : slope; }));
}

void CheckDim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": dimension " +
                                std::to_string(got) + " != " +
                                std::to_string(want));
}

std::span<double> View(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> View(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> View(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<const double> View(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

template <typename Params>
AdamState MakeState(const Params& p, const AdamConfig& config) {
  AdamState state;
  state.config = config;
  for (auto view : ParameterViews(p)) {
    state.first_moment.push_back(Vector::Zero(static_cast<Eigen::Index>(view.size())));
    state.second_moment.push_back(Vector::Zero(static_cast<Eigen::Index>(view.size())));
  }
  return state;
}

template <typename Params>
void TypedAdamStep(AdamState& state, Params& params, const Params& grads) {
  auto p = ParameterViews(params);
  auto g = ParameterViews(grads);
  AdamStep(state, p, g);
}

}  // namespace

void MapperParams::Validate() const {
  if (weight.rows() != weight.cols())
    throw std::invalid_argument("mapper weight must be square");
  CheckDim(bias.size(), weight.rows(), "mapper bias");
  if (!weight.allFinite() || !bias.allFinite())
    throw std::invalid_argument("mapper parameters must be finite");
}

MapperParams MapperParams::Identity(int dim, MapperVariant variant) {
  MapperParams p;
  p.variant = variant;
  p.weight = Matrix::Identity(dim, dim);
  p.bias = Vector::Zero(dim);
  return p;
}

void CriticParams::Validate() const {
  if (w1.rows() < 1) throw std::invalid_argument("critic needs >= 1 hidden unit");
  CheckDim(b1.size(), w1.rows(), "critic b1");
  CheckDim(w2.size(), w1.rows(), "critic w2");
  if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() || !std::isfinite(b2))
    throw std::invalid_argument("critic parameters must be finite");
}

CriticParams CriticParams::Zero(int dim, int hidden_units) {
  CriticParams p;
  p.w1 = Matrix::Zero(hidden_units, dim);
  p.b1 = Vector::Zero(hidden_units);
  p.w2 = Vector::Zero(hidden_units);
  p.b2 = 0.0;
  return p;
}

MapperParams InitMapper(int dim, MapperVariant variant, Rng& rng, double noise,
                        double slope) {
  std::normal_distribution<double> gauss(0.0, noise);
  MapperParams p = MapperParams::Identity(dim, variant);
  p.slope = slope;
  for (Eigen::Index i = 0; i < p.weight.size(); ++i) p.weight.data()[i] += gauss(rng);
  return p;
}

CriticParams InitCritic(int dim, int hidden_units, Rng& rng, double sigma,
                        double slope) {
  std::normal_distribution<double> gauss(0.0, sigma);
  CriticParams p = CriticParams::Zero(dim, hidden_units);
  p.slope = slope;
  for (Eigen::Index i = 0; i < p.w1.size(); ++i) p.w1.data()[i] = gauss(rng);
  for (Eigen::Index i = 0; i < p.w2.size(); ++i) p.w2[i] = gauss(rng);
  return p;
}

MapperParams ZerosLike(const MapperParams& p) {
  MapperParams z = p;
  z.weight.setZero();
  z.bias.setZero();
  return z;
}

CriticParams ZerosLike(const CriticParams& p) {
  CriticParams z = p;
  z.w1.setZero();
  z.b1.setZero();
  z.w2.setZero();
  z.b2 = 0.0;
  return z;
}

std::vector<std::span<double>> ParameterViews(MapperParams& p) {
  return {View(p.weight), View(p.bias)};
}
std::vector<std::span<double>> ParameterViews(CriticParams& p) {
  return {View(p.w1), View(p.b1), View(p.w2), std::span<double>(&p.b2, 1)};
}
std::vector<std::span<const double>> ParameterViews(const MapperParams& p) {
  return {View(p.weight), View(p.bias)};
}
std::vector<std::span<const double>> ParameterViews(const CriticParams& p) {
  return {View(p.w1), View(p.b1), View(p.w2), std::span<const double>(&p.b2, 1)};
}

Vector LeakyRelu(const Vector& x, double slope) {
  Vector y = x;
  ApplyLeakyRelu(y, slope);
  return y;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Vector MapperForward(const MapperParams& p, const Vector& x) {
  CheckDim(x.size(), p.dim(), "mapper input");
  Vector y = p.weight * x + p.bias;
  if (p.variant == MapperVariant::kNonlinear) ApplyLeakyRelu(y, p.slope);
  return y;
}

double CriticForward(const CriticParams& p, const Vector& x) {
  CheckDim(x.size(), p.dim(), "critic input");
  Vector h = p.w1 * x + p.b1;
  ApplyLeakyRelu(h, p.slope);
  return Sigmoid(p.w2.dot(h) + p.b2);
}

RowMatrix MapperForwardBatch(const MapperParams& p, const RowMatrix& x,
                             MapperTape* tape) {
  CheckDim(x.cols(), p.dim(), "mapper input");
  RowMatrix pre = x * p.weight.transpose();
  pre.rowwise() += p.bias.transpose();
  RowMatrix out = pre;
  if (p.variant == MapperVariant::kNonlinear) ApplyLeakyRelu(out, p.slope);
  if (tape != nullptr) {
    tape->input = x;
    tape->pre = std::move(pre);
  }
  return out;
}

Vector CriticLogitsBatch(const CriticParams& p, const RowMatrix& x,
                         CriticTape* tape) {
  CheckDim(x.cols(), p.dim(), "critic input");
  RowMatrix pre = x * p.w1.transpose();
  pre.rowwise() += p.b1.transpose();
  RowMatrix hidden = pre;
  ApplyLeakyRelu(hidden, p.slope);
  Vector logits = hidden * p.w2;
  logits.array() += p.b2;
  if (tape != nullptr) {
    tape->input = x;
    tape->pre = std::move(pre);
    tape->hidden = std::move(hidden);
  }
  return logits;
}

void MapperBackward(const MapperParams& p, const MapperTape& tape,
                    const RowMatrix& output_grad, MapperParams* grad,
                    RowMatrix* input_grad) {
  RowMatrix dpre = output_grad;
  if (p.variant == MapperVariant::kNonlinear) LeakyReluBackward(tape.pre, p.slope, dpre);
  if (grad != nullptr) {
    grad->weight.noalias() += dpre.transpose() * tape.input;
    grad->bias.noalias() += dpre.colwise().sum().transpose();
  }
  if (input_grad != nullptr) *input_grad = dpre * p.weight;
}

void CriticBackward(const CriticParams& p, const CriticTape& tape,
                    const Vector& logit_grad, CriticParams* grad,
                    RowMatrix* input_grad) {
  RowMatrix dhidden = logit_grad * p.w2.transpose();
  LeakyReluBackward(tape.pre, p.slope, dhidden);
  if (grad != nullptr) {
    grad->w2.noalias() += tape.hidden.transpose() * logit_grad;
    grad->b2 += logit_grad.sum();
    grad->w1.noalias() += dhidden.transpose() * tape.input;
    grad->b1.noalias() += dhidden.colwise().sum().transpose();
  }
  if (input_grad != nullptr) *input_grad = dhidden * p.w1;
}

AdamState MakeAdamState(const MapperParams& p, const AdamConfig& config) {
  return MakeState(p, config);
}
AdamState MakeAdamState(const CriticParams& p, const AdamConfig& config) {
  return MakeState(p, config);
}

void AdamStep(AdamState& state, MapperParams& params, const MapperParams& grads) {
  TypedAdamStep(state, params, grads);
}
void AdamStep(AdamState& state, CriticParams& params, const CriticParams& grads) {
  TypedAdamStep(state, params, grads);
}

void AdamStep(AdamState& state, std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size())
    throw std::invalid_argument("adam: tensor count mismatch");
  for (std::size_t t = 0; t < params.size(); ++t) {
    const auto n = static_cast<Eigen::Index>(params[t].size());
    if (static_cast<Eigen::Index>(grads[t].size()) != n ||
        state.first_moment[t].size() != n)
      throw std::invalid_argument("adam: tensor " + std::to_string(t) +
                                  " shape mismatch");
  }
  const AdamConfig& c = state.config;
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Vector& m = state.first_moment[k];
    Vector& v = state.second_moment[k];
    double* theta = params[k].data();
    const double* g = grads[k].data();
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      theta[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

}  // namespace netalign
