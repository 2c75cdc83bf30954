#ifndef NETALIGN_NEURAL_H_
#define NETALIGN_NEURAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "netalign/random.h"
#include "netalign/types.h"

namespace netalign {

enum class MapperVariant { kLinear, kNonlinear };

// Single-layer generator: y = W x + b, optionally followed by leaky ReLU.
struct MapperParams {
  MapperVariant variant = MapperVariant::kLinear;
  Matrix weight;  // d x d
  Vector bias;    // d
  double slope = 0.2;

  int dim() const { return static_cast<int>(weight.cols()); }
  void Validate() const;

  static MapperParams Identity(int dim,
                               MapperVariant variant = MapperVariant::kLinear);
};

// Two-layer critic: sigmoid(w2 . leaky_relu(W1 x + b1) + b2).
struct CriticParams {
  Matrix w1;  // h x d
  Vector b1;  // h
  Vector w2;  // h
  double b2 = 0.0;
  double slope = 0.2;

  int dim() const { return static_cast<int>(w1.cols()); }
  int hidden_units() const { return static_cast<int>(w1.rows()); }
  void Validate() const;

  static CriticParams Zero(int dim, int hidden_units);
};

// Identity plus N(0, noise^2) weights, zero bias.
MapperParams InitMapper(int dim, MapperVariant variant, Rng& rng,
                        double noise = 0.01, double slope = 0.2);
// N(0, sigma^2) weights, zero biases.
CriticParams InitCritic(int dim, int hidden_units, Rng& rng,
                        double sigma = 0.02, double slope = 0.2);

// Same-shaped containers filled with zeros, used to accumulate gradients.
MapperParams ZerosLike(const MapperParams& p);
CriticParams ZerosLike(const CriticParams& p);

// Flat views of every parameter tensor, in a fixed order.
std::vector<std::span<double>> ParameterViews(MapperParams& p);
std::vector<std::span<double>> ParameterViews(CriticParams& p);
std::vector<std::span<const double>> ParameterViews(const MapperParams& p);
std::vector<std::span<const double>> ParameterViews(const CriticParams& p);

Vector LeakyRelu(const Vector& x, double slope);
double Sigmoid(double z);

// Single-sample forward passes. Throw std::invalid_argument on a dimension
// mismatch.
Vector MapperForward(const MapperParams& p, const Vector& x);
double CriticForward(const CriticParams& p, const Vector& x);

// Activations kept from a batched forward pass for the backward pass.
struct MapperTape {
  RowMatrix input;
  RowMatrix pre;  // W x + b, before the activation
};

struct CriticTape {
  RowMatrix input;
  RowMatrix pre;     // W1 x + b1
  RowMatrix hidden;  // leaky_relu(pre)
};

// Batched forward passes over the rows of `x`. When `tape` is non-null it
// receives what the matching backward call needs.
RowMatrix MapperForwardBatch(const MapperParams& p, const RowMatrix& x,
                             MapperTape* tape = nullptr);
Vector CriticLogitsBatch(const CriticParams& p, const RowMatrix& x,
                         CriticTape* tape = nullptr);

// Reverse-mode passes. Parameter gradients are accumulated into `grad`
// (which must be shaped like `p`); the input gradient is written to
// `input_grad` when it is non-null. The leaky ReLU derivative at 0 is 1.
void MapperBackward(const MapperParams& p, const MapperTape& tape,
                    const RowMatrix& output_grad, MapperParams* grad,
                    RowMatrix* input_grad);
void CriticBackward(const CriticParams& p, const CriticTape& tape,
                    const Vector& logit_grad, CriticParams* grad,
                    RowMatrix* input_grad);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment buffers for one parameter set; shapes are fixed at construction.
struct AdamState {
  AdamConfig config;
  std::vector<Vector> first_moment;
  std::vector<Vector> second_moment;
  std::int64_t step_count = 0;
};

AdamState MakeAdamState(const MapperParams& p, const AdamConfig& config);
AdamState MakeAdamState(const CriticParams& p, const AdamConfig& config);

// Bias-corrected descent step params -= lr * m_hat / (sqrt(v_hat) + eps).
// Throws std::invalid_argument when shapes disagree.
void AdamStep(AdamState& state, MapperParams& params, const MapperParams& grads);
void AdamStep(AdamState& state, CriticParams& params, const CriticParams& grads);
void AdamStep(AdamState& state, std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads);

}  // namespace netalign

#endif  // NETALIGN_NEURAL_H_
