#include "netalign/losses.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netalign {
namespace {

struct ClampedLog {
  double value;  // log of the clamped probability
  double slope;  // derivative of `value` with respect to the logit
};

// log(clamp(sigmoid(z))) and its derivative; zero slope inside the clamp.
ClampedLog LogProb(double z) {
  const double p = Sigmoid(z);
  if (p <= kProbabilityClamp) return {std::log(kProbabilityClamp), 0.0};
  if (p >= 1.0 - kProbabilityClamp) return {std::log1p(-kProbabilityClamp), 0.0};
  return {std::log(p), Sigmoid(-z)};
}

// log(clamp(1 - sigmoid(z))) and its derivative.
ClampedLog LogOneMinusProb(double z) {
  ClampedLog r = LogProb(-z);
  r.slope = -r.slope;
  return r;
}

void CheckBatches(const RowMatrix& a, const RowMatrix& b) {
  if (a.rows() == 0 || b.rows() == 0)
    throw std::invalid_argument("loss batches must be non-empty");
  if (a.cols() != b.cols())
    throw std::invalid_argument("loss batches differ in dimension");
}

struct AdversarialWants {
  MapperParams* generator_grad = nullptr;
  CriticParams* critic_grad = nullptr;
  GeneratorLossMode generator_mode = GeneratorLossMode::kSaturating;
};

// mean_{real} log D(real) + mean_{source} log(1 - D(G(source))). Returns the
// minimax value; gradients are accumulated as requested. The generator
// gradient follows `generator_mode`.
double AdversarialTerm(const MapperParams& gen, const CriticParams& critic,
                       const RowMatrix& source, const RowMatrix& real,
                       const AdversarialWants& wants) {
  CheckBatches(source, real);
  const double n_real = static_cast<double>(real.rows());
  const double n_fake = static_cast<double>(source.rows());

  CriticTape real_tape;
  Vector real_logits = CriticLogitsBatch(critic, real, &real_tape);
  Vector real_dlogit(real.rows());
  double value = 0.0;
  for (Eigen::Index i = 0; i < real.rows(); ++i) {
    auto t = LogProb(real_logits[i]);
    value += t.value / n_real;
    real_dlogit[i] = t.slope / n_real;
  }

  MapperTape gen_tape;
  RowMatrix fake = MapperForwardBatch(gen, source, &gen_tape);
  CriticTape fake_tape;
  Vector fake_logits = CriticLogitsBatch(critic, fake, &fake_tape);
  Vector fake_dlogit(fake.rows());
  Vector gen_dlogit(fake.rows());
  for (Eigen::Index i = 0; i < fake.rows(); ++i) {
    auto t = LogOneMinusProb(fake_logits[i]);
    value += t.value / n_fake;
    fake_dlogit[i] = t.slope / n_fake;
    if (wants.generator_mode == GeneratorLossMode::kNonsaturating) {
      // d/dz of -log D(G(x)).
      gen_dlogit[i] = -LogProb(fake_logits[i]).slope / n_fake;
    } else {
      gen_dlogit[i] = fake_dlogit[i];
    }
  }

  if (wants.critic_grad != nullptr) {
    CriticBackward(critic, real_tape, real_dlogit, wants.critic_grad, nullptr);
    CriticBackward(critic, fake_tape, fake_dlogit, wants.critic_grad, nullptr);
  }
  if (wants.generator_grad != nullptr) {
    RowMatrix dfake;
    CriticBackward(critic, fake_tape, gen_dlogit, nullptr, &dfake);
    MapperBackward(gen, gen_tape, dfake, wants.generator_grad, nullptr);
  }
  return value;
}

// mean_x |second(first(x)) - x|_1, accumulating both mappers' gradients
// scaled by `scale`.
double CycleTerm(const MapperParams& first, const MapperParams& second,
                 const RowMatrix& batch, MapperParams* first_grad,
                 MapperParams* second_grad, double scale) {
  MapperTape first_tape, second_tape;
  RowMatrix mid = MapperForwardBatch(first, batch, &first_tape);
  RowMatrix back = MapperForwardBatch(second, mid, &second_tape);
  RowMatrix residual = back - batch;
  const double n = static_cast<double>(batch.rows());
  const double value = residual.cwiseAbs().sum() / n;
  if (first_grad != nullptr || second_grad != nullptr) {
    RowMatrix dback = residual.unaryExpr([n, scale](double r) {
      return r > 0 ? scale / n : (r < 0 ? -scale / n : 0.0);
    });
    RowMatrix dmid;
    MapperBackward(second, second_tape, dback, second_grad, &dmid);
    MapperBackward(first, first_tape, dmid, first_grad, nullptr);
  }
  return value;
}

double CycleWithGrad(const AlignerParams& p, const RowMatrix& batch1,
                     const RowMatrix& batch2, AlignerParams* grad,
                     double scale) {
  CheckBatches(batch1, batch2);
  MapperParams* g12 = grad != nullptr ? &grad->g12 : nullptr;
  MapperParams* g21 = grad != nullptr ? &grad->g21 : nullptr;
  return CycleTerm(p.g12, p.g21, batch1, g12, g21, scale) +
         CycleTerm(p.g21, p.g12, batch2, g21, g12, scale);
}

}  // namespace

AlignerParams ZerosLike(const AlignerParams& p) {
  return {ZerosLike(p.g12), ZerosLike(p.g21), ZerosLike(p.d1), ZerosLike(p.d2)};
}

double AdvLoss12(const MapperParams& g12, const CriticParams& d2,
                 const RowMatrix& batch1, const RowMatrix& batch2) {
  return AdversarialTerm(g12, d2, batch1, batch2, {});
}

double AdvLoss21(const MapperParams& g21, const CriticParams& d1,
                 const RowMatrix& batch1, const RowMatrix& batch2) {
  return AdversarialTerm(g21, d1, batch2, batch1, {});
}

double CycleLoss(const MapperParams& g12, const MapperParams& g21,
                 const RowMatrix& batch1, const RowMatrix& batch2) {
  CheckBatches(batch1, batch2);
  return CycleTerm(g12, g21, batch1, nullptr, nullptr, 1.0) +
         CycleTerm(g21, g12, batch2, nullptr, nullptr, 1.0);
}

LossTerms EvaluateLosses(const AlignerParams& p, const RowMatrix& batch1,
                         const RowMatrix& batch2, double lambda) {
  if (lambda < 0) throw std::invalid_argument("lambda must be >= 0");
  LossTerms t;
  t.adv12 = AdvLoss12(p.g12, p.d2, batch1, batch2);
  t.adv21 = AdvLoss21(p.g21, p.d1, batch1, batch2);
  t.cycle = CycleLoss(p.g12, p.g21, batch1, batch2);
  t.total = t.adv12 + t.adv21 + lambda * t.cycle;
  return t;
}

double TotalLoss(const AlignerParams& p, const RowMatrix& batch1,
                 const RowMatrix& batch2, double lambda) {
  return EvaluateLosses(p, batch1, batch2, lambda).total;
}

LossGradient AdvLoss12Gradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2) {
  LossGradient out{0.0, ZerosLike(p)};
  out.value = AdversarialTerm(p.g12, p.d2, batch1, batch2,
                              {&out.grad.g12, &out.grad.d2,
                               GeneratorLossMode::kSaturating});
  return out;
}

LossGradient AdvLoss21Gradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2) {
  LossGradient out{0.0, ZerosLike(p)};
  out.value = AdversarialTerm(p.g21, p.d1, batch2, batch1,
                              {&out.grad.g21, &out.grad.d1,
                               GeneratorLossMode::kSaturating});
  return out;
}

LossGradient CycleLossGradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2) {
  LossGradient out{0.0, ZerosLike(p)};
  out.value = CycleWithGrad(p, batch1, batch2, &out.grad, 1.0);
  return out;
}

LossGradient TotalLossGradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2, double lambda) {
  if (lambda < 0) throw std::invalid_argument("lambda must be >= 0");
  LossGradient out{0.0, ZerosLike(p)};
  const double adv12 = AdversarialTerm(
      p.g12, p.d2, batch1, batch2,
      {&out.grad.g12, &out.grad.d2, GeneratorLossMode::kSaturating});
  const double adv21 = AdversarialTerm(
      p.g21, p.d1, batch2, batch1,
      {&out.grad.g21, &out.grad.d1, GeneratorLossMode::kSaturating});
  const double cycle = CycleWithGrad(p, batch1, batch2, &out.grad, lambda);
  out.value = adv12 + adv21 + lambda * cycle;
  return out;
}

LossGradient GeneratorObjectiveGradient(const AlignerParams& p,
                                        const RowMatrix& batch1,
                                        const RowMatrix& batch2, double lambda,
                                        GeneratorLossMode mode) {
  if (lambda < 0) throw std::invalid_argument("lambda must be >= 0");
  LossGradient out{0.0, ZerosLike(p)};
  const double adv12 =
      AdversarialTerm(p.g12, p.d2, batch1, batch2, {&out.grad.g12, nullptr, mode});
  const double adv21 =
      AdversarialTerm(p.g21, p.d1, batch2, batch1, {&out.grad.g21, nullptr, mode});
  const double cycle = CycleWithGrad(p, batch1, batch2, &out.grad, lambda);
  out.value = adv12 + adv21 + lambda * cycle;
  return out;
}

LossGradient CriticObjectiveGradient(const AlignerParams& p,
                                     const RowMatrix& batch1,
                                     const RowMatrix& batch2) {
  LossGradient out{0.0, ZerosLike(p)};
  const double adv12 =
      AdversarialTerm(p.g12, p.d2, batch1, batch2, {nullptr, &out.grad.d2, {}});
  const double adv21 =
      AdversarialTerm(p.g21, p.d1, batch2, batch1, {nullptr, &out.grad.d1, {}});
  out.value = adv12 + adv21;
  return out;
}

}  // namespace netalign
