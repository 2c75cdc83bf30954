#ifndef NETALIGN_LOSSES_H_
#define NETALIGN_LOSSES_H_

#include "netalign/neural.h"
#include "netalign/types.h"

namespace netalign {

// Critic probabilities are clamped to [kProbabilityClamp, 1 - kProbabilityClamp]
// before taking logs.
inline constexpr double kProbabilityClamp = 1e-7;

// kSaturating minimizes log(1 - D(G(x))) exactly as in the minimax objective;
// kNonsaturating minimizes -log D(G(x)) instead. Critics always use the
// minimax objective.
enum class GeneratorLossMode { kSaturating, kNonsaturating };

// The four networks of the bidirectional model: g12 maps space 1 into space 2
// and is judged by d2; g21 maps space 2 into space 1 and is judged by d1.
struct AlignerParams {
  MapperParams g12;
  MapperParams g21;
  CriticParams d1;
  CriticParams d2;
};

AlignerParams ZerosLike(const AlignerParams& p);

// mean_{x2} log D2(x2) + mean_{x1} log(1 - D2(G12(x1))).
double AdvLoss12(const MapperParams& g12, const CriticParams& d2,
                 const RowMatrix& batch1, const RowMatrix& batch2);
// mean_{x1} log D1(x1) + mean_{x2} log(1 - D1(G21(x2))).
double AdvLoss21(const MapperParams& g21, const CriticParams& d1,
                 const RowMatrix& batch1, const RowMatrix& batch2);
// mean_{x1} |G21(G12(x1)) - x1|_1 + mean_{x2} |G12(G21(x2)) - x2|_1.
double CycleLoss(const MapperParams& g12, const MapperParams& g21,
                 const RowMatrix& batch1, const RowMatrix& batch2);
// AdvLoss12 + AdvLoss21 + lambda * CycleLoss.
double TotalLoss(const AlignerParams& p, const RowMatrix& batch1,
                 const RowMatrix& batch2, double lambda);

struct LossTerms {
  double adv12 = 0.0;
  double adv21 = 0.0;
  double cycle = 0.0;
  double total = 0.0;
};

LossTerms EvaluateLosses(const AlignerParams& p, const RowMatrix& batch1,
                         const RowMatrix& batch2, double lambda);

// A loss value with its gradient for every network; networks that do not
// participate in the loss get zero gradients.
struct LossGradient {
  double value = 0.0;
  AlignerParams grad;
};

LossGradient AdvLoss12Gradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2);
LossGradient AdvLoss21Gradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2);
LossGradient CycleLossGradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2);
LossGradient TotalLossGradient(const AlignerParams& p, const RowMatrix& batch1,
                               const RowMatrix& batch2, double lambda);

// What the generators minimize: the two adversarial terms in `mode` plus
// lambda * cycle. Only g12/g21 gradients are filled. In kSaturating mode this
// is TotalLoss with the critics held fixed.
LossGradient GeneratorObjectiveGradient(const AlignerParams& p,
                                        const RowMatrix& batch1,
                                        const RowMatrix& batch2, double lambda,
                                        GeneratorLossMode mode);

// What the critics maximize: AdvLoss12 + AdvLoss21 with the generators held
// fixed. Only d1/d2 gradients are filled.
LossGradient CriticObjectiveGradient(const AlignerParams& p,
                                     const RowMatrix& batch1,
                                     const RowMatrix& batch2);

}  // namespace netalign

#endif  // NETALIGN_LOSSES_H_
