// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_FACTOR_H_
#define BIASLENS_RECSYS_FACTOR_H_

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

// Latent-factor rating model shared by MF (biased) and PMF (bias-free):
//   r_hat(u, i) = [mu + b_u + b_i] + p_u . q_i
// trained by SGD on
//   sum over observed cells of 1/2 e^2 + reg/2 (|p_u|^2 + |q_i|^2 [+ b_u^2 + b_i^2]).
class FactorModel : public Model {
 public:
  FactorModel(std::size_t n_users, std::size_t n_items, std::size_t factors, bool biased);

  void init(double stddev, double global_mean, SeededRng& rng);

  double score(Index user, Index item) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  bool biased = true;
  double global_mean = 0.0;
  Vec user_bias;
  Vec item_bias;
  Mat user_factors;
  Mat item_factors;
};

// One SGD pass over all observed cells in an order shuffled by `rng`;
// returns the objective after the pass. Throws Error(kDivergenceDetected).
double sgd_epoch(FactorModel& model, const InteractionMatrix& train, SeededRng& rng, double lr,
                 double reg);

double factor_objective(const FactorModel& model, const InteractionMatrix& train, double reg);

// Gradient of factor_objective, returned in a model of identical shape.
FactorModel factor_gradient(const FactorModel& model, const InteractionMatrix& train, double reg);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_FACTOR_H_
