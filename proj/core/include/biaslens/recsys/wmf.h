// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_WMF_H_
#define BIASLENS_RECSYS_WMF_H_

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

// Implicit-feedback factorization with confidence weights: preference 1 on
// observed cells (confidence 1 + alpha * rating), 0 elsewhere (confidence 1).
class WmfModel : public Model {
 public:
  WmfModel(std::size_t n_users, std::size_t n_items, std::size_t factors);

  void init(double stddev, SeededRng& rng);

  double score(Index user, Index item) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  Mat user_factors;
  Mat item_factors;
};

// Exact alternating least squares: every user row, then every item row.
// Returns the objective afterwards. Throws Error(kSingularSystem).
double wmf_als_sweep(WmfModel& model, const InteractionMatrix& train, double alpha, double reg);

// Objective via the Gram-matrix identity, touching only observed cells:
//   sum_all (x_u.y_i)^2 + sum_obs [c (1 - s)^2 - s^2] + reg (|X|^2 + |Y|^2)
double wmf_objective(const WmfModel& model, const InteractionMatrix& train, double alpha,
                     double reg);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_WMF_H_
