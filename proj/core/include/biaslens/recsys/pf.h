// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_PF_H_
#define BIASLENS_RECSYS_PF_H_

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

struct PfPriors {
  double a = 0.3;        // shape of user factors
  double a_prime = 0.3;  // shape of user activity
  double b_prime = 1.0;  // mean of user activity
  double c = 0.3;        // shape of item factors
  double c_prime = 0.3;  // shape of item popularity
  double d_prime = 1.0;  // mean of item popularity
};

inline constexpr double kPfFloor = 1e-10;

// Hierarchical Poisson factorization with mean-field Gamma variational
// factors. Ratings are treated as counts.
//   theta_uk ~ Gamma(a, xi_u),  xi_u ~ Gamma(a', a'/b')
//   beta_ik  ~ Gamma(c, eta_i), eta_i ~ Gamma(c', c'/d')
//   y_ui ~ Poisson(theta_u . beta_i)
class PfModel : public Model {
 public:
  PfModel(std::size_t n_users, std::size_t n_items, std::size_t factors, PfPriors priors);

  void init(SeededRng& rng);

  double score(Index user, Index item) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  PfPriors priors;
  Mat theta_shape, theta_rate;  // users x K
  Vec xi_shape, xi_rate;        // users
  Mat beta_shape, beta_rate;    // items x K
  Vec eta_shape, eta_rate;      // items
};

// One coordinate-ascent round: multinomial responsibilities, then user
// factors, user activity, item factors, item popularity. Returns the ELBO.
double pf_cavi_step(PfModel& model, const InteractionMatrix& train);

// ELBO with the responsibilities at their optimum for the current Gamma
// parameters.
double pf_elbo(const PfModel& model, const InteractionMatrix& train);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_PF_H_
