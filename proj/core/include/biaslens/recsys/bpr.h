// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_BPR_H_
#define BIASLENS_RECSYS_BPR_H_

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

// Pairwise ranking model on the implicit view: score = p_u . q_i + b_i.
class BprModel : public Model {
 public:
  BprModel(std::size_t n_users, std::size_t n_items, std::size_t factors);

  void init(double stddev, SeededRng& rng);

  double score(Index user, Index item) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  Mat user_factors;
  Mat item_factors;
  Vec item_bias;
};

struct BprTriple {
  Index user;
  Index positive;
  Index negative;
};

// -ln sigmoid(x_ui - x_uj) + reg/2 (|p_u|^2 + |q_i|^2 + |q_j|^2 + b_i^2 + b_j^2)
double bpr_triple_loss(const BprModel& model, const BprTriple& t, double reg);

// Gradient of bpr_triple_loss; only the rows touched by the triple are
// nonzero.
BprModel bpr_triple_gradient(const BprModel& model, const BprTriple& t, double reg);

// Applies one SGD update for the given triple; returns -ln sigmoid(x).
double bpr_update(BprModel& model, const BprTriple& t, double lr, double reg);

struct BprStepStats {
  double loss_sum = 0.0;
  std::size_t updates = 0;
  std::size_t skipped_full_users = 0;
};

// Samples a user uniformly, i+ uniformly from the user's items and j-
// uniformly among the user's unseen items, then updates. Users who have rated every item are skipped and
// counted in `stats`.
void bpr_step(BprModel& model, const InteractionMatrix& train, SeededRng& rng, double lr,
              double reg, BprStepStats& stats);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_BPR_H_
