// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_NMF_H_
#define BIASLENS_RECSYS_NMF_H_

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

inline constexpr double kNmfEpsilon = 1e-9;

class NmfModel : public Model {
 public:
  NmfModel(std::size_t n_users, std::size_t n_items, std::size_t factors);

  // Uniform(0, 1) initialization.
  void init(SeededRng& rng);

  double score(Index user, Index item) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  Mat user_factors;
  Mat item_factors;
};

// Masked multiplicative update: user factors, then item factors, using only
// observed cells. Returns the masked squared reconstruction error afterwards.
double nmf_epoch(NmfModel& model, const InteractionMatrix& train);

double nmf_masked_error(const NmfModel& model, const InteractionMatrix& train);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_NMF_H_
