// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/baselines.h"

#include "biaslens/recsys/dense.h"
#include "biaslens/rng.h"

namespace biaslens::recsys {

MostPopModel::MostPopModel(const InteractionMatrix& train) : popularity_(train.n_items()) {
  auto pop = matrix_popularity(train);
  for (std::size_t i = 0; i < pop.size(); ++i) popularity_[i] = pop[i];
}

std::vector<ParamBlock> MostPopModel::parameters() const {
  return {ParamBlock{"popularity", popularity_.size(), 1, popularity_}};
}

void MostPopModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  Vec v(static_cast<Eigen::Index>(popularity_.size()));
  from_block(blocks, "popularity", v);
  popularity_.assign(v.data(), v.data() + v.size());
}

double RandomModel::score(Index user, Index item) const { return hash_unit(seed_, user, item); }

}  // namespace biaslens::recsys
