// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_BASELINES_H_
#define BIASLENS_RECSYS_BASELINES_H_

#include <cstdint>
#include <vector>

#include "biaslens/recsys.h"

namespace biaslens::recsys {

// score(u, i) = number of training ratings of i.
class MostPopModel : public Model {
 public:
  explicit MostPopModel(const InteractionMatrix& train);
  MostPopModel(std::size_t n_items) : popularity_(n_items, 0.0) {}

  double score(Index, Index item) const override { return popularity_[item]; }
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  const std::vector<double>& popularity() const { return popularity_; }

 private:
  std::vector<double> popularity_;
};

// score(u, i) = hash of (seed, u, i) mapped to [0, 1).
class RandomModel : public Model {
 public:
  explicit RandomModel(std::uint64_t seed) : seed_(seed) {}

  double score(Index user, Index item) const override;
  std::vector<ParamBlock> parameters() const override { return {}; }
  void load_parameters(const std::vector<ParamBlock>&) override {}

 private:
  std::uint64_t seed_;
};

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_BASELINES_H_
