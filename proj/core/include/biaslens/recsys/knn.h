// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_KNN_H_
#define BIASLENS_RECSYS_KNN_H_

#include <memory>
#include <vector>

#include "biaslens/recsys.h"

namespace biaslens::recsys {

enum class Similarity { kCosine, kPearson };

// Similarity over co-rated items only; 0 when fewer than `min_corated` items
// are shared. Clamped to [-1, 1].
double knn_similarity(const InteractionMatrix& train, Index u, Index v, Similarity mode,
                      int min_corated = 2);

struct Neighbor {
  Index user;
  double similarity;
};

// User-based k-nearest-neighbours. Only positively similar users become
// neighbours; neighbours are ordered by similarity descending, then index.
// score(u, i) is the similarity-weighted mean rating of i among u's
// neighbours who rated it, 0 when none did.
class UserKnnModel : public Model {
 public:
  UserKnnModel(std::shared_ptr<const InteractionMatrix> train, std::size_t k);

  void fit(Similarity mode, int min_corated);

  double score(Index user, Index item) const override;
  void score_user(Index user, std::span<double> out) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  const std::vector<Neighbor>& neighbors(Index user) const { return neighbors_[user]; }

 private:
  std::shared_ptr<const InteractionMatrix> train_;
  std::size_t k_;
  std::vector<std::vector<Neighbor>> neighbors_;
};

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_KNN_H_
