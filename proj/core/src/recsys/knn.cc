// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/knn.h"

#include <algorithm>
#include <cmath>

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

namespace {

// Sufficient statistics over the co-rated items of a user pair.
struct PairSums {
  double n = 0, su = 0, sv = 0, suu = 0, svv = 0, suv = 0;

  void add(double ru, double rv) {
    n += 1;
    su += ru;
    sv += rv;
    suu += ru * ru;
    svv += rv * rv;
    suv += ru * rv;
  }
};

double finish(const PairSums& s, Similarity mode, int min_corated) {
  if (s.n < min_corated || s.n < 1) return 0.0;
  double num, den;
  if (mode == Similarity::kCosine) {
    num = s.suv;
    den = std::sqrt(s.suu) * std::sqrt(s.svv);
  } else {
    num = s.suv - s.su * s.sv / s.n;
    const double vu = s.suu - s.su * s.su / s.n;
    const double vv = s.svv - s.sv * s.sv / s.n;
    if (vu <= 0.0 || vv <= 0.0) return 0.0;
    den = std::sqrt(vu) * std::sqrt(vv);
  }
  if (den <= 0.0) return 0.0;
  return std::clamp(num / den, -1.0, 1.0);
}

}  // namespace

double knn_similarity(const InteractionMatrix& train, Index u, Index v, Similarity mode,
                      int min_corated) {
  auto ru = train.row(u), rv = train.row(v);
  PairSums s;
  std::size_t a = 0, b = 0;
  while (a < ru.size() && b < rv.size()) {
    if (ru[a].index < rv[b].index) {
      ++a;
    } else if (rv[b].index < ru[a].index) {
      ++b;
    } else {
      s.add(ru[a].rating, rv[b].rating);
      ++a;
      ++b;
    }
  }
  return finish(s, mode, min_corated);
}

UserKnnModel::UserKnnModel(std::shared_ptr<const InteractionMatrix> train, std::size_t k)
    : train_(std::move(train)), k_(k), neighbors_(train_->n_users()) {}

void UserKnnModel::fit(Similarity mode, int min_corated) {
  const InteractionMatrix& m = *train_;
  const std::size_t n = m.n_users();
  std::vector<PairSums> sums(n);
  std::vector<Index> touched;
  std::vector<bool> seen(n, false);
  for (Index u = 0; u < n; ++u) {
    touched.clear();
    // Ascending item order, matching knn_similarity's merge.
    for (const Cell& cu : m.row(u)) {
      for (const Cell& cv : m.col(cu.index)) {
        if (cv.index == u) continue;
        if (!seen[cv.index]) {
          seen[cv.index] = true;
          touched.push_back(cv.index);
          sums[cv.index] = PairSums{};
        }
        sums[cv.index].add(cu.rating, cv.rating);
      }
    }
    std::vector<Neighbor> cand;
    for (Index v : touched) {
      seen[v] = false;
      double s = finish(sums[v], mode, min_corated);
      if (s > 0.0) cand.push_back({v, s});
    }
    auto better = [](const Neighbor& a, const Neighbor& b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity : a.user < b.user;
    };
    if (cand.size() > k_) {
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k_), cand.end(),
                        better);
      cand.resize(k_);
    } else {
      std::sort(cand.begin(), cand.end(), better);
    }
    neighbors_[u] = std::move(cand);
  }
}

double UserKnnModel::score(Index user, Index item) const {
  double num = 0.0, den = 0.0;
  for (const Neighbor& nb : neighbors_[user]) {
    if (auto r = train_->rating(nb.user, item)) {
      num += nb.similarity * *r;
      den += nb.similarity;
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

void UserKnnModel::score_user(Index user, std::span<double> out) const {
  std::vector<double> den(out.size(), 0.0);
  std::fill(out.begin(), out.end(), 0.0);
  for (const Neighbor& nb : neighbors_[user]) {
    for (const Cell& c : train_->row(nb.user)) {
      out[c.index] += nb.similarity * c.rating;
      den[c.index] += nb.similarity;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = den[i] > 0.0 ? out[i] / den[i] : 0.0;
}

std::vector<ParamBlock> UserKnnModel::parameters() const {
  ParamBlock ids{"neighbor_users", neighbors_.size(), k_, {}};
  ParamBlock sims{"neighbor_similarities", neighbors_.size(), k_, {}};
  ids.data.assign(neighbors_.size() * k_, -1.0);
  sims.data.assign(neighbors_.size() * k_, 0.0);
  for (std::size_t u = 0; u < neighbors_.size(); ++u) {
    for (std::size_t j = 0; j < neighbors_[u].size(); ++j) {
      ids.data[u * k_ + j] = neighbors_[u][j].user;
      sims.data[u * k_ + j] = neighbors_[u][j].similarity;
    }
  }
  return {std::move(ids), std::move(sims)};
}

void UserKnnModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  Mat ids(neighbors_.size(), k_), sims(neighbors_.size(), k_);
  from_block(blocks, "neighbor_users", ids);
  from_block(blocks, "neighbor_similarities", sims);
  for (std::size_t u = 0; u < neighbors_.size(); ++u) {
    neighbors_[u].clear();
    for (std::size_t j = 0; j < k_; ++j) {
      if (ids(u, j) < 0) break;
      neighbors_[u].push_back({static_cast<Index>(ids(u, j)), sims(u, j)});
    }
  }
}

}  // namespace biaslens::recsys
