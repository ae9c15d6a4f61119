// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/nmf.h"

namespace biaslens::recsys {

NmfModel::NmfModel(std::size_t n_users, std::size_t n_items, std::size_t factors)
    : user_factors(Mat::Zero(n_users, factors)), item_factors(Mat::Zero(n_items, factors)) {}

void NmfModel::init(SeededRng& rng) {
  for (Eigen::Index k = 0; k < user_factors.size(); ++k) user_factors.data()[k] = rng.uniform();
  for (Eigen::Index k = 0; k < item_factors.size(); ++k) item_factors.data()[k] = rng.uniform();
}

double NmfModel::score(Index user, Index item) const {
  return user_factors.row(user).dot(item_factors.row(item));
}

std::vector<ParamBlock> NmfModel::parameters() const {
  return {to_block("user_factors", user_factors), to_block("item_factors", item_factors)};
}

void NmfModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  from_block(blocks, "user_factors", user_factors);
  from_block(blocks, "item_factors", item_factors);
}

namespace {

// Updates every row of `target` against the fixed `other` factors.
template <class CellsFn>
void multiplicative_pass(Mat& target, const Mat& other, std::size_t n_rows, CellsFn cells) {
  const Eigen::Index k = target.cols();
  Eigen::RowVectorXd num(k), den(k);
  for (Index r = 0; r < n_rows; ++r) {
    num.setZero();
    den.setZero();
    for (const Cell& c : cells(r)) {
      const double pred = target.row(r).dot(other.row(c.index));
      num += c.rating * other.row(c.index);
      den += pred * other.row(c.index);
    }
    target.row(r).array() *= num.array() / (den.array() + kNmfEpsilon);
  }
}

}  // namespace

double nmf_epoch(NmfModel& model, const InteractionMatrix& train) {
  multiplicative_pass(model.user_factors, model.item_factors, train.n_users(),
                      [&](Index u) { return train.row(u); });
  multiplicative_pass(model.item_factors, model.user_factors, train.n_items(),
                      [&](Index i) { return train.col(i); });
  return nmf_masked_error(model, train);
}

double nmf_masked_error(const NmfModel& model, const InteractionMatrix& train) {
  double err = 0.0;
  for (Index u = 0; u < train.n_users(); ++u) {
    for (const Cell& c : train.row(u)) {
      const double e = c.rating - model.score(u, c.index);
      err += e * e;
    }
  }
  return err;
}

}  // namespace biaslens::recsys
