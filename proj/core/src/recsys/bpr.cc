// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/bpr.h"

#include "biaslens/error.h"

namespace biaslens::recsys {

BprModel::BprModel(std::size_t n_users, std::size_t n_items, std::size_t factors)
    : user_factors(Mat::Zero(n_users, factors)),
      item_factors(Mat::Zero(n_items, factors)),
      item_bias(Vec::Zero(n_items)) {}

void BprModel::init(double stddev, SeededRng& rng) {
  user_factors = gaussian_matrix(user_factors.rows(), user_factors.cols(), stddev, rng);
  item_factors = gaussian_matrix(item_factors.rows(), item_factors.cols(), stddev, rng);
  item_bias.setZero();
}

double BprModel::score(Index user, Index item) const {
  return user_factors.row(user).dot(item_factors.row(item)) + item_bias[item];
}

std::vector<ParamBlock> BprModel::parameters() const {
  return {to_block("user_factors", user_factors), to_block("item_factors", item_factors),
          to_block("item_bias", item_bias)};
}

void BprModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  from_block(blocks, "user_factors", user_factors);
  from_block(blocks, "item_factors", item_factors);
  from_block(blocks, "item_bias", item_bias);
}

double bpr_triple_loss(const BprModel& m, const BprTriple& t, double reg) {
  const double x = m.score(t.user, t.positive) - m.score(t.user, t.negative);
  const double norms = m.user_factors.row(t.user).squaredNorm() +
                       m.item_factors.row(t.positive).squaredNorm() +
                       m.item_factors.row(t.negative).squaredNorm() +
                       m.item_bias[t.positive] * m.item_bias[t.positive] +
                       m.item_bias[t.negative] * m.item_bias[t.negative];
  return softplus(-x) + 0.5 * reg * norms;
}

BprModel bpr_triple_gradient(const BprModel& m, const BprTriple& t, double reg) {
  BprModel g(m.user_factors.rows(), m.item_factors.rows(), m.user_factors.cols());
  const double x = m.score(t.user, t.positive) - m.score(t.user, t.negative);
  const double s = sigmoid(-x);
  const auto pu = m.user_factors.row(t.user);
  g.user_factors.row(t.user) =
      -s * (m.item_factors.row(t.positive) - m.item_factors.row(t.negative)) + reg * pu;
  g.item_factors.row(t.positive) += -s * pu + reg * m.item_factors.row(t.positive);
  g.item_factors.row(t.negative) += s * pu + reg * m.item_factors.row(t.negative);
  g.item_bias[t.positive] += -s + reg * m.item_bias[t.positive];
  g.item_bias[t.negative] += s + reg * m.item_bias[t.negative];
  return g;
}

double bpr_update(BprModel& m, const BprTriple& t, double lr, double reg) {
  const double x = m.score(t.user, t.positive) - m.score(t.user, t.negative);
  const double s = sigmoid(-x);
  const Eigen::RowVectorXd pu = m.user_factors.row(t.user);
  const Eigen::RowVectorXd diff = m.item_factors.row(t.positive) - m.item_factors.row(t.negative);
  m.user_factors.row(t.user) += lr * (s * diff - reg * pu);
  m.item_factors.row(t.positive) += lr * (s * pu - reg * m.item_factors.row(t.positive));
  m.item_factors.row(t.negative) += lr * (-s * pu - reg * m.item_factors.row(t.negative));
  m.item_bias[t.positive] += lr * (s - reg * m.item_bias[t.positive]);
  m.item_bias[t.negative] += lr * (-s - reg * m.item_bias[t.negative]);
  return softplus(-x);
}

void bpr_step(BprModel& m, const InteractionMatrix& train, SeededRng& rng, double lr, double reg,
              BprStepStats& stats) {
  const Index u = static_cast<Index>(rng.uniform_index(train.n_users()));
  const auto row = train.row(u);
  if (row.size() >= train.n_items()) {
    ++stats.skipped_full_users;
    return;
  }
  const Index pos = row[rng.uniform_index(row.size())].index;
  Index neg;
  do {
    neg = static_cast<Index>(rng.uniform_index(train.n_items()));
  } while (train.rating(u, neg).has_value());
  stats.loss_sum += bpr_update(m, {u, pos, neg}, lr, reg);
  ++stats.updates;
}

}  // namespace biaslens::recsys
