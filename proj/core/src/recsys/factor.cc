// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/factor.h"

#include "biaslens/error.h"

namespace biaslens::recsys {

FactorModel::FactorModel(std::size_t n_users, std::size_t n_items, std::size_t factors,
                         bool biased_model)
    : biased(biased_model),
      user_bias(Vec::Zero(n_users)),
      item_bias(Vec::Zero(n_items)),
      user_factors(Mat::Zero(n_users, factors)),
      item_factors(Mat::Zero(n_items, factors)) {}

void FactorModel::init(double stddev, double mean, SeededRng& rng) {
  global_mean = biased ? mean : 0.0;
  user_bias.setZero();
  item_bias.setZero();
  user_factors = gaussian_matrix(user_factors.rows(), user_factors.cols(), stddev, rng);
  item_factors = gaussian_matrix(item_factors.rows(), item_factors.cols(), stddev, rng);
}

double FactorModel::score(Index user, Index item) const {
  double s = user_factors.row(user).dot(item_factors.row(item));
  if (biased) s += global_mean + user_bias[user] + item_bias[item];
  return s;
}

std::vector<ParamBlock> FactorModel::parameters() const {
  Vec mean(1);
  mean[0] = global_mean;
  return {to_block("global_mean", mean), to_block("user_bias", user_bias),
          to_block("item_bias", item_bias), to_block("user_factors", user_factors),
          to_block("item_factors", item_factors)};
}

void FactorModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  Vec mean(1);
  from_block(blocks, "global_mean", mean);
  global_mean = mean[0];
  from_block(blocks, "user_bias", user_bias);
  from_block(blocks, "item_bias", item_bias);
  from_block(blocks, "user_factors", user_factors);
  from_block(blocks, "item_factors", item_factors);
}

double factor_objective(const FactorModel& model, const InteractionMatrix& train, double reg) {
  double loss = 0.0;
  for (Index u = 0; u < train.n_users(); ++u) {
    for (const Cell& c : train.row(u)) {
      const double e = c.rating - model.score(u, c.index);
      double norms = model.user_factors.row(u).squaredNorm() +
                     model.item_factors.row(c.index).squaredNorm();
      if (model.biased) {
        norms += model.user_bias[u] * model.user_bias[u] +
                 model.item_bias[c.index] * model.item_bias[c.index];
      }
      loss += 0.5 * e * e + 0.5 * reg * norms;
    }
  }
  return loss;
}

FactorModel factor_gradient(const FactorModel& model, const InteractionMatrix& train, double reg) {
  FactorModel g(model.user_factors.rows(), model.item_factors.rows(), model.user_factors.cols(),
                model.biased);
  for (Index u = 0; u < train.n_users(); ++u) {
    for (const Cell& c : train.row(u)) {
      const Index i = c.index;
      const double e = c.rating - model.score(u, i);
      g.user_factors.row(u) += -e * model.item_factors.row(i) + reg * model.user_factors.row(u);
      g.item_factors.row(i) += -e * model.user_factors.row(u) + reg * model.item_factors.row(i);
      if (model.biased) {
        g.user_bias[u] += -e + reg * model.user_bias[u];
        g.item_bias[i] += -e + reg * model.item_bias[i];
      }
    }
  }
  return g;
}

double sgd_epoch(FactorModel& model, const InteractionMatrix& train, SeededRng& rng, double lr,
                 double reg) {
  std::vector<std::pair<Index, Cell>> order;
  order.reserve(train.n_ratings());
  for (Index u = 0; u < train.n_users(); ++u) {
    for (const Cell& c : train.row(u)) order.emplace_back(u, c);
  }
  rng.shuffle(order);

  Eigen::RowVectorXd pu_old;
  for (const auto& [u, c] : order) {
    const Index i = c.index;
    const double e = c.rating - model.score(u, i);
    if (model.biased) {
      model.user_bias[u] += lr * (e - reg * model.user_bias[u]);
      model.item_bias[i] += lr * (e - reg * model.item_bias[i]);
    }
    pu_old = model.user_factors.row(u);
    model.user_factors.row(u) += lr * (e * model.item_factors.row(i) - reg * pu_old);
    model.item_factors.row(i) += lr * (e * pu_old - reg * model.item_factors.row(i));
  }
  const double loss = factor_objective(model, train, reg);
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kDivergenceDetected, "SGD loss became non-finite; lower the lr");
  }
  return loss;
}

}  // namespace biaslens::recsys
