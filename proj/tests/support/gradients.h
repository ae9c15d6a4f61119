// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_TESTS_SUPPORT_GRADIENTS_H_
#define BIASLENS_TESTS_SUPPORT_GRADIENTS_H_

#include <span>
#include <vector>

#include "biaslens/recsys/bpr.h"
#include "biaslens/recsys/factor.h"
#include "biaslens/recsys/neumf.h"
#include "biaslens/recsys/vaecf.h"
#include "support/fixtures.h"

// Finite-difference checks of every analytic gradient on fixed small
// fixtures, shared by the unit and acceptance suites.
namespace biaslens::testing {

template <class M>
std::span<double> flat(M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <class M>
std::span<const double> flat_const(const M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

// 4 x 4 dense toy, 3 factors; biases only when `biased` (MF vs PMF).
inline GradCheck check_factor_gradient(bool biased) {
  using namespace recsys;
  auto train = matrix_of(dense_interactions(4, 4, [](auto u, auto i) { return 1 + int((u * 7 + i * 3) % 10); }));
  FactorModel model(4, 4, 3, biased);
  SeededRng rng(1, "grad");
  model.init(0.5, train->mean_rating(), rng);
  if (biased) {
    for (int k = 0; k < 4; ++k) {
      model.user_bias[k] = rng.normal(0, 0.5);
      model.item_bias[k] = rng.normal(0, 0.5);
    }
  }
  const double reg = 0.05;
  FactorModel g = factor_gradient(model, *train, reg);
  auto loss = [&] { return factor_objective(model, *train, reg); };
  GradCheck r;
  grad_check(flat(model.user_factors), flat_const(g.user_factors), loss, r);
  grad_check(flat(model.item_factors), flat_const(g.item_factors), loss, r);
  if (biased) {
    grad_check(flat(model.user_bias), flat_const(g.user_bias), loss, r);
    grad_check(flat(model.item_bias), flat_const(g.item_bias), loss, r);
  }
  return r;
}

inline GradCheck check_bpr_gradient() {
  using namespace recsys;
  BprModel model(3, 5, 4);
  SeededRng rng(2, "grad");
  model.init(0.5, rng);
  for (int i = 0; i < 5; ++i) model.item_bias[i] = rng.normal(0, 0.5);
  const BprTriple t{1, 3, 0};
  const double reg = 0.05;
  BprModel g = bpr_triple_gradient(model, t, reg);
  auto loss = [&] { return bpr_triple_loss(model, t, reg); };
  GradCheck r;
  grad_check(flat(model.user_factors), flat_const(g.user_factors), loss, r);
  grad_check(flat(model.item_factors), flat_const(g.item_factors), loss, r);
  grad_check(flat(model.item_bias), flat_const(g.item_bias), loss, r);
  return r;
}

// Two-example batch, one positive and one negative.
inline GradCheck check_neumf_gradient() {
  using namespace recsys;
  NeuMfModel model(3, 4);
  SeededRng rng(3, "grad");
  model.init(0.3, rng);
  for (Mat& p : model.params) {
    for (Eigen::Index k = 0; k < p.size(); ++k) p.data()[k] += rng.normal(0, 0.1);
  }
  std::vector<LabeledPair> batch{{0, 1, 1.0}, {2, 3, 0.0}};
  std::vector<Mat> grads;
  neumf_gradients(model, batch, grads);
  auto loss = [&] { return neumf_loss(model, batch); };
  GradCheck r;
  for (int t = 0; t < NeuMfModel::kNumTensors; ++t) {
    grad_check(flat(model.params[t]), flat_const(grads[t]), loss, r);
  }
  return r;
}

// Reparameterization noise is drawn once and held fixed.
inline GradCheck check_vaecf_gradient() {
  using namespace recsys;
  auto train = random_matrix(5, 8, 0.35, 4);
  VaeCfModel model(train);
  SeededRng rng(4, "grad");
  model.init(rng);
  for (Mat& p : model.params) {
    for (Eigen::Index k = 0; k < p.size(); ++k) p.data()[k] += rng.normal(0, 0.05);
  }
  std::vector<Index> users{0, 2, 4};
  const Mat noise = gaussian_matrix(users.size(), VaeCfModel::kLatent, 1.0, rng);
  const double beta = 0.3;
  std::vector<Mat> grads;
  vaecf_gradients(model, users, noise, beta, grads);
  auto loss = [&] { return vaecf_terms(model, users, noise, beta).loss; };
  GradCheck r;
  for (int t = 0; t < VaeCfModel::kNumTensors; ++t) {
    grad_check(flat(model.params[t]), flat_const(grads[t]), loss, r);
  }
  return r;
}

}  // namespace biaslens::testing

#endif  // BIASLENS_TESTS_SUPPORT_GRADIENTS_H_
