// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "biaslens/error.h"
#include "biaslens/recsys.h"
#include "biaslens/recsys/baselines.h"
#include "biaslens/recsys/bpr.h"
#include "biaslens/recsys/factor.h"
#include "biaslens/recsys/knn.h"
#include "biaslens/recsys/neumf.h"
#include "biaslens/recsys/nmf.h"
#include "biaslens/recsys/pf.h"
#include "biaslens/recsys/vaecf.h"
#include "biaslens/recsys/wmf.h"
#include "support/fixtures.h"

namespace biaslens::recsys {
namespace {

using testing::brute_force_top_k;
using testing::dense_interactions;
using testing::matrix_of;
using testing::random_matrix;

AlgorithmSpec quick_spec(Kind kind, std::uint64_t seed, int epochs = 15) {
  Hyperparams hp;
  if (AlgorithmSpec::defaults(kind).count("epochs")) hp["epochs"] = epochs;
  return AlgorithmSpec(kind, hp, seed);
}

TEST(Spec, DefaultsAndValidation) {
  EXPECT_EQ(AlgorithmSpec(Kind::kMf).get_int("factors"), 10);
  EXPECT_EQ(AlgorithmSpec(Kind::kMf).get("lr"), 0.005);
  EXPECT_EQ(AlgorithmSpec(Kind::kMf).get("reg"), 0.02);
  EXPECT_EQ(AlgorithmSpec(Kind::kUserKnn).get_int("k"), 50);
  EXPECT_EQ(AlgorithmSpec(Kind::kWmf).get("alpha"), 1.0);
  EXPECT_EQ(AlgorithmSpec(Kind::kVaeCf).get("beta"), 0.2);
  EXPECT_EQ(AlgorithmSpec(Kind::kNeuMf).get_int("negatives"), 4);
  try {
    AlgorithmSpec(Kind::kMf, {{"learning_rate", 0.1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidHyperparam);
  }
  EXPECT_THROW(AlgorithmSpec(Kind::kMf, {{"lr", -1.0}}), Error);
  EXPECT_THROW(AlgorithmSpec(Kind::kMf, {{"factors", 2.5}}), Error);
  EXPECT_THROW(AlgorithmSpec(Kind::kPf, {{"a", 0.0}}), Error);
  EXPECT_THROW(AlgorithmSpec(Kind::kMostPop, {{"epochs", 3}}), Error);
}

TEST(Spec, KindNames) {
  EXPECT_EQ(all_kinds().size(), 11u);
  for (Kind k : all_kinds()) EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_EQ(parse_kind("mostpop"), Kind::kMostPop);
  EXPECT_EQ(parse_kind("USERKNN"), Kind::kUserKnn);
  EXPECT_EQ(parse_kind("svd"), std::nullopt);
}

TEST(MostPop, PopularityTable) {
  auto train = random_matrix(20, 30, 0.2, 1);
  auto m = fit(AlgorithmSpec(Kind::kMostPop), train);
  auto pop = matrix_popularity(*train);
  for (Index i = 0; i < train->n_items(); ++i) {
    EXPECT_EQ(m.score(0, i), pop[i]);
    EXPECT_EQ(m.score(5, i), pop[i]);
  }
}

// Item k is rated by 12 - k of the users u0..u11.
std::vector<Interaction> staircase() {
  std::vector<Interaction> rows;
  for (int j = 0; j < 12; ++j) {
    for (int k = 0; k <= 11 - j; ++k) rows.push_back({"u" + std::to_string(j), "i" + std::to_string(k), 5});
  }
  return rows;
}

TEST(MostPop, GlobalTopTen) {
  auto rows = staircase();
  rows.push_back({"fresh", "i11", 5});
  auto train = matrix_of(rows);
  auto m = fit(AlgorithmSpec(Kind::kMostPop), train);
  auto recs = recommend_top_k(m, *train->users().find("fresh"), 10);
  ASSERT_EQ(recs.size(), 10u);
  for (Index k = 0; k < 10; ++k) EXPECT_EQ(train->item_id(recs[k].item), "i" + std::to_string(k));
}

TEST(MostPop, SkipsSeenTopThree) {
  auto rows = staircase();
  for (int k = 0; k < 3; ++k) rows.push_back({"top", "i" + std::to_string(k), 5});
  auto train = matrix_of(rows);
  auto m = fit(AlgorithmSpec(Kind::kMostPop), train);
  auto recs = recommend_top_k(m, *train->users().find("top"), 10);
  ASSERT_EQ(recs.size(), 9u);
  EXPECT_EQ(train->item_id(recs[0].item), "i3");
}

TEST(Random, SeededAndReproducible) {
  auto train = random_matrix(30, 40, 0.1, 2);
  auto a = fit(AlgorithmSpec(Kind::kRandom, {}, 7), train);
  auto b = fit(AlgorithmSpec(Kind::kRandom, {}, 7), train);
  auto c = fit(AlgorithmSpec(Kind::kRandom, {}, 8), train);
  EXPECT_EQ(recommend_top_k(a, 3), recommend_top_k(b, 3));
  EXPECT_NE(recommend_top_k(a, 3), recommend_top_k(c, 3));
}

TEST(Knn, SimilarityExamples) {
  std::vector<Interaction> rows{{"u", "a", 5}, {"u", "b", 3}, {"v", "a", 5}, {"v", "b", 3},
                                {"v", "c", 1}, {"w", "d", 2}, {"w", "c", 4}};
  auto m = InteractionMatrix::build(rows);
  EXPECT_DOUBLE_EQ(knn_similarity(m, 0, 1, Similarity::kCosine), 1.0);
  EXPECT_EQ(knn_similarity(m, 0, 2, Similarity::kCosine), 0.0);
  EXPECT_EQ(knn_similarity(m, 1, 2, Similarity::kCosine), 0.0);  // one co-rated item
  EXPECT_EQ(knn_similarity(m, 1, 2, Similarity::kCosine, 1), 1.0);
  EXPECT_DOUBLE_EQ(knn_similarity(m, 0, 1, Similarity::kPearson), 1.0);
}

TEST(Knn, HandComputedPrediction) {
  // A = (5, 3, -, 1), B = (4, -, 4, 1), C = (1, 1, 5, -)
  std::vector<Interaction> rows{{"A", "i0", 5}, {"A", "i1", 3}, {"A", "i3", 1},
                                {"B", "i0", 4}, {"B", "i2", 4}, {"B", "i3", 1},
                                {"C", "i0", 1}, {"C", "i1", 1}, {"C", "i2", 5}};
  auto train = matrix_of(rows);
  auto m = fit(AlgorithmSpec(Kind::kUserKnn), train);
  const double s_ab = (5.0 * 4 + 1 * 1) / (std::sqrt(26.0) * std::sqrt(17.0));
  const double s_ac = (5.0 * 1 + 3 * 1) / (std::sqrt(34.0) * std::sqrt(2.0));
  const double s_bc = (4.0 * 1 + 4 * 5) / (std::sqrt(32.0) * std::sqrt(26.0));
  EXPECT_NEAR(m.score("A", "i2"), (s_ab * 4 + s_ac * 5) / (s_ab + s_ac), 1e-12);
  EXPECT_NEAR(m.score("B", "i1"), (s_ab * 3 + s_bc * 1) / (s_ab + s_bc), 1e-12);
  EXPECT_NEAR(m.score("C", "i3"), (s_ac * 1 + s_bc * 1) / (s_ac + s_bc), 1e-12);
}

TEST(Mf, SingleCellConvergesToRating) {
  auto train = matrix_of({{"u1", "i1", 8}});
  auto m = fit(AlgorithmSpec(Kind::kMf, {{"epochs", 200}}), train);
  EXPECT_NEAR(m.score(0, 0), 8.0, 0.1);
  auto p = fit(AlgorithmSpec(Kind::kPmf, {{"epochs", 200}}), train);
  EXPECT_TRUE(std::isfinite(p.score(0, 0)));
}

TEST(Mf, ZeroFactorsLeaveFactorTermAtZero) {
  auto train = matrix_of({{"u", "a", 9}, {"u", "b", 3}, {"v", "a", 6}});
  FactorModel model(2, 2, 3, true);
  SeededRng rng(1, "t");
  model.init(0.0, train->mean_rating(), rng);
  SeededRng order(1, "order");
  sgd_epoch(model, *train, order, 0.01, 0.02);
  EXPECT_EQ(model.user_factors.squaredNorm(), 0.0);
  EXPECT_EQ(model.item_factors.squaredNorm(), 0.0);
  EXPECT_GT(model.user_bias.squaredNorm(), 0.0);
}

TEST(Mf, LossTraceDecreasesOnToy) {
  auto train = matrix_of(dense_interactions(4, 4, [](auto u, auto i) { return 1 + int((u * 3 + i * 5) % 10); }));
  for (Kind kind : {Kind::kMf, Kind::kPmf}) {
    auto m = fit(AlgorithmSpec(kind, {{"epochs", 10}, {"init_std", 0.1}}, 3), train);
    const auto& trace = m.loss_trace();
    ASSERT_EQ(trace.size(), 10u);
    for (std::size_t e = 1; e < trace.size(); ++e) EXPECT_LE(trace[e], trace[e - 1]) << kind_name(kind);
  }
}

TEST(Mf, DivergenceDetected) {
  auto train = random_matrix(10, 10, 0.5, 4);
  try {
    fit(AlgorithmSpec(Kind::kMf, {{"lr", 1e6}, {"epochs", 50}}), train);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergenceDetected);
  }
}

TEST(Nmf, NonnegativeAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto train = random_matrix(5, 5, 0.6, seed);
    NmfModel model(train->n_users(), train->n_items(), 3);
    SeededRng rng(seed, "nmf");
    model.init(rng);
    for (int e = 0; e < 20; ++e) {
      nmf_epoch(model, *train);
      ASSERT_GE(model.user_factors.minCoeff(), 0.0);
      ASSERT_GE(model.item_factors.minCoeff(), 0.0);
    }
  }
}

TEST(Nmf, ZeroRowIsAbsorbing) {
  auto train = random_matrix(5, 5, 0.6, 1);
  NmfModel model(train->n_users(), train->n_items(), 3);
  SeededRng rng(1, "nmf");
  model.init(rng);
  model.user_factors.row(2).setZero();
  for (int e = 0; e < 10; ++e) nmf_epoch(model, *train);
  EXPECT_EQ(model.user_factors.row(2).squaredNorm(), 0.0);
}

TEST(Nmf, RankOneRecovered) {
  const int u_vec[] = {1, 2};
  const int v_vec[] = {1, 2, 3, 4, 5};
  auto train = matrix_of(dense_interactions(2, 5, [&](auto u, auto i) { return u_vec[u] * v_vec[i]; }));
  NmfModel model(2, 5, 1);
  SeededRng rng(0, "nmf");
  model.init(rng);
  for (int e = 0; e < 200; ++e) nmf_epoch(model, *train);
  EXPECT_LT(nmf_masked_error(model, *train), 1e-3);
}

TEST(Wmf, TrickObjectiveMatchesDense) {
  auto train = random_matrix(6, 7, 0.4, 5);
  WmfModel model(6, 7, 3);
  SeededRng rng(5, "wmf");
  model.init(0.5, rng);
  const double alpha = 1.5, reg = 0.1;
  double dense = 0.0;
  for (Index u = 0; u < 6; ++u) {
    for (Index i = 0; i < 7; ++i) {
      auto r = train->rating(u, i);
      const double pref = r ? 1.0 : 0.0;
      const double conf = r ? 1.0 + alpha * *r : 1.0;
      const double s = model.user_factors.row(u).dot(model.item_factors.row(i));
      dense += conf * (pref - s) * (pref - s);
    }
  }
  dense += reg * (model.user_factors.squaredNorm() + model.item_factors.squaredNorm());
  EXPECT_NEAR(wmf_objective(model, *train, alpha, reg), dense, 1e-8);
}

TEST(Wmf, SingleCellRegularizedSolution) {
  auto train = matrix_of({{"u", "i", 4}});
  WmfModel model(1, 1, 3);
  SeededRng rng(0, "wmf");
  model.init(0.3, rng);
  const double reg = 0.02;
  for (int s = 0; s < 500; ++s) wmf_als_sweep(model, *train, 0.0, reg);
  EXPECT_NEAR(model.score(0, 0), 1.0 - reg, 1e-6);
}

TEST(Wmf, SweepsNeverIncrease) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto train = random_matrix(8, 9, 0.3, seed);
    WmfModel model(train->n_users(), train->n_items(), 4);
    SeededRng rng(seed, "wmf");
    model.init(0.1, rng);
    double prev = wmf_objective(model, *train, 1.0, 0.02);
    for (int s = 0; s < 2; ++s) {
      const double next = wmf_als_sweep(model, *train, 1.0, 0.02);
      EXPECT_LE(next, prev + 1e-9 * std::abs(prev));
      prev = next;
    }
  }
}

TEST(Pf, PositiveAndElboNondecreasing) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto train = random_matrix(5, 5, 0.6, seed);
    PfModel model(train->n_users(), train->n_items(), 3, PfPriors{});
    SeededRng rng(seed, "pf");
    model.init(rng);
    double prev = pf_elbo(model, *train);
    for (int s = 0; s < 30; ++s) {
      const double elbo = pf_cavi_step(model, *train);
      EXPECT_GE(elbo, prev - 1e-6) << "seed " << seed << " step " << s;
      prev = elbo;
      for (const Mat* m : {&model.theta_shape, &model.theta_rate, &model.beta_shape, &model.beta_rate}) {
        ASSERT_GT(m->minCoeff(), 0.0);
      }
      for (const Vec* v : {&model.xi_shape, &model.xi_rate, &model.eta_shape, &model.eta_rate}) {
        ASSERT_GT(v->minCoeff(), 0.0);
      }
    }
  }
}

TEST(Pf, SingleCellMeanMatchesCount) {
  auto train = matrix_of({{"u", "i", 3}});
  auto m = fit(AlgorithmSpec(Kind::kPf, {{"epochs", 200}}), train);
  EXPECT_NEAR(m.score(0, 0), 3.0, 0.5);
  const auto& trace = m.loss_trace();
  for (std::size_t e = 1; e < trace.size(); ++e) EXPECT_LE(trace[e], trace[e - 1] + 1e-6);
}

TEST(Bpr, SaturatedUpdateVanishes) {
  BprModel model(1, 2, 4);
  SeededRng rng(0, "bpr");
  model.init(0.01, rng);
  model.item_bias[0] = 200.0;
  model.item_bias[1] = -200.0;
  const BprModel before = model;
  const double loss = bpr_update(model, {0, 0, 1}, 0.1, 0.0);
  EXPECT_LT(loss, 1e-100);
  EXPECT_EQ(model.user_factors, before.user_factors);
  EXPECT_EQ(model.item_factors, before.item_factors);
  EXPECT_EQ(model.item_bias, before.item_bias);
}

TEST(Bpr, PlantedOrderRecovered) {
  // Planted order for user 0: item 2 > item 0 > item 3 > item 1.
  const Index order[] = {2, 0, 3, 1};
  BprModel model(1, 4, 5);
  SeededRng rng(3, "bpr");
  model.init(0.01, rng);
  for (int epoch = 0; epoch < 500; ++epoch) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) bpr_update(model, {0, order[a], order[b]}, 0.05, 0.01);
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) EXPECT_GT(model.score(0, order[a]), model.score(0, order[b]));
  }
}

TEST(Bpr, FullUserSkipped) {
  auto train = matrix_of({{"full", "a", 1}, {"full", "b", 1}, {"x", "a", 1}});
  BprModel model(2, 2, 2);
  SeededRng rng(0, "bpr");
  model.init(0.01, rng);
  BprStepStats stats;
  for (int s = 0; s < 200; ++s) bpr_step(model, *train, rng, 0.01, 0.01, stats);
  EXPECT_GT(stats.skipped_full_users, 0u);
  EXPECT_GT(stats.updates, 0u);
  EXPECT_EQ(stats.updates + stats.skipped_full_users, 200u);
}

TEST(NeuMf, ZeroHeadGivesHalf) {
  NeuMfModel model(3, 4);
  SeededRng rng(0, "neumf");
  model.init(0.01, rng);
  model.params[NeuMfModel::kHead].setZero();
  model.params[NeuMfModel::kHeadBias].setZero();
  std::vector<LabeledPair> batch{{0, 1, 1.0}, {2, 3, 0.0}, {1, 0, 1.0}};
  EXPECT_DOUBLE_EQ(model.score(0, 1), 0.5);
  EXPECT_NEAR(neumf_loss(model, batch), std::log(2.0), 1e-15);
}

TEST(NeuMf, SinglePositiveLearned) {
  NeuMfModel model(2, 3);
  SeededRng rng(0, "neumf");
  model.init(0.01, rng);
  Adam adam(model.params);
  std::vector<Mat> workspace;
  std::vector<LabeledPair> batch{{0, 1, 1.0}};
  for (int s = 0; s < 500; ++s) neumf_forward_backward(model, adam, batch, 0.01, workspace);
  EXPECT_GT(model.score(0, 1), 0.9);
}

TEST(NeuMf, LazyAdamLeavesUntouchedRows) {
  NeuMfModel model(3, 3);
  SeededRng rng(0, "neumf");
  model.init(0.1, rng);
  const Mat user_before = model.params[NeuMfModel::kGmfUser];
  Adam adam(model.params);
  std::vector<Mat> workspace;
  std::vector<LabeledPair> batch{{0, 1, 1.0}, {0, 2, 0.0}};
  for (int s = 0; s < 5; ++s) neumf_forward_backward(model, adam, batch, 0.01, workspace);
  EXPECT_NE(model.params[NeuMfModel::kGmfUser].row(0), user_before.row(0));
  EXPECT_EQ(model.params[NeuMfModel::kGmfUser].row(1), user_before.row(1));
  EXPECT_EQ(model.params[NeuMfModel::kGmfUser].row(2), user_before.row(2));
}

TEST(VaeCf, UniformDecoderLikelihood) {
  auto train = random_matrix(6, 9, 0.3, 2);
  VaeCfModel model(train);
  SeededRng rng(0, "vae");
  model.init(rng);
  model.params[VaeCfModel::kDecW2].setZero();
  model.params[VaeCfModel::kDecB2].setZero();
  std::vector<Index> users(train->n_users());
  std::iota(users.begin(), users.end(), 0);
  Mat noise = gaussian_matrix(users.size(), VaeCfModel::kLatent, 1.0, rng);
  auto terms = vaecf_terms(model, users, noise, 0.0);
  double expected = 0.0;
  for (Index u : users) expected += static_cast<double>(train->row(u).size()) * std::log(1.0 / 9.0);
  EXPECT_NEAR(terms.log_likelihood, expected, 1e-10);
  EXPECT_NEAR(terms.loss, -expected / static_cast<double>(users.size()), 1e-10);
}

TEST(VaeCf, StandardNormalPosteriorHasZeroKl) {
  auto train = random_matrix(6, 9, 0.3, 2);
  VaeCfModel model(train);
  SeededRng rng(0, "vae");
  model.init(rng);
  for (int t : {VaeCfModel::kMuW, VaeCfModel::kMuB, VaeCfModel::kLogVarW, VaeCfModel::kLogVarB}) {
    model.params[t].setZero();
  }
  std::vector<Index> users{0, 1, 2};
  Mat noise = gaussian_matrix(3, VaeCfModel::kLatent, 1.0, rng);
  EXPECT_EQ(vaecf_terms(model, users, noise, 0.2).kl, 0.0);
}

TEST(Scoring, UnknownIdsRejected) {
  auto train = random_matrix(5, 5, 0.5, 0);
  auto m = fit(AlgorithmSpec(Kind::kMostPop), train);
  try {
    m.score("nobody", "i0");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownUser);
  }
  try {
    m.score("u0", "nothing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownItem);
  }
  EXPECT_THROW(m.score(99, 0), Error);
  EXPECT_THROW(recommend_top_k(m, 99), Error);
}

class EveryKind : public ::testing::TestWithParam<Kind> {};

TEST_P(EveryKind, TopKMatchesFullScan) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto train = random_matrix(20 + seed % 31, 30 + seed % 51, 0.1, seed);
    auto m = fit(quick_spec(GetParam(), seed), train);
    for (Index u = 0; u < train->n_users(); ++u) {
      ASSERT_EQ(recommend_top_k(m, u, 10), brute_force_top_k(m, u, 10, true)) << "seed " << seed;
    }
    EXPECT_EQ(recommend_top_k(m, 0, 5, false), brute_force_top_k(m, 0, 5, false));
    EXPECT_EQ(recommend_top_k(m, 1, 1000), brute_force_top_k(m, 1, 1000, true));
  }
}

TEST_P(EveryKind, ScoreUserAgreesWithScore) {
  auto train = random_matrix(15, 25, 0.15, 9);
  auto m = fit(quick_spec(GetParam(), 9), train);
  std::vector<double> row(train->n_items());
  for (Index u = 0; u < train->n_users(); ++u) {
    m.score_user(u, row);
    for (Index i = 0; i < train->n_items(); ++i) {
      ASSERT_EQ(row[i], m.score(u, i));
      ASSERT_TRUE(std::isfinite(row[i]));
    }
  }
}

TEST_P(EveryKind, DeterministicFit) {
  auto train = random_matrix(25, 35, 0.12, 6);
  auto a = fit(quick_spec(GetParam(), 11), train);
  auto b = fit(quick_spec(GetParam(), 11), train);
  EXPECT_EQ(serialize_model(a), serialize_model(b));
  EXPECT_EQ(a.loss_trace(), b.loss_trace());
  for (Index u = 0; u < train->n_users(); ++u) EXPECT_EQ(recommend_top_k(a, u), recommend_top_k(b, u));
  auto pa = a.model().parameters(), pb = b.model().parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t k = 0; k < pa.size(); ++k) {
    EXPECT_EQ(pa[k].rows, pb[k].rows);
    EXPECT_EQ(pa[k].cols, pb[k].cols);
  }
}

TEST_P(EveryKind, SaveLoadRoundTrip) {
  auto train = random_matrix(12, 18, 0.2, 8);
  auto m = fit(quick_spec(GetParam(), 8), train);
  testing::TempDir dir;
  save_model(m, dir / "model.bin");
  auto loaded = load_model(dir / "model.bin", train);
  EXPECT_EQ(loaded.kind(), m.kind());
  EXPECT_EQ(loaded.spec().hyperparams(), m.spec().hyperparams());
  EXPECT_EQ(loaded.loss_trace(), m.loss_trace());
  EXPECT_EQ(serialize_model(loaded), serialize_model(m));
  for (Index u = 0; u < train->n_users(); ++u) {
    for (Index i = 0; i < train->n_items(); ++i) ASSERT_EQ(loaded.score(u, i), m.score(u, i));
  }
}

INSTANTIATE_TEST_SUITE_P(Recsys, EveryKind, ::testing::ValuesIn(all_kinds()),
                         [](const auto& info) { return std::string(kind_name(info.param)); });

TEST(ModelFile, RejectsCorruption) {
  auto train = random_matrix(6, 6, 0.4, 1);
  auto m = fit(quick_spec(Kind::kMf, 1), train);
  const std::string bytes = serialize_model(m);
  EXPECT_EQ(bytes.substr(0, 8), "BIASLENS");
  auto expect_format_error = [&](const std::string& b) {
    try {
      deserialize_model(b, train);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormatError);
    }
  };
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  expect_format_error(bad_magic);
  std::string bad_version = bytes;
  bad_version[8] = 9;
  expect_format_error(bad_version);
  expect_format_error(bytes.substr(0, bytes.size() - 3));
  expect_format_error(bytes + "x");
  auto other = random_matrix(7, 6, 0.4, 1);
  try {
    deserialize_model(bytes, other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormatError);
  }
}

}  // namespace
}  // namespace biaslens::recsys
