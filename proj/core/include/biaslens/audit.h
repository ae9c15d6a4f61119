// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_AUDIT_H_
#define BIASLENS_AUDIT_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "biaslens/matrix.h"
#include "biaslens/recsys.h"
#include "biaslens/stats.h"
#include "biaslens/types.h"

namespace biaslens::audit {

enum class UnknownPolicy { kExclude, kCountAsNo };

std::string_view unknown_policy_name(UnknownPolicy policy);
std::optional<UnknownPolicy> parse_unknown_policy(std::string_view name);

struct SplitResult {
  std::shared_ptr<const InteractionMatrix> train;
  std::vector<Interaction> test;  // input order
  double ratio = 0.8;
  std::uint64_t seed = 0;
  // Ids that occur only in the test part; they cannot be recommended to or
  // recommended.
  std::vector<std::string> test_only_users;
  std::vector<std::string> test_only_items;
};

// Global mode shuffles all interactions and keeps the first round(ratio * n)
// for training. Stratified mode does the same within every user. Both
// parts keep input order. Throws Error(kInvalidArgument) unless
// 0 < ratio <= 1, and Error(kEmptyInput) when the train part is empty.
SplitResult split(std::span<const Interaction> interactions, double ratio = 0.8,
                  std::uint64_t seed = 0, bool stratified = false);

// Group of every train item (by index); ids missing from `predicate` are
// unknown.
std::vector<Ternary> item_groups(const InteractionMatrix& train,
                                 const std::unordered_map<std::string, Ternary>& predicate);

// Welch test of train popularity, yes-group (a) against no-group (b).
stats::WelchResult group_popularity_ttest(const InteractionMatrix& train,
                                          std::span<const Ternary> groups);

struct UserRecs {
  Index user;
  std::vector<recsys::Recommendation> items;
};

// Ranked lists for a set of train users, ordered by user index.
struct RecommendationSet {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<UserRecs> lists;
};

// Top-k for every train user, fanned out over `threads` workers.
RecommendationSet recommend_all(const recsys::FittedModel& model, std::size_t k,
                                std::size_t threads = 1);

// TSV: algorithm, seed, user_id, rank (1-based), item_id, score.
std::string recommendation_set_to_tsv(const RecommendationSet& recs,
                                      const InteractionMatrix& train);
// Throws Error(kFormatError), Error(kUnknownUser), Error(kUnknownItem).
RecommendationSet parse_recommendation_set(std::string_view content,
                                           const InteractionMatrix& train);
void write_recommendation_set(const std::filesystem::path& path, const RecommendationSet& recs,
                              const InteractionMatrix& train);
RecommendationSet read_recommendation_set(const std::filesystem::path& path,
                                          const InteractionMatrix& train);

// Mean train popularity of a user's profile and of their list.
struct UserGap {
  Index user;
  double profile_gap;
  double rec_gap;
};

// Users with an empty list are skipped.
std::vector<UserGap> user_gaps(const InteractionMatrix& train, const RecommendationSet& recs);

struct GapSummary {
  double gap_profile = 0.0;
  double gap_rec = 0.0;
  double delta_gap_pct = 0.0;
};

// 100 * (GAP_rec - GAP_profile) / GAP_profile over users with a nonempty
// list. Throws Error(kZeroProfileGap) when GAP_profile is zero or there are
// no such users.
GapSummary gap_summary(const InteractionMatrix& train, const RecommendationSet& recs);
double delta_gap_pct(const InteractionMatrix& train, const RecommendationSet& recs);

struct UserRatio {
  Index user;
  std::optional<double> profile_ratio;  // absent when the denominator is 0
  std::optional<double> rec_ratio;
};

struct RatioSummary {
  std::optional<double> avg_profile_ratio;  // unweighted mean over defined users
  std::optional<double> avg_rec_ratio;
  std::size_t profile_users = 0;
  std::size_t rec_users = 0;
  std::vector<UserRatio> rows;  // one per user in recs
};

RatioSummary attribute_ratios(const InteractionMatrix& train, const RecommendationSet& recs,
                              std::span<const Ternary> groups,
                              UnknownPolicy policy = UnknownPolicy::kExclude);

struct PerUserRow {
  std::string user_id;
  std::optional<double> profile_ratio;
  std::optional<double> rec_ratio;
  double profile_gap = 0.0;
  double rec_gap = 0.0;

  friend bool operator==(const PerUserRow&, const PerUserRow&) = default;
};

struct AuditReport {
  std::string algorithm;
  std::uint64_t seed = 0;
  recsys::Hyperparams hyperparams;
  std::size_t k = 10;
  std::string target_country;  // informational; set by the caller
  UnknownPolicy unknown_policy = UnknownPolicy::kExclude;
  std::size_t users = 0;
  double gap_profile = 0.0;
  double gap_rec = 0.0;
  double delta_gap_pct = 0.0;
  std::optional<double> avg_profile_ratio;
  std::optional<double> avg_rec_ratio;
  std::size_t profile_ratio_users = 0;
  std::size_t rec_ratio_users = 0;
  std::optional<stats::WelchResult> t_test;  // absent for degenerate groups
  std::vector<PerUserRow> per_user;
};

// Metrics for one recommendation set. `t_test` is computed once per split
// by the caller.
AuditReport compute_report(const InteractionMatrix& train, const RecommendationSet& recs,
                           std::span<const Ternary> groups, UnknownPolicy policy,
                           const std::optional<stats::WelchResult>& t_test,
                           const recsys::Hyperparams& hyperparams, std::size_t k);

std::string report_to_json(const AuditReport& report);
// Scalar fields only; per_user comes from the sibling TSV.
AuditReport report_from_json(std::string_view json);
std::string per_user_to_tsv(const AuditReport& report);
std::vector<PerUserRow> parse_per_user_tsv(std::string_view content);

struct AuditRun {
  RecommendationSet recs;
  AuditReport report;
  std::vector<double> loss_trace;
};

// Fits one algorithm, recommends to every train user and scores the lists.
AuditRun audit_algorithm(const recsys::AlgorithmSpec& spec,
                         std::shared_ptr<const InteractionMatrix> train, std::size_t k,
                         std::span<const Ternary> groups, UnknownPolicy policy,
                         const std::optional<stats::WelchResult>& t_test,
                         std::size_t threads = 1);

// audit_algorithm for every spec, in order; errors propagate. Distinct
// algorithms run on up to `threads` workers.
std::vector<AuditReport> run_audit(std::shared_ptr<const InteractionMatrix> train,
                                   std::span<const recsys::AlgorithmSpec> algorithms,
                                   std::size_t k, std::span<const Ternary> groups,
                                   UnknownPolicy policy = UnknownPolicy::kExclude,
                                   std::size_t threads = 1);

// t-test on `groups`, or nullopt when a group is degenerate.
std::optional<stats::WelchResult> try_popularity_ttest(const InteractionMatrix& train,
                                                       std::span<const Ternary> groups);

}  // namespace biaslens::audit

#endif  // BIASLENS_AUDIT_H_
