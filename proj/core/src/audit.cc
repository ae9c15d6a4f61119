// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/audit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "biaslens/error.h"
#include "biaslens/io.h"
#include "biaslens/parallel.h"
#include "biaslens/rng.h"
#include "biaslens/text.h"
#include "json.hpp"

namespace biaslens::audit {

using nlohmann::ordered_json;

std::string_view unknown_policy_name(UnknownPolicy policy) {
  return policy == UnknownPolicy::kExclude ? "Exclude" : "CountAsNo";
}

std::optional<UnknownPolicy> parse_unknown_policy(std::string_view name) {
  std::string folded = text::fold(name);
  std::erase(folded, ' ');
  if (folded == "exclude") return UnknownPolicy::kExclude;
  if (folded == "countasno") return UnknownPolicy::kCountAsNo;
  return std::nullopt;
}

namespace {

std::size_t train_size(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kFormatError, "bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

template <class T>
T parse_uint(std::string_view s, std::string_view what) {
  T v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kFormatError, "bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> parse_optional(std::string_view s, std::string_view what) {
  if (s.empty() || s == "NA") return std::nullopt;
  return parse_double(s, what);
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? io::format_double(*v) : "NA";
}

std::vector<double> popularity(const InteractionMatrix& train) {
  const auto pop = matrix_popularity(train);
  return {pop.begin(), pop.end()};
}

}  // namespace

SplitResult split(std::span<const Interaction> interactions, double ratio, std::uint64_t seed,
                  bool stratified) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "split ratio must be in (0, 1]");
  }
  SeededRng rng(seed, "audit/split");
  std::vector<char> in_train(interactions.size(), 0);
  if (!stratified) {
    std::vector<std::size_t> order(interactions.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const std::size_t n_train = train_size(order.size(), ratio);
    for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = 1;
  } else {
    std::vector<std::vector<std::size_t>> by_user;
    std::unordered_map<std::string_view, std::size_t> slot;
    for (std::size_t k = 0; k < interactions.size(); ++k) {
      auto [it, added] = slot.try_emplace(interactions[k].user_id, by_user.size());
      if (added) by_user.emplace_back();
      by_user[it->second].push_back(k);
    }
    for (auto& rows : by_user) {
      rng.shuffle(rows);
      const std::size_t n_train = train_size(rows.size(), ratio);
      for (std::size_t k = 0; k < n_train; ++k) in_train[rows[k]] = 1;
    }
  }

  std::vector<Interaction> train;
  SplitResult out;
  out.ratio = ratio;
  out.seed = seed;
  for (std::size_t k = 0; k < interactions.size(); ++k) {
    (in_train[k] ? train : out.test).push_back(interactions[k]);
  }
  if (train.empty()) throw Error(ErrorCode::kEmptyInput, "split left the train part empty");
  out.train = std::make_shared<const InteractionMatrix>(InteractionMatrix::build(train));

  std::set<std::string> users, items;
  for (const auto& r : out.test) {
    if (!out.train->users().find(r.user_id)) users.insert(r.user_id);
    if (!out.train->items().find(r.item_id)) items.insert(r.item_id);
  }
  out.test_only_users.assign(users.begin(), users.end());
  out.test_only_items.assign(items.begin(), items.end());
  return out;
}

std::vector<Ternary> item_groups(const InteractionMatrix& train,
                                 const std::unordered_map<std::string, Ternary>& predicate) {
  std::vector<Ternary> groups(train.n_items(), Ternary::kUnknown);
  for (Index i = 0; i < train.n_items(); ++i) {
    if (auto it = predicate.find(train.item_id(i)); it != predicate.end()) groups[i] = it->second;
  }
  return groups;
}

stats::WelchResult group_popularity_ttest(const InteractionMatrix& train,
                                          std::span<const Ternary> groups) {
  if (groups.size() != train.n_items()) {
    throw Error(ErrorCode::kInvalidArgument, "one group label per train item required");
  }
  const auto pop = popularity(train);
  std::vector<double> yes, no;
  for (Index i = 0; i < pop.size(); ++i) {
    if (groups[i] == Ternary::kYes) yes.push_back(pop[i]);
    if (groups[i] == Ternary::kNo) no.push_back(pop[i]);
  }
  return stats::welch_t_test(yes, no);
}

std::optional<stats::WelchResult> try_popularity_ttest(const InteractionMatrix& train,
                                                       std::span<const Ternary> groups) {
  try {
    return group_popularity_ttest(train, groups);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateGroup) throw;
    return std::nullopt;
  }
}

RecommendationSet recommend_all(const recsys::FittedModel& model, std::size_t k,
                                std::size_t threads) {
  RecommendationSet out;
  out.algorithm = std::string(recsys::kind_name(model.kind()));
  out.seed = model.spec().seed();
  out.lists.resize(model.n_users());
  parallel_for(model.n_users(), threads, [&](std::size_t u) {
    const auto user = static_cast<Index>(u);
    out.lists[u] = {user, recsys::recommend_top_k(model, user, k, true)};
  });
  return out;
}

std::string recommendation_set_to_tsv(const RecommendationSet& recs,
                                      const InteractionMatrix& train) {
  std::string out = "algorithm\tseed\tuser_id\trank\titem_id\tscore\n";
  const std::string prefix = recs.algorithm + "\t" + std::to_string(recs.seed) + "\t";
  for (const auto& list : recs.lists) {
    for (std::size_t r = 0; r < list.items.size(); ++r) {
      out += prefix;
      out += io::tsv_cell(train.user_id(list.user));
      out += '\t';
      out += std::to_string(r + 1);
      out += '\t';
      out += io::tsv_cell(train.item_id(list.items[r].item));
      out += '\t';
      out += io::format_double(list.items[r].score);
      out += '\n';
    }
  }
  return out;
}

RecommendationSet parse_recommendation_set(std::string_view content,
                                           const InteractionMatrix& train) {
  const auto rows = io::lines(content);
  if (rows.empty() || rows[0] != "algorithm\tseed\tuser_id\trank\titem_id\tscore") {
    throw Error(ErrorCode::kMalformedHeader, "recommendation file header mismatch");
  }
  RecommendationSet out;
  std::unordered_map<Index, std::size_t> slot;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    if (rows[n].empty()) continue;
    const auto f = text::split(rows[n], '\t');
    if (f.size() != 6) {
      throw Error(ErrorCode::kFormatError, "line " + std::to_string(n + 1) + ": expected 6 fields");
    }
    if (out.algorithm.empty()) {
      out.algorithm = std::string(f[0]);
      out.seed = parse_uint<std::uint64_t>(f[1], "seed");
    } else if (f[0] != out.algorithm) {
      throw Error(ErrorCode::kFormatError, "mixed algorithms in one recommendation file");
    }
    const auto u = train.users().find(f[2]);
    if (!u) throw Error(ErrorCode::kUnknownUser, "unknown user '" + std::string(f[2]) + "'");
    const auto i = train.items().find(f[4]);
    if (!i) throw Error(ErrorCode::kUnknownItem, "unknown item '" + std::string(f[4]) + "'");
    auto [it, added] = slot.try_emplace(*u, out.lists.size());
    if (added) out.lists.push_back({*u, {}});
    auto& list = out.lists[it->second].items;
    if (parse_uint<std::size_t>(f[3], "rank") != list.size() + 1) {
      throw Error(ErrorCode::kFormatError, "line " + std::to_string(n + 1) + ": rank out of order");
    }
    list.push_back({*i, parse_double(f[5], "score")});
  }
  std::sort(out.lists.begin(), out.lists.end(),
            [](const UserRecs& a, const UserRecs& b) { return a.user < b.user; });
  return out;
}

void write_recommendation_set(const std::filesystem::path& path, const RecommendationSet& recs,
                              const InteractionMatrix& train) {
  io::write_file(path, recommendation_set_to_tsv(recs, train));
}

RecommendationSet read_recommendation_set(const std::filesystem::path& path,
                                          const InteractionMatrix& train) {
  return parse_recommendation_set(io::read_file(path), train);
}

std::vector<UserGap> user_gaps(const InteractionMatrix& train, const RecommendationSet& recs) {
  const auto pop = popularity(train);
  std::vector<UserGap> out;
  for (const auto& list : recs.lists) {
    if (list.items.empty()) continue;
    double profile = 0.0;
    for (const Cell& c : train.row(list.user)) profile += pop[c.index];
    double rec = 0.0;
    for (const auto& r : list.items) rec += pop[r.item];
    out.push_back({list.user, profile / static_cast<double>(train.row(list.user).size()),
                   rec / static_cast<double>(list.items.size())});
  }
  return out;
}

GapSummary gap_summary(const InteractionMatrix& train, const RecommendationSet& recs) {
  const auto gaps = user_gaps(train, recs);
  GapSummary s;
  for (const auto& g : gaps) {
    s.gap_profile += g.profile_gap;
    s.gap_rec += g.rec_gap;
  }
  if (gaps.empty() || s.gap_profile == 0.0) {
    throw Error(ErrorCode::kZeroProfileGap, "profile popularity is zero; check the inputs");
  }
  s.gap_profile /= static_cast<double>(gaps.size());
  s.gap_rec /= static_cast<double>(gaps.size());
  s.delta_gap_pct = 100.0 * (s.gap_rec - s.gap_profile) / s.gap_profile;
  return s;
}

double delta_gap_pct(const InteractionMatrix& train, const RecommendationSet& recs) {
  return gap_summary(train, recs).delta_gap_pct;
}

RatioSummary attribute_ratios(const InteractionMatrix& train, const RecommendationSet& recs,
                              std::span<const Ternary> groups, UnknownPolicy policy) {
  if (groups.size() != train.n_items()) {
    throw Error(ErrorCode::kInvalidArgument, "one group label per train item required");
  }
  const auto ratio = [&](auto begin, auto end, auto item_of) -> std::optional<double> {
    std::size_t yes = 0, denom = 0;
    for (auto it = begin; it != end; ++it) {
      const Ternary g = groups[item_of(*it)];
      if (g == Ternary::kYes) ++yes;
      if (g != Ternary::kUnknown || policy == UnknownPolicy::kCountAsNo) ++denom;
    }
    if (denom == 0) return std::nullopt;
    return static_cast<double>(yes) / static_cast<double>(denom);
  };

  RatioSummary s;
  double profile_sum = 0.0, rec_sum = 0.0;
  for (const auto& list : recs.lists) {
    const auto row = train.row(list.user);
    UserRatio r{list.user, ratio(row.begin(), row.end(), [](const Cell& c) { return c.index; }),
                ratio(list.items.begin(), list.items.end(),
                      [](const recsys::Recommendation& x) { return x.item; })};
    if (r.profile_ratio) {
      profile_sum += *r.profile_ratio;
      ++s.profile_users;
    }
    if (r.rec_ratio) {
      rec_sum += *r.rec_ratio;
      ++s.rec_users;
    }
    s.rows.push_back(r);
  }
  if (s.profile_users) s.avg_profile_ratio = profile_sum / static_cast<double>(s.profile_users);
  if (s.rec_users) s.avg_rec_ratio = rec_sum / static_cast<double>(s.rec_users);
  return s;
}

AuditReport compute_report(const InteractionMatrix& train, const RecommendationSet& recs,
                           std::span<const Ternary> groups, UnknownPolicy policy,
                           const std::optional<stats::WelchResult>& t_test,
                           const recsys::Hyperparams& hyperparams, std::size_t k) {
  AuditReport r;
  r.algorithm = recs.algorithm;
  r.seed = recs.seed;
  r.hyperparams = hyperparams;
  r.k = k;
  r.unknown_policy = policy;
  r.t_test = t_test;

  const GapSummary gap = gap_summary(train, recs);
  r.gap_profile = gap.gap_profile;
  r.gap_rec = gap.gap_rec;
  r.delta_gap_pct = gap.delta_gap_pct;

  const RatioSummary ratios = attribute_ratios(train, recs, groups, policy);
  r.avg_profile_ratio = ratios.avg_profile_ratio;
  r.avg_rec_ratio = ratios.avg_rec_ratio;
  r.profile_ratio_users = ratios.profile_users;
  r.rec_ratio_users = ratios.rec_users;

  const auto gaps = user_gaps(train, recs);
  std::unordered_map<Index, const UserGap*> gap_of;
  for (const auto& g : gaps) gap_of[g.user] = &g;
  for (const auto& row : ratios.rows) {
    auto it = gap_of.find(row.user);
    if (it == gap_of.end()) continue;
    r.per_user.push_back({train.user_id(row.user), row.profile_ratio, row.rec_ratio,
                          it->second->profile_gap, it->second->rec_gap});
  }
  r.users = r.per_user.size();
  return r;
}

namespace {

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> json_optional(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string report_to_json(const AuditReport& r) {
  ordered_json j;
  j["algorithm"] = r.algorithm;
  j["seed"] = r.seed;
  j["hyperparams"] = ordered_json::object();
  for (const auto& [key, value] : r.hyperparams) j["hyperparams"][key] = value;
  j["k"] = r.k;
  j["target_country"] = r.target_country;
  j["unknown_policy"] = unknown_policy_name(r.unknown_policy);
  j["users"] = r.users;
  j["gap_profile"] = r.gap_profile;
  j["gap_rec"] = r.gap_rec;
  j["delta_gap_pct"] = r.delta_gap_pct;
  j["avg_profile_ratio"] = optional_json(r.avg_profile_ratio);
  j["avg_rec_ratio"] = optional_json(r.avg_rec_ratio);
  j["profile_ratio_users"] = r.profile_ratio_users;
  j["rec_ratio_users"] = r.rec_ratio_users;
  if (r.t_test) {
    const auto& t = *r.t_test;
    j["t_test"] = {{"t", t.t},           {"df", t.df},       {"p", t.p},
                   {"mean_yes", t.mean_a}, {"mean_no", t.mean_b}, {"n_yes", t.n_a},
                   {"n_no", t.n_b}};
  } else {
    j["t_test"] = nullptr;
  }
  return j.dump(2) + "\n";
}

AuditReport report_from_json(std::string_view json) {
  try {
    const auto j = ordered_json::parse(json);
    AuditReport r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("hyperparams").items()) r.hyperparams[key] = value;
    r.k = j.at("k").get<std::size_t>();
    r.target_country = j.value("target_country", "");
    const auto policy = parse_unknown_policy(j.at("unknown_policy").get<std::string>());
    if (!policy) throw Error(ErrorCode::kFormatError, "unknown policy in report");
    r.unknown_policy = *policy;
    r.users = j.at("users").get<std::size_t>();
    r.gap_profile = j.at("gap_profile").get<double>();
    r.gap_rec = j.at("gap_rec").get<double>();
    r.delta_gap_pct = j.at("delta_gap_pct").get<double>();
    r.avg_profile_ratio = json_optional(j.at("avg_profile_ratio"));
    r.avg_rec_ratio = json_optional(j.at("avg_rec_ratio"));
    r.profile_ratio_users = j.at("profile_ratio_users").get<std::size_t>();
    r.rec_ratio_users = j.at("rec_ratio_users").get<std::size_t>();
    if (const auto& t = j.at("t_test"); !t.is_null()) {
      r.t_test = stats::WelchResult{t.at("t"),        t.at("df"),   t.at("p"),
                                    t.at("mean_yes"), t.at("mean_no"), t.at("n_yes"),
                                    t.at("n_no")};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad report JSON: ") + e.what());
  }
}

std::string per_user_to_tsv(const AuditReport& r) {
  std::string out = "user_id\tprofile_ratio\trec_ratio\tprofile_gap\trec_gap\n";
  for (const auto& row : r.per_user) {
    out += io::tsv_cell(row.user_id) + "\t" + optional_cell(row.profile_ratio) + "\t" +
           optional_cell(row.rec_ratio) + "\t" + io::format_double(row.profile_gap) + "\t" +
           io::format_double(row.rec_gap) + "\n";
  }
  return out;
}

std::vector<PerUserRow> parse_per_user_tsv(std::string_view content) {
  const auto rows = io::lines(content);
  if (rows.empty() || rows[0] != "user_id\tprofile_ratio\trec_ratio\tprofile_gap\trec_gap") {
    throw Error(ErrorCode::kMalformedHeader, "per-user file header mismatch");
  }
  std::vector<PerUserRow> out;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    if (rows[n].empty()) continue;
    const auto f = text::split(rows[n], '\t');
    if (f.size() != 5) {
      throw Error(ErrorCode::kFormatError, "line " + std::to_string(n + 1) + ": expected 5 fields");
    }
    out.push_back({std::string(f[0]), parse_optional(f[1], "profile_ratio"),
                   parse_optional(f[2], "rec_ratio"), parse_double(f[3], "profile_gap"),
                   parse_double(f[4], "rec_gap")});
  }
  return out;
}

AuditRun audit_algorithm(const recsys::AlgorithmSpec& spec,
                         std::shared_ptr<const InteractionMatrix> train, std::size_t k,
                         std::span<const Ternary> groups, UnknownPolicy policy,
                         const std::optional<stats::WelchResult>& t_test, std::size_t threads) {
  const auto model = recsys::fit(spec, train);
  AuditRun run;
  run.recs = recommend_all(model, k, threads);
  run.report = compute_report(*train, run.recs, groups, policy, t_test, spec.hyperparams(), k);
  run.loss_trace = model.loss_trace();
  return run;
}

std::vector<AuditReport> run_audit(std::shared_ptr<const InteractionMatrix> train,
                                   std::span<const recsys::AlgorithmSpec> algorithms,
                                   std::size_t k, std::span<const Ternary> groups,
                                   UnknownPolicy policy, std::size_t threads) {
  const auto t_test = try_popularity_ttest(*train, groups);
  std::vector<AuditReport> out(algorithms.size());
  parallel_for(algorithms.size(), threads, [&](std::size_t a) {
    out[a] = audit_algorithm(algorithms[a], train, k, groups, policy, t_test).report;
  });
  return out;
}

}  // namespace biaslens::audit
