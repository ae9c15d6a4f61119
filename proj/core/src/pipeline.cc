// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/pipeline.h"

#include <algorithm>
#include <map>
#include <set>

#include "biaslens/error.h"
#include "biaslens/io.h"
#include "biaslens/parallel.h"
#include "biaslens/recsys.h"
#include "biaslens/svg.h"
#include "json.hpp"

namespace biaslens::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_effective_config(const config::RunConfig& c) {
  io::write_file(fs::path(c.output_dir) / "effective_config.toml", config::run_config_to_text(c));
}

void require_path(const std::string& path, std::string_view key) {
  if (path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no input path given for " + std::string(key));
  }
}

// Catalog restricted to items that still have ratings, in catalog order.
std::vector<ItemRecord> surviving_items(const std::vector<ItemRecord>& items,
                                        const std::vector<Interaction>& interactions) {
  std::set<std::string_view> rated;
  for (const auto& r : interactions) rated.insert(r.item_id);
  std::vector<ItemRecord> out;
  for (const auto& item : items) {
    if (rated.contains(item.item_id)) out.push_back(item);
  }
  return out;
}

}  // namespace

IngestSummary run_ingest(const config::RunConfig& c) {
  c.preprocess.validate();
  require_path(c.ratings, "data.ratings");
  const fs::path out = c.output_dir;
  IngestSummary s;
  std::vector<Interaction> ratings;
  std::vector<ItemRecord> items;
  linker::AuthorTable authors;

  if (c.format == "bookcrossing") {
    require_path(c.items, "data.items");
    auto parsed = ingest::parse_ratings(c.ratings, c.encoding);
    auto parsed_items = ingest::parse_items(c.items, c.encoding);
    std::vector<ingest::Reject> user_rejects;
    if (!c.users.empty()) {
      auto users = ingest::parse_users(c.users, c.encoding);
      s.users_parsed = users.records.size();
      user_rejects = std::move(users.rejects);
    }
    s.rating_rejects = parsed.rejects.size();
    s.item_rejects = parsed_items.rejects.size();
    s.user_rejects = user_rejects.size();
    ratings = std::move(parsed.records);
    items = std::move(parsed_items.records);
    s.stages.push_back(ingest::count_stage("parsed", ratings));

    s.canonicalize = ingest::canonicalize_ids(items, ratings);
    s.stages.push_back(ingest::count_stage("canonicalized", ratings));
    auto dedup = ingest::dedup_items(std::move(items), std::move(ratings));
    s.dedup_merges = dedup.merges.size();
    s.duplicate_pairs = dedup.collapsed_pairs;
    items = std::move(dedup.items);
    ratings = std::move(dedup.interactions);
    s.stages.push_back(ingest::count_stage("deduplicated", ratings));
    auto orphans = ingest::drop_orphan_ratings(std::move(ratings), items);
    s.orphans_dropped = orphans.dropped;
    ratings = std::move(orphans.interactions);
    s.stages.push_back(ingest::count_stage("orphans_dropped", ratings));

    ingest::write_rejects(out / "rejects_ratings.tsv", parsed.rejects);
    ingest::write_rejects(out / "rejects_items.tsv", parsed_items.rejects);
    if (!c.users.empty()) ingest::write_rejects(out / "rejects_users.tsv", user_rejects);
    ingest::write_merge_report(out / "merges.tsv", dedup.merges);
  } else {
    auto parsed = ingest::parse_generic_ratings(c.ratings);
    s.rating_rejects = parsed.rejects.size();
    ratings = std::move(parsed.records);
    s.stages.push_back(ingest::count_stage("parsed", ratings));
    s.duplicate_pairs = ingest::resolve_duplicate_pairs(ratings);
    s.stages.push_back(ingest::count_stage("deduplicated", ratings));
    if (!c.catalog.empty()) {
      auto catalog = linker::read_catalog(c.catalog);
      items = std::move(catalog.items);
      authors = std::move(catalog.authors);
      auto orphans = ingest::drop_orphan_ratings(std::move(ratings), items);
      s.orphans_dropped = orphans.dropped;
      ratings = std::move(orphans.interactions);
      s.stages.push_back(ingest::count_stage("orphans_dropped", ratings));
    } else {
      std::set<std::string> seen;
      for (const auto& r : ratings) {
        if (!seen.insert(r.item_id).second) continue;
        ItemRecord item;
        item.item_id = r.item_id;
        items.push_back(std::move(item));
      }
    }
    ingest::write_rejects(out / "rejects_ratings.tsv", parsed.rejects);
  }

  auto pre = ingest::preprocess(std::move(ratings), c.preprocess);
  for (auto& stage : pre.stages) {
    if (stage.stage != "input") s.stages.push_back(std::move(stage));
  }
  ratings = std::move(pre.interactions);

  ingest::write_generic_ratings(out / "ratings.tsv", ratings);
  linker::write_catalog(out / "catalog.tsv", surviving_items(items, ratings), authors);
  io::write_file(out / "stages.tsv", ingest::stages_to_tsv(s.stages));

  ordered_json j;
  j["format"] = c.format;
  j["rating_rejects"] = s.rating_rejects;
  j["item_rejects"] = s.item_rejects;
  j["user_rejects"] = s.user_rejects;
  j["users_parsed"] = s.users_parsed;
  j["invalid_rating_isbns"] = s.canonicalize.invalid_rating_isbns;
  j["invalid_item_isbns"] = s.canonicalize.invalid_item_isbns;
  j["merged_item_rows"] = s.canonicalize.merged_item_rows;
  j["collapsed_rating_pairs"] = s.canonicalize.collapsed_rating_pairs + s.duplicate_pairs;
  j["dedup_merges"] = s.dedup_merges;
  j["orphans_dropped"] = s.orphans_dropped;
  const auto& last = s.stages.back();
  j["final"] = {{"ratings", last.ratings}, {"users", last.users}, {"items", last.items}};
  io::write_file(out / "ingest_summary.json", j.dump(2) + "\n");
  write_effective_config(c);
  return s;
}

linker::EnrichResult run_link(const config::RunConfig& c) {
  c.link.validate();
  require_path(c.catalog, "data.catalog");
  require_path(c.isbn_authors, "link.isbn_authors");
  require_path(c.viaf, "link.viaf");
  require_path(c.wikidata, "link.wikidata");
  auto catalog = linker::read_catalog(c.catalog);
  const auto books = linker::SourceAdapter::load(linker::AdapterKind::kIsbnToAuthor, c.isbn_authors);
  const auto viaf = linker::SourceAdapter::load(linker::AdapterKind::kNameToViaf, c.viaf);
  const auto wikidata =
      linker::SourceAdapter::load(linker::AdapterKind::kViafToWikidata, c.wikidata);
  auto result = linker::enrich_catalog(std::move(catalog.items), std::move(catalog.authors),
                                       {books, viaf, wikidata}, c.link);
  const fs::path out = c.output_dir;
  linker::write_catalog(out / "catalog.tsv", result.items, result.authors);
  linker::write_link_log(out / "link_log.tsv", result.log);
  io::write_file(out / "linkage_stats.json", linker::stats_to_json(result.stats));
  write_effective_config(c);
  return result;
}

void write_figures(const fs::path& dir, const std::vector<audit::AuditReport>& reports) {
  const std::string target = reports.empty() ? "" : reports.front().target_country;
  io::write_file(dir / "ratio_bars.svg", svg::ratio_bars(reports, target));
  io::write_file(dir / "delta_gap.svg", svg::delta_gap_bars(reports));
  for (const auto& r : reports) {
    io::write_file(dir / ("scatter_" + r.algorithm + ".svg"), svg::user_scatter(r, target));
  }
}

AuditOutcome run_audit(const config::RunConfig& c, std::size_t threads) {
  require_path(c.ratings, "data.ratings");
  require_path(c.catalog, "data.catalog");
  const auto specs = c.specs();
  auto parsed = ingest::parse_generic_ratings(c.ratings);
  ingest::resolve_duplicate_pairs(parsed.records);
  const auto catalog = linker::read_catalog(c.catalog);

  AuditOutcome outcome;
  outcome.split = audit::split(parsed.records, c.split_ratio, c.split_seed, c.stratified);
  const auto train = outcome.split.train;
  const auto groups =
      audit::item_groups(*train, linker::country_predicate(catalog, c.target_country));
  const auto t_test = audit::try_popularity_ttest(*train, groups);

  std::vector<std::optional<audit::AuditRun>> runs(specs.size());
  std::vector<std::string> errors(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t a) {
    try {
      runs[a] = audit::audit_algorithm(specs[a], train, c.k, groups, c.unknown_policy, t_test);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDivergenceDetected && e.code() != ErrorCode::kSingularSystem) {
        throw;
      }
      errors[a] = e.what();
    }
  });
  for (std::size_t a = 0; a < specs.size(); ++a) {
    if (runs[a]) continue;
    if (c.strict) {
      throw Error(ErrorCode::kDivergenceDetected,
                  std::string(recsys::kind_name(specs[a].kind())) + ": " + errors[a]);
    }
    outcome.failures.push_back({std::string(recsys::kind_name(specs[a].kind())), errors[a]});
  }

  const fs::path out = c.output_dir;
  std::string summary = "algorithm\tusers\tavg_profile_ratio\tavg_rec_ratio\tdelta_gap_pct\n";
  std::string traces = "algorithm\tepoch\tloss\n";
  for (auto& run : runs) {
    if (!run) continue;
    auto& r = run->report;
    r.target_country = c.target_country;
    const auto opt = [](const std::optional<double>& v) {
      return v ? io::format_double(*v) : std::string("NA");
    };
    summary += r.algorithm + "\t" + std::to_string(r.users) + "\t" + opt(r.avg_profile_ratio) +
               "\t" + opt(r.avg_rec_ratio) + "\t" + io::format_double(r.delta_gap_pct) + "\n";
    for (std::size_t e = 0; e < run->loss_trace.size(); ++e) {
      traces += r.algorithm + "\t" + std::to_string(e + 1) + "\t" +
                io::format_double(run->loss_trace[e]) + "\n";
    }
    audit::write_recommendation_set(out / "recs" / (r.algorithm + ".tsv"), run->recs, *train);
    io::write_file(out / "reports" / (r.algorithm + ".json"), audit::report_to_json(r));
    io::write_file(out / "reports" / (r.algorithm + "_per_user.tsv"), audit::per_user_to_tsv(r));
    outcome.reports.push_back(r);
  }
  write_figures(out / "figures", outcome.reports);
  io::write_file(out / "summary.tsv", summary);
  io::write_file(out / "loss_traces.tsv", traces);

  ordered_json j;
  j["ratio"] = c.split_ratio;
  j["seed"] = c.split_seed;
  j["stratified"] = c.stratified;
  j["train_ratings"] = train->n_ratings();
  j["test_ratings"] = outcome.split.test.size();
  j["train_users"] = train->n_users();
  j["train_items"] = train->n_items();
  j["test_only_users"] = outcome.split.test_only_users;
  j["test_only_items"] = outcome.split.test_only_items;
  if (t_test) {
    j["popularity_ttest"] = {{"t", t_test->t},        {"df", t_test->df},
                             {"p", t_test->p},        {"mean_yes", t_test->mean_a},
                             {"mean_no", t_test->mean_b}, {"n_yes", t_test->n_a},
                             {"n_no", t_test->n_b}};
  } else {
    j["popularity_ttest"] = nullptr;
  }
  j["failures"] = ordered_json::array();
  for (const auto& f : outcome.failures) {
    j["failures"].push_back({{"algorithm", f.algorithm}, {"message", f.message}});
  }
  io::write_file(out / "split.json", j.dump(2) + "\n");
  write_effective_config(c);
  return outcome;
}

audit::SyntheticData run_synth(const config::RunConfig& c) {
  auto data = audit::generate_synthetic(c.synth);
  const fs::path out = c.output_dir;
  ingest::write_generic_ratings(out / "ratings.tsv", data.interactions);
  linker::write_catalog(out / "catalog.tsv", data.items, data.authors);
  write_effective_config(c);
  return data;
}

std::size_t run_report(const fs::path& audit_dir) {
  const fs::path reports_dir = audit_dir / "reports";
  if (!fs::is_directory(reports_dir)) {
    throw Error(ErrorCode::kFileNotFound, "no reports directory at " + reports_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(reports_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::vector<audit::AuditReport> reports;
  for (const auto& file : files) {
    auto r = audit::report_from_json(io::read_file(file));
    r.per_user = audit::parse_per_user_tsv(
        io::read_file(reports_dir / (file.stem().string() + "_per_user.tsv")));
    reports.push_back(std::move(r));
  }
  const auto rank = [](const audit::AuditReport& r) {
    const auto kind = recsys::parse_kind(r.algorithm);
    const auto& all = recsys::all_kinds();
    return kind ? static_cast<std::size_t>(std::find(all.begin(), all.end(), *kind) - all.begin())
                : all.size();
  };
  std::sort(reports.begin(), reports.end(), [&](const auto& a, const auto& b) {
    return rank(a) != rank(b) ? rank(a) < rank(b) : a.algorithm < b.algorithm;
  });
  write_figures(audit_dir / "figures", reports);
  return reports.size() + 2;
}

}  // namespace biaslens::pipeline
