// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

// biaslens: ingest, link, synthesize and audit book-rating data for
// author-country popularity bias.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "biaslens/config.h"
#include "biaslens/error.h"
#include "biaslens/io.h"
#include "biaslens/parallel.h"
#include "biaslens/pipeline.h"

namespace {

namespace cfg = biaslens::config;
using biaslens::Error;
using biaslens::ErrorCode;

constexpr int kExitInput = 2;
constexpr int kExitStrict = 3;

enum class Kind { kString, kNumber, kFlag, kNegatedFlag, kList };

// A command-line flag that overrides one config key.
struct Binding {
  std::string key;
  Kind kind;
  std::optional<std::string> value;
  bool flag = false;
};

class Command {
 public:
  Command(CLI::App& app, std::string name, std::string about)
      : sub_(app.add_subcommand(std::move(name), std::move(about))) {
    sub_->add_option("--config", config_path_, "Config file (flat TOML subset)");
  }

  CLI::App* app() { return sub_; }

  void bind(const std::string& flag, const std::string& key, Kind kind, const std::string& help) {
    auto& b = bindings_.emplace_back(std::make_unique<Binding>(Binding{key, kind, {}}));
    if (kind == Kind::kFlag || kind == Kind::kNegatedFlag) {
      sub_->add_flag(flag, b->flag, help + " [" + key + "]");
    } else {
      sub_->add_option(flag, b->value, help + " [" + key + "]");
    }
  }

  // Config file, then flags, then full validation.
  cfg::RunConfig resolve() const {
    cfg::Document doc;
    if (config_path_) doc = cfg::Document::parse(biaslens::io::read_file(*config_path_));
    for (const auto& b : bindings_) {
      if (b->kind == Kind::kFlag || b->kind == Kind::kNegatedFlag) {
        if (b->flag) doc.set(b->key, cfg::Value::of(b->kind == Kind::kFlag));
        continue;
      }
      if (!b->value) continue;
      switch (b->kind) {
        case Kind::kString:
          doc.set(b->key, cfg::Value::of(*b->value));
          break;
        case Kind::kNumber: {
          const auto parsed = cfg::Document::parse("v = " + *b->value);
          const cfg::Value* v = parsed.find("v");
          if (v->type != cfg::Value::Type::kInt && v->type != cfg::Value::Type::kFloat) {
            throw Error(ErrorCode::kInvalidArgument, "expected a number for " + b->key);
          }
          doc.set(b->key, *v);
          break;
        }
        case Kind::kList: {
          std::vector<cfg::Value> items;
          for (auto kind : cfg::parse_kind_list(*b->value)) {
            items.push_back(cfg::Value::of(std::string(biaslens::recsys::kind_name(kind))));
          }
          doc.set(b->key, cfg::Value::of(std::move(items)));
          break;
        }
        case Kind::kFlag:
        case Kind::kNegatedFlag:
          break;
      }
    }
    return cfg::parse_run_config(doc.to_text());
  }

 private:
  CLI::App* sub_;
  std::optional<std::string> config_path_;
  std::vector<std::unique_ptr<Binding>> bindings_;
};

std::string optional_text(const std::optional<double>& v) {
  return v ? biaslens::io::format_double(*v) : "NA";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Popularity and author-country bias audit for book recommenders"};
  app.require_subcommand(1);

  Command ingest(app, "ingest", "Parse, repair and filter a ratings dump");
  ingest.bind("--format", "data.format", Kind::kString, "bookcrossing or generic");
  ingest.bind("--ratings", "data.ratings", Kind::kString, "Ratings file");
  ingest.bind("--items", "data.items", Kind::kString, "Book-Crossing items file");
  ingest.bind("--users", "data.users", Kind::kString, "Book-Crossing users file");
  ingest.bind("--catalog", "data.catalog", Kind::kString, "Catalog TSV (generic format)");
  ingest.bind("--encoding", "data.encoding", Kind::kString, "latin1 or utf8");
  ingest.bind("--keep-implicit", "preprocess.drop_implicit", Kind::kNegatedFlag, "Keep rating 0");
  ingest.bind("--max-user-ratings", "preprocess.max_user_ratings", Kind::kNumber, "Upper cut");
  ingest.bind("--min-user-ratings", "preprocess.min_user_ratings", Kind::kNumber, "Lower cut");
  ingest.bind("--min-item-ratings", "preprocess.min_item_ratings", Kind::kNumber, "Item cut");
  ingest.bind("--fixpoint", "preprocess.iterate_to_fixpoint", Kind::kFlag, "Repeat min filters");
  ingest.bind("--out", "output.dir", Kind::kString, "Output directory");

  Command link(app, "link", "Validate authors and attach VIAF / WikiData countries");
  link.bind("--catalog", "data.catalog", Kind::kString, "Catalog TSV from ingest");
  link.bind("--isbn-authors", "link.isbn_authors", Kind::kString, "isbn<TAB>author dump");
  link.bind("--viaf", "link.viaf", Kind::kString, "author_key<TAB>viaf_id dump");
  link.bind("--wikidata", "link.wikidata", Kind::kString, "viaf<TAB>qid<TAB>label<TAB>countries");
  link.bind("--name-match", "link.name_match_mode", Kind::kString,
            "ExactNormalized, TokenSet or Levenshtein");
  link.bind("--levenshtein-max", "link.levenshtein_max_distance", Kind::kNumber, "Edit budget");
  link.bind("--citizenship", "link.multi_citizenship_policy", Kind::kString, "All or First");
  link.bind("--out", "output.dir", Kind::kString, "Output directory");

  Command audit(app, "audit", "Split, train, recommend and measure bias");
  audit.bind("--ratings", "data.ratings", Kind::kString, "Generic ratings TSV");
  audit.bind("--catalog", "data.catalog", Kind::kString, "Catalog TSV with countries");
  audit.bind("--algorithms", "audit.algorithms", Kind::kList, "Comma-separated kinds");
  audit.bind("--k", "audit.k", Kind::kNumber, "List length");
  audit.bind("--seed", "audit.seed", Kind::kNumber, "Algorithm seed");
  audit.bind("--split-ratio", "audit.split_ratio", Kind::kNumber, "Train fraction");
  audit.bind("--split-seed", "audit.split_seed", Kind::kNumber, "Split seed");
  audit.bind("--stratified", "audit.stratified", Kind::kFlag, "Per-user split");
  audit.bind("--target", "audit.target_country", Kind::kString, "Country code");
  audit.bind("--unknown-policy", "audit.unknown_policy", Kind::kString, "Exclude or CountAsNo");
  audit.bind("--strict", "audit.strict", Kind::kFlag, "Exit 3 on training divergence");
  audit.bind("--out", "output.dir", Kind::kString, "Output directory");
  std::optional<std::size_t> threads;
  audit.app()->add_option("--threads", threads, "Worker threads (default BIASLENS_THREADS)");

  Command synth(app, "synth", "Generate a synthetic dataset with planted bias");
  synth.bind("--users", "synth.users", Kind::kNumber, "Number of users");
  synth.bind("--items", "synth.items", Kind::kNumber, "Number of items");
  synth.bind("--zipf", "synth.zipf", Kind::kNumber, "Zipf exponent");
  synth.bind("--target-fraction", "synth.target_fraction", Kind::kNumber, "Share of target items");
  synth.bind("--bias", "synth.bias", Kind::kNumber, "Popularity coupling in [0, 1]");
  synth.bind("--seed", "synth.seed", Kind::kNumber, "Seed");
  synth.bind("--target", "synth.target_country", Kind::kString, "Country code");
  synth.bind("--out", "output.dir", Kind::kString, "Output directory");

  auto* report = app.add_subcommand("report", "Re-render figures from an audit directory");
  std::string report_dir;
  report->add_option("--dir", report_dir, "Audit output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (ingest.app()->parsed()) {
      const auto s = biaslens::pipeline::run_ingest(ingest.resolve());
      std::cout << "stage\tratings\tusers\titems\n";
      for (const auto& st : s.stages) {
        std::cout << st.stage << '\t' << st.ratings << '\t' << st.users << '\t' << st.items << '\n';
      }
      std::cerr << "rejected lines: ratings " << s.rating_rejects << ", items " << s.item_rejects
                << ", users " << s.user_rejects << "\n";
    } else if (link.app()->parsed()) {
      const auto r = biaslens::pipeline::run_link(link.resolve());
      std::cout << biaslens::linker::stats_to_json(r.stats);
    } else if (audit.app()->parsed()) {
      const auto c = audit.resolve();
      const auto outcome =
          biaslens::pipeline::run_audit(c, threads.value_or(biaslens::default_thread_count()));
      std::cout << "algorithm\tavg_profile_ratio\tavg_rec_ratio\tdelta_gap_pct\n";
      for (const auto& r : outcome.reports) {
        std::cout << r.algorithm << '\t' << optional_text(r.avg_profile_ratio) << '\t'
                  << optional_text(r.avg_rec_ratio) << '\t'
                  << biaslens::io::format_double(r.delta_gap_pct) << '\n';
      }
      for (const auto& f : outcome.failures) {
        std::cerr << "warning: " << f.algorithm << " skipped: " << f.message << "\n";
      }
    } else if (synth.app()->parsed()) {
      const auto data = biaslens::pipeline::run_synth(synth.resolve());
      std::cout << "ratings\t" << data.interactions.size() << "\nitems\t" << data.items.size()
                << "\n";
    } else if (report->parsed()) {
      const auto n = biaslens::pipeline::run_report(report_dir);
      std::cout << "figures\t" << n << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "biaslens: " << e.what() << "\n";
    return e.code() == ErrorCode::kDivergenceDetected ? kExitStrict : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "biaslens: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
