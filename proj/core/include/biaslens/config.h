// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_CONFIG_H_
#define BIASLENS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biaslens/audit.h"
#include "biaslens/ingest.h"
#include "biaslens/linker.h"
#include "biaslens/recsys.h"
#include "biaslens/synthetic.h"

namespace biaslens::config {

// One typed value of the flat key-value format (a TOML subset; grammar in
// docs/config.md).
struct Value {
  enum class Type { kBool, kInt, kFloat, kString, kArray };

  Type type = Type::kString;
  bool b = false;
  std::int64_t i = 0;
  double f = 0.0;
  std::string s;
  std::vector<Value> items;  // kArray: scalars only

  static Value of(bool v);
  static Value of(std::int64_t v);
  static Value of(double v);
  static Value of(std::string v);
  static Value of(std::vector<Value> v);

  std::string to_text() const;
};

std::string_view type_name(Value::Type type);

// Entries keyed "section.key" (or "key" before the first section header).
class Document {
 public:
  // Throws Error(kFormatError) with the offending line number.
  static Document parse(std::string_view content);

  void set(const std::string& key, Value value) { entries_[key] = std::move(value); }
  const Value* find(std::string_view key) const;
  const std::map<std::string, Value, std::less<>>& entries() const { return entries_; }

  // Canonical text: entries grouped by section in sorted order.
  std::string to_text() const;

 private:
  std::map<std::string, Value, std::less<>> entries_;
};

struct RunConfig {
  // [data]
  std::string format = "bookcrossing";  // bookcrossing | generic
  std::string ratings;
  std::string items;
  std::string users;
  std::string catalog;
  ingest::Encoding encoding = ingest::Encoding::kLatin1;
  // [preprocess]
  ingest::PreprocessConfig preprocess;
  // [link]
  std::string isbn_authors;
  std::string viaf;
  std::string wikidata;
  linker::LinkConfig link;
  // [audit]
  std::vector<recsys::Kind> algorithms;  // default: all eleven
  std::map<recsys::Kind, recsys::Hyperparams> overrides;
  std::map<recsys::Kind, std::uint64_t> algorithm_seeds;  // else `seed`
  double split_ratio = 0.8;
  std::uint64_t split_seed = 42;
  bool stratified = false;
  std::uint64_t seed = 42;
  std::size_t k = 10;
  std::string target_country = "US";
  audit::UnknownPolicy unknown_policy = audit::UnknownPolicy::kExclude;
  bool strict = false;
  // [synth]
  audit::SyntheticConfig synth;
  // [output]
  std::string output_dir = "out";

  RunConfig();

  // One spec per selected algorithm, in selection order. Throws
  // Error(kInvalidHyperparam).
  std::vector<recsys::AlgorithmSpec> specs() const;
};

// Unknown keys, wrong types and invalid values throw Error(kFormatError) or
// the validation error of the owning module. Per-algorithm overrides live in
// [algorithm.<Kind>] sections; `seed` there overrides audit.seed.
RunConfig parse_run_config(std::string_view content);
RunConfig load_run_config(const std::filesystem::path& path);

// Every field with defaults resolved, including full hyperparameters for the
// selected algorithms. parse_run_config(to_text(c)) reproduces c.
Document to_document(const RunConfig& config);
std::string run_config_to_text(const RunConfig& config);

// Comma-separated kind list ("mostpop,random"); throws Error(kInvalidArgument).
std::vector<recsys::Kind> parse_kind_list(std::string_view list);

}  // namespace biaslens::config

#endif  // BIASLENS_CONFIG_H_
