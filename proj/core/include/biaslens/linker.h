// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_LINKER_H_
#define BIASLENS_LINKER_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "biaslens/types.h"

namespace biaslens::linker {

std::string normalize_author_name(std::string_view raw);

enum class AdapterKind { kIsbnToAuthor, kNameToViaf, kViafToWikidata };
std::string_view adapter_kind_name(AdapterKind kind);

struct WikidataEntry {
  std::string qid;
  std::string label;
  std::vector<std::string> countries;  // in dump order
};

// Read-only lookup table loaded from a local dump file. Keys are stored in
// canonical form: canonical ISBN, normalized author key, or digits-only
// VIAF id.
class SourceAdapter {
 public:
  explicit SourceAdapter(AdapterKind kind) : kind_(kind) {}

  // Throws Error(kFileNotFound) / Error(kFormatError).
  static SourceAdapter load(AdapterKind kind, const std::filesystem::path& path);
  static SourceAdapter from_text(AdapterKind kind, std::string_view content);

  AdapterKind kind() const { return kind_; }
  std::size_t size() const;

  void add_isbn_author(std::string_view isbn, std::string_view author_name);
  void add_name_viaf(std::string_view author_name, std::string_view viaf_id);
  void add_viaf_wikidata(std::string_view viaf_id, WikidataEntry entry);

  const std::string* author_for_isbn(std::string_view isbn) const;
  // Candidates sorted by ascending numeric id.
  std::vector<std::string> viaf_candidates(std::string_view author_key) const;
  const WikidataEntry* wikidata_for(std::string_view viaf_id) const;

 private:
  AdapterKind kind_;
  std::unordered_map<std::string, std::string> isbn_author_;
  std::unordered_map<std::string, std::vector<std::string>> name_viaf_;
  std::unordered_map<std::string, WikidataEntry> viaf_wikidata_;
};

enum class NameMatchMode { kExactNormalized, kTokenSet, kLevenshtein };
enum class CitizenshipPolicy { kAll, kFirst };

struct LinkConfig {
  NameMatchMode name_match_mode = NameMatchMode::kTokenSet;
  int levenshtein_max_distance = 2;
  CitizenshipPolicy multi_citizenship_policy = CitizenshipPolicy::kAll;

  void validate() const;
};

std::string_view name_match_mode_name(NameMatchMode mode);
std::string_view citizenship_policy_name(CitizenshipPolicy policy);

// Compares two raw names after normalization under the configured mode.
bool names_match(std::string_view a, std::string_view b, const LinkConfig& config);

struct LinkEvent {
  std::string author_key;
  std::string event;  // corrected | ambiguous | rejected | miss
  std::string detail;

  friend bool operator==(const LinkEvent&, const LinkEvent&) = default;
  friend auto operator<=>(const LinkEvent&, const LinkEvent&) = default;
};

using LinkLog = std::vector<LinkEvent>;

ItemRecord validate_author(ItemRecord item, const SourceAdapter& books, const LinkConfig& config,
                           LinkLog* log = nullptr);

AuthorRecord link_to_viaf(AuthorRecord author, const SourceAdapter& viaf, const LinkConfig& config,
                          LinkLog* log = nullptr);

AuthorRecord link_to_wikidata(AuthorRecord author, const SourceAdapter& wikidata,
                              const LinkConfig& config, LinkLog* log = nullptr);

struct Adapters {
  const SourceAdapter& books;
  const SourceAdapter& viaf;
  const SourceAdapter& wikidata;
};

struct LinkageStats {
  std::size_t items = 0;
  std::size_t items_confirmed = 0;
  std::size_t corrections = 0;
  std::size_t authors = 0;
  std::array<std::size_t, 4> by_status{};  // indexed by LinkStatus
  std::size_t authors_with_countries = 0;
  double coverage = 0.0;

  friend bool operator==(const LinkageStats&, const LinkageStats&) = default;
};

using AuthorTable = std::map<std::string, AuthorRecord>;

struct EnrichResult {
  std::vector<ItemRecord> items;
  AuthorTable authors;
  LinkageStats stats;
  LinkLog log;  // sorted
};

// Runs name validation, VIAF linking and WikiData linking for every distinct
// author key. `authors` may carry records from an earlier run.
EnrichResult enrich_catalog(std::vector<ItemRecord> items, AuthorTable authors,
                            const Adapters& adapters, const LinkConfig& config);

LinkageStats compute_linkage_stats(const std::vector<ItemRecord>& items,
                                   const AuthorTable& authors, const LinkLog& log);

Ternary is_target_country(const ItemRecord& item, const AuthorTable& authors,
                          std::string_view target);

std::string stats_to_json(const LinkageStats& stats);
void write_link_log(const std::filesystem::path& path, const LinkLog& log);

// Catalog TSV shared by ingest, link, synth and audit:
// item_id, raw_isbns, title, author_raw, author_validated, year, publisher,
// author_key, link_status, viaf_id, wikidata_id, countries.
struct Catalog {
  std::vector<ItemRecord> items;
  AuthorTable authors;
};

std::string catalog_to_tsv(const std::vector<ItemRecord>& items, const AuthorTable& authors);
void write_catalog(const std::filesystem::path& path, const std::vector<ItemRecord>& items,
                   const AuthorTable& authors);
Catalog parse_catalog_text(std::string_view content);
Catalog read_catalog(const std::filesystem::path& path);

// item_id -> ternary target-country membership.
std::unordered_map<std::string, Ternary> country_predicate(const Catalog& catalog,
                                                           std::string_view target);

}  // namespace biaslens::linker

#endif  // BIASLENS_LINKER_H_
