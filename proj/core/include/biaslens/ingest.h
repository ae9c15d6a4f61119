// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_INGEST_H_
#define BIASLENS_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biaslens/types.h"

namespace biaslens::ingest {

enum class Encoding { kLatin1, kUtf8 };

struct Reject {
  std::size_t line_number;  // 1-based, counting the header line
  std::string reason;
  std::string raw_line;
};

template <class T>
struct ParseResult {
  std::vector<T> records;
  std::vector<Reject> rejects;
  // Lines after the header, excluding fully blank lines. Always equals
  // records.size() + rejects.size().
  std::size_t data_lines = 0;
};

struct UserRecord {
  std::string user_id;
  std::string location;
  std::optional<int> age;
};

// Book-Crossing style files: semicolon separated, double-quoted fields.
// Throw Error(kFileNotFound), Error(kEncodingError) or Error(kMalformedHeader).
ParseResult<Interaction> parse_ratings(const std::filesystem::path& path,
                                       Encoding encoding = Encoding::kLatin1);
ParseResult<ItemRecord> parse_items(const std::filesystem::path& path,
                                    Encoding encoding = Encoding::kLatin1);
ParseResult<UserRecord> parse_users(const std::filesystem::path& path,
                                    Encoding encoding = Encoding::kLatin1);

// In-memory variants of the above, taking whole file contents.
ParseResult<Interaction> parse_ratings_text(std::string_view content, Encoding encoding);
ParseResult<ItemRecord> parse_items_text(std::string_view content, Encoding encoding);
ParseResult<UserRecord> parse_users_text(std::string_view content, Encoding encoding);

// UTF-8 TSV with header `user_id<TAB>item_id<TAB>rating`.
ParseResult<Interaction> parse_generic_ratings(const std::filesystem::path& path);
ParseResult<Interaction> parse_generic_ratings_text(std::string_view content);
// Inverse of parse_generic_ratings_text.
std::string generic_ratings_to_tsv(const std::vector<Interaction>& interactions);
void write_generic_ratings(const std::filesystem::path& path,
                           const std::vector<Interaction>& interactions);

// Splits one Book-Crossing line into unquoted field values; nullopt when the
// quoting is unbalanced.
std::optional<std::vector<std::string>> split_bx_line(std::string_view line);

void write_rejects(const std::filesystem::path& path, const std::vector<Reject>& rejects);

// Strips hyphens and spaces and upper-cases a trailing x. Accepts 9 digits
// followed by a digit or X (ISBN-10 shape) or 13 digits (ISBN-13 shape).
// Check digits are not verified.
std::optional<std::string> canonicalize_isbn(std::string_view raw);

struct CanonicalizeReport {
  std::size_t invalid_rating_isbns = 0;
  std::size_t invalid_item_isbns = 0;
  // Item rows folded into an earlier row with the same canonical ISBN.
  std::size_t merged_item_rows = 0;
  // Rating rows removed because two raw ISBNs of one user canonicalized to
  // the same item.
  std::size_t collapsed_rating_pairs = 0;
};

// Rewrites every ISBN to canonical form and drops rows whose ISBN cannot be
// canonicalized.
CanonicalizeReport canonicalize_ids(std::vector<ItemRecord>& items,
                                    std::vector<Interaction>& interactions);

// Collapses duplicate (user, item) pairs: the highest rating wins, ties keep
// the first occurrence. Output order follows first occurrence. Returns the
// number of rows removed.
std::size_t resolve_duplicate_pairs(std::vector<Interaction>& interactions);

struct MergeEntry {
  std::string removed_isbn;
  std::string canonical_isbn;
  std::size_t removed_ratings = 0;
};

struct DedupResult {
  std::vector<ItemRecord> items;
  std::vector<Interaction> interactions;
  std::vector<MergeEntry> merges;
  std::size_t collapsed_pairs = 0;
};

// Title/author identity used for duplicate detection.
std::string dedup_key(const ItemRecord& item);

DedupResult dedup_items(std::vector<ItemRecord> items, std::vector<Interaction> interactions);

void write_merge_report(const std::filesystem::path& path, const std::vector<MergeEntry>& merges);

struct OrphanResult {
  std::vector<Interaction> interactions;
  std::size_t dropped = 0;
};

OrphanResult drop_orphan_ratings(std::vector<Interaction> interactions,
                                 const std::vector<ItemRecord>& items);

struct PreprocessConfig {
  bool drop_implicit = true;
  int max_user_ratings = 200;
  int min_user_ratings = 5;
  int min_item_ratings = 5;
  bool iterate_to_fixpoint = false;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct StageCount {
  std::string stage;
  std::size_t ratings = 0;
  std::size_t users = 0;
  std::size_t items = 0;
};

struct PreprocessResult {
  std::vector<Interaction> interactions;
  std::vector<StageCount> stages;
};

StageCount count_stage(std::string stage, const std::vector<Interaction>& interactions);

// TSV with columns stage, ratings, users, items.
std::string stages_to_tsv(const std::vector<StageCount>& stages);

// Applies, in order: implicit-rating removal, the per-user maximum, the
// per-user minimum and the per-item minimum. With iterate_to_fixpoint the
// last two filters repeat until nothing changes. Throws Error(kEmptyResult)
// when no rows survive.
PreprocessResult preprocess(std::vector<Interaction> interactions, const PreprocessConfig& config);

}  // namespace biaslens::ingest

#endif  // BIASLENS_INGEST_H_
