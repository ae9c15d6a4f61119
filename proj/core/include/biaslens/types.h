// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_TYPES_H_
#define BIASLENS_TYPES_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace biaslens {

// One (user, item, rating) event. Rating 0 is an implicit interaction,
// 1..10 an explicit score.
struct Interaction {
  std::string user_id;
  std::string item_id;
  int rating = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

inline constexpr int kMaxRating = 10;

enum class LinkStatus : std::uint8_t {
  kUnlinked = 0,
  kNameValidated = 1,
  kViafLinked = 2,
  kWikidataLinked = 3,
};

std::string_view link_status_name(LinkStatus status);
std::optional<LinkStatus> parse_link_status(std::string_view name);

struct ItemRecord {
  std::string item_id;
  std::set<std::string> raw_isbns;
  std::string title;
  std::string author_raw;
  std::optional<std::string> author_validated;
  // True when author_validated came from (or was confirmed by) the
  // ISBN-to-author source rather than copied from author_raw.
  bool author_confirmed = false;
  std::string publisher;
  std::optional<int> year;
  std::optional<std::string> author_key;
};

struct AuthorRecord {
  std::string author_key;
  std::string display_name;
  std::optional<std::string> viaf_id;
  std::optional<std::string> wikidata_id;
  std::set<std::string> countries;
  LinkStatus link_status = LinkStatus::kUnlinked;
};

enum class Ternary : std::uint8_t { kNo = 0, kYes = 1, kUnknown = 2 };

std::string_view ternary_name(Ternary t);

}  // namespace biaslens

#endif  // BIASLENS_TYPES_H_
