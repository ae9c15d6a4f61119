// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/ingest.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "biaslens/error.h"
#include "biaslens/io.h"
#include "biaslens/text.h"

namespace biaslens::ingest {

namespace {

constexpr std::string_view kUtf8Bom = "\xEF\xBB\xBF";

std::optional<long> parse_long(std::string_view s) {
  s = text::trim(s);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

int current_year() {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(system_clock::now())};
  return static_cast<int>(ymd.year());
}

std::string html_unescape(std::string s) {
  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&amp;", "&"}, {"&quot;", "\""}, {"&lt;", "<"}, {"&gt;", ">"}, {"&#39;", "'"}};
  if (s.find('&') == std::string::npos) return s;
  for (const auto& [from, to] : kEntities) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
      s.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  return s;
}

// Decodes a whole file to UTF-8 lines. Lines that are invalid UTF-8 in
// kUtf8 mode are returned as-is and flagged for rejection by the caller.
struct DecodedFile {
  std::vector<std::string> lines;
  std::vector<bool> bad_encoding;
};

DecodedFile decode(std::string_view content, Encoding encoding) {
  if (content.size() >= 2 &&
      ((content[0] == '\xFF' && content[1] == '\xFE') ||
       (content[0] == '\xFE' && content[1] == '\xFF'))) {
    throw Error(ErrorCode::kEncodingError, "UTF-16 input is not supported");
  }
  if (content.substr(0, kUtf8Bom.size()) == kUtf8Bom) content.remove_prefix(kUtf8Bom.size());
  DecodedFile out;
  for (std::string_view line : io::lines(content)) {
    if (encoding == Encoding::kLatin1) {
      out.lines.push_back(text::latin1_to_utf8(line));
      out.bad_encoding.push_back(false);
    } else {
      out.lines.emplace_back(line);
      out.bad_encoding.push_back(!text::is_valid_utf8(line));
    }
  }
  return out;
}

bool is_blank(std::string_view line) { return text::trim(line).empty(); }

// Shared driver: header check, then one callback per data line. The callback
// returns an empty string on success or the reject reason.
template <class T, class Fn>
ParseResult<T> parse_lines(std::string_view content, Encoding encoding,
                           const std::vector<std::string_view>& header, char delim,
                           bool quoted, Fn&& on_fields) {
  DecodedFile file = decode(content, encoding);
  if (file.lines.empty()) throw Error(ErrorCode::kMalformedHeader, "file has no header line");
  std::vector<std::string> head;
  if (quoted) {
    auto fields = split_bx_line(file.lines[0]);
    if (fields) head = std::move(*fields);
  } else {
    for (auto f : text::split(file.lines[0], delim)) head.emplace_back(text::trim(f));
  }
  bool ok = head.size() >= header.size();
  for (std::size_t k = 0; ok && k < header.size(); ++k) ok = head[k] == header[k];
  if (!ok) throw Error(ErrorCode::kMalformedHeader, "unexpected header: " + file.lines[0]);

  ParseResult<T> result;
  for (std::size_t n = 1; n < file.lines.size(); ++n) {
    const std::string& line = file.lines[n];
    if (is_blank(line)) continue;
    ++result.data_lines;
    if (file.bad_encoding[n]) {
      result.rejects.push_back({n + 1, "invalid utf-8", line});
      continue;
    }
    std::vector<std::string> fields;
    if (quoted) {
      auto split = split_bx_line(line);
      if (!split) {
        result.rejects.push_back({n + 1, "unbalanced quotes", line});
        continue;
      }
      fields = std::move(*split);
    } else {
      for (auto f : text::split(line, delim)) fields.emplace_back(f);
    }
    std::string reason = on_fields(fields, result.records);
    if (!reason.empty()) result.rejects.push_back({n + 1, std::move(reason), line});
  }
  return result;
}

std::string parse_rating_fields(const std::vector<std::string>& f,
                                std::vector<Interaction>& out) {
  if (f.size() < 3) return "expected 3 fields, got " + std::to_string(f.size());
  if (f.size() > 3) return "expected 3 fields, got " + std::to_string(f.size());
  std::string_view user = text::trim(f[0]);
  std::string_view item = text::trim(f[1]);
  if (user.empty()) return "empty user id";
  if (item.empty()) return "empty item id";
  auto rating = parse_long(f[2]);
  if (!rating) return "non-integer rating";
  if (*rating < 0 || *rating > kMaxRating) return "rating out of range";
  out.push_back({std::string(user), std::string(item), static_cast<int>(*rating)});
  return {};
}

}  // namespace

std::optional<std::vector<std::string>> split_bx_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    std::string value;
    if (pos < line.size() && line[pos] == '"') {
      ++pos;
      bool closed = false;
      while (pos < line.size()) {
        char c = line[pos];
        if (c == '\\' && pos + 1 < line.size() && line[pos + 1] == '"') {
          value.push_back('"');
          pos += 2;
        } else if (c == '"' && pos + 1 < line.size() && line[pos + 1] == '"') {
          value.push_back('"');
          pos += 2;
        } else if (c == '"' && (pos + 1 == line.size() || line[pos + 1] == ';')) {
          ++pos;
          closed = true;
          break;
        } else {
          value.push_back(c);
          ++pos;
        }
      }
      if (!closed) return std::nullopt;
    } else {
      std::size_t end = line.find(';', pos);
      if (end == std::string_view::npos) end = line.size();
      value.assign(line.substr(pos, end - pos));
      pos = end;
    }
    fields.push_back(html_unescape(std::move(value)));
    if (pos >= line.size()) break;
    ++pos;  // skip ';'
    if (pos == line.size()) {
      fields.emplace_back();
      break;
    }
  }
  return fields;
}

ParseResult<Interaction> parse_ratings_text(std::string_view content, Encoding encoding) {
  return parse_lines<Interaction>(content, encoding, {"User-ID", "ISBN", "Book-Rating"}, ';',
                                  true, parse_rating_fields);
}

ParseResult<ItemRecord> parse_items_text(std::string_view content, Encoding encoding) {
  const int max_year = current_year();
  return parse_lines<ItemRecord>(
      content, encoding,
      {"ISBN", "Book-Title", "Book-Author", "Year-Of-Publication", "Publisher"}, ';', true,
      [max_year](const std::vector<std::string>& f, std::vector<ItemRecord>& out) -> std::string {
        if (f.size() < 5) return "expected at least 5 fields, got " + std::to_string(f.size());
        ItemRecord item;
        item.item_id = std::string(text::trim(f[0]));
        if (item.item_id.empty()) return "empty ISBN";
        item.raw_isbns.insert(item.item_id);
        item.title = std::string(text::trim(f[1]));
        item.author_raw = std::string(text::trim(f[2]));
        if (auto y = parse_long(f[3]); y && *y >= 1000 && *y <= max_year) {
          item.year = static_cast<int>(*y);
        }
        item.publisher = std::string(text::trim(f[4]));
        out.push_back(std::move(item));
        return {};
      });
}

ParseResult<UserRecord> parse_users_text(std::string_view content, Encoding encoding) {
  return parse_lines<UserRecord>(
      content, encoding, {"User-ID", "Location", "Age"}, ';', true,
      [](const std::vector<std::string>& f, std::vector<UserRecord>& out) -> std::string {
        if (f.size() < 2 || f.size() > 3) {
          return "expected 2 or 3 fields, got " + std::to_string(f.size());
        }
        UserRecord user;
        user.user_id = std::string(text::trim(f[0]));
        if (user.user_id.empty()) return "empty user id";
        user.location = f[1];
        if (f.size() == 3) {
          if (auto age = parse_long(f[2]); age && *age > 0) user.age = static_cast<int>(*age);
        }
        out.push_back(std::move(user));
        return {};
      });
}

ParseResult<Interaction> parse_generic_ratings_text(std::string_view content) {
  return parse_lines<Interaction>(content, Encoding::kUtf8, {"user_id", "item_id", "rating"}, '\t',
                                  false, parse_rating_fields);
}

ParseResult<Interaction> parse_ratings(const std::filesystem::path& path, Encoding encoding) {
  return parse_ratings_text(io::read_file(path), encoding);
}

ParseResult<ItemRecord> parse_items(const std::filesystem::path& path, Encoding encoding) {
  return parse_items_text(io::read_file(path), encoding);
}

ParseResult<UserRecord> parse_users(const std::filesystem::path& path, Encoding encoding) {
  return parse_users_text(io::read_file(path), encoding);
}

ParseResult<Interaction> parse_generic_ratings(const std::filesystem::path& path) {
  return parse_generic_ratings_text(io::read_file(path));
}

void write_rejects(const std::filesystem::path& path, const std::vector<Reject>& rejects) {
  std::ostringstream out;
  out << "line_number\treason\traw_line\n";
  for (const Reject& r : rejects) {
    out << r.line_number << '\t' << io::tsv_cell(r.reason) << '\t' << io::tsv_cell(r.raw_line)
        << '\n';
  }
  io::write_file(path, out.str());
}

std::string generic_ratings_to_tsv(const std::vector<Interaction>& interactions) {
  std::string out = "user_id\titem_id\trating\n";
  for (const Interaction& r : interactions) {
    out += io::tsv_cell(r.user_id) + "\t" + io::tsv_cell(r.item_id) + "\t" +
           std::to_string(r.rating) + "\n";
  }
  return out;
}

void write_generic_ratings(const std::filesystem::path& path,
                           const std::vector<Interaction>& interactions) {
  io::write_file(path, generic_ratings_to_tsv(interactions));
}

std::string stages_to_tsv(const std::vector<StageCount>& stages) {
  std::string out = "stage\tratings\tusers\titems\n";
  for (const StageCount& s : stages) {
    out += s.stage + "\t" + std::to_string(s.ratings) + "\t" + std::to_string(s.users) + "\t" +
           std::to_string(s.items) + "\n";
  }
  return out;
}

std::optional<std::string> canonicalize_isbn(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) {
    if (c == '-' || c == ' ' || c == '\t') continue;
    s.push_back(c);
  }
  if (!s.empty() && s.back() == 'x') s.back() = 'X';
  auto all_digits = [](std::string_view v) {
    return std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (s.size() == 10) {
    if (!all_digits(std::string_view(s).substr(0, 9))) return std::nullopt;
    if (!(s[9] == 'X' || (s[9] >= '0' && s[9] <= '9'))) return std::nullopt;
    return s;
  }
  if (s.size() == 13 && all_digits(s)) return s;
  return std::nullopt;
}

std::size_t resolve_duplicate_pairs(std::vector<Interaction>& interactions) {
  std::unordered_map<std::string, std::size_t> first;  // key -> output slot
  first.reserve(interactions.size());
  std::vector<Interaction> out;
  out.reserve(interactions.size());
  for (Interaction& x : interactions) {
    std::string key = x.user_id;
    key.push_back('\x1f');
    key += x.item_id;
    auto [it, inserted] = first.try_emplace(std::move(key), out.size());
    if (inserted) {
      out.push_back(std::move(x));
    } else if (x.rating > out[it->second].rating) {
      out[it->second].rating = x.rating;
    }
  }
  std::size_t removed = interactions.size() - out.size();
  interactions = std::move(out);
  return removed;
}

CanonicalizeReport canonicalize_ids(std::vector<ItemRecord>& items,
                                    std::vector<Interaction>& interactions) {
  CanonicalizeReport report;
  std::vector<ItemRecord> kept;
  kept.reserve(items.size());
  std::unordered_map<std::string, std::size_t> slot;
  for (ItemRecord& item : items) {
    auto canon = canonicalize_isbn(item.item_id);
    if (!canon) {
      ++report.invalid_item_isbns;
      continue;
    }
    std::set<std::string> isbns;
    for (const auto& raw : item.raw_isbns) {
      if (auto c = canonicalize_isbn(raw)) isbns.insert(*c);
    }
    isbns.insert(*canon);
    auto [it, inserted] = slot.try_emplace(*canon, kept.size());
    if (inserted) {
      item.item_id = *canon;
      item.raw_isbns = std::move(isbns);
      kept.push_back(std::move(item));
    } else {
      ++report.merged_item_rows;
      kept[it->second].raw_isbns.insert(isbns.begin(), isbns.end());
    }
  }
  items = std::move(kept);

  std::vector<Interaction> rows;
  rows.reserve(interactions.size());
  for (Interaction& x : interactions) {
    auto canon = canonicalize_isbn(x.item_id);
    if (!canon) {
      ++report.invalid_rating_isbns;
      continue;
    }
    x.item_id = std::move(*canon);
    rows.push_back(std::move(x));
  }
  interactions = std::move(rows);
  report.collapsed_rating_pairs = resolve_duplicate_pairs(interactions);
  return report;
}

std::string dedup_key(const ItemRecord& item) {
  std::string title = text::fold(item.title);
  if (title.empty()) return {};
  return title + '\x1f' + text::fold(item.author_raw);
}

DedupResult dedup_items(std::vector<ItemRecord> items, std::vector<Interaction> interactions) {
  std::unordered_map<std::string, std::size_t> rating_count;
  for (const Interaction& x : interactions) ++rating_count[x.item_id];

  // Group by normalized (title, author); groups keep catalog order.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < items.size(); ++k) {
    std::string key = dedup_key(items[k]);
    if (!key.empty()) groups[key].push_back(k);
  }

  DedupResult result;
  std::unordered_map<std::string, std::string> remap;  // removed isbn -> canonical
  std::vector<bool> removed(items.size(), false);
  std::vector<std::size_t> group_order;
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    auto count_of = [&](std::size_t k) {
      auto it = rating_count.find(items[k].item_id);
      return it == rating_count.end() ? std::size_t{0} : it->second;
    };
    std::size_t best = members[0];
    for (std::size_t k : members) {
      const std::size_t ck = count_of(k), cb = count_of(best);
      if (ck > cb || (ck == cb && items[k].item_id < items[best].item_id)) best = k;
    }
    for (std::size_t k : members) {
      if (k == best) continue;
      removed[k] = true;
      for (const auto& isbn : items[k].raw_isbns) remap[isbn] = items[best].item_id;
      items[best].raw_isbns.insert(items[k].raw_isbns.begin(), items[k].raw_isbns.end());
      result.merges.push_back({items[k].item_id, items[best].item_id, count_of(k)});
    }
  }
  std::sort(result.merges.begin(), result.merges.end(), [](const MergeEntry& a, const MergeEntry& b) {
    return a.removed_isbn < b.removed_isbn;
  });

  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!removed[k]) result.items.push_back(std::move(items[k]));
  }
  for (Interaction& x : interactions) {
    if (auto it = remap.find(x.item_id); it != remap.end()) x.item_id = it->second;
  }
  result.collapsed_pairs = resolve_duplicate_pairs(interactions);
  result.interactions = std::move(interactions);
  return result;
}

void write_merge_report(const std::filesystem::path& path, const std::vector<MergeEntry>& merges) {
  std::ostringstream out;
  out << "removed_isbn\tcanonical_isbn\tremoved_ratings\n";
  for (const auto& m : merges) {
    out << m.removed_isbn << '\t' << m.canonical_isbn << '\t' << m.removed_ratings << '\n';
  }
  io::write_file(path, out.str());
}

OrphanResult drop_orphan_ratings(std::vector<Interaction> interactions,
                                 const std::vector<ItemRecord>& items) {
  std::unordered_set<std::string> catalog;
  catalog.reserve(items.size() * 2);
  for (const auto& item : items) catalog.insert(item.item_id);
  OrphanResult result;
  result.interactions.reserve(interactions.size());
  for (Interaction& x : interactions) {
    if (catalog.count(x.item_id)) {
      result.interactions.push_back(std::move(x));
    } else {
      ++result.dropped;
    }
  }
  return result;
}

void PreprocessConfig::validate() const {
  if (max_user_ratings < 0 || min_user_ratings < 0 || min_item_ratings < 0) {
    throw Error(ErrorCode::kInvalidArgument, "preprocess thresholds must be >= 0");
  }
  if (min_user_ratings > max_user_ratings) {
    throw Error(ErrorCode::kInvalidArgument, "min_user_ratings exceeds max_user_ratings");
  }
}

StageCount count_stage(std::string stage, const std::vector<Interaction>& interactions) {
  std::unordered_set<std::string_view> users, items;
  for (const auto& x : interactions) {
    users.insert(x.user_id);
    items.insert(x.item_id);
  }
  return {std::move(stage), interactions.size(), users.size(), items.size()};
}

namespace {

template <class KeyFn, class KeepFn>
std::vector<Interaction> filter_by_count(std::vector<Interaction> rows, KeyFn key, KeepFn keep) {
  std::vector<bool> keep_row(rows.size());
  {
    std::unordered_map<std::string_view, std::size_t> counts;
    for (const auto& x : rows) ++counts[key(x)];
    for (std::size_t k = 0; k < rows.size(); ++k) keep_row[k] = keep(counts.at(key(rows[k])));
  }
  std::vector<Interaction> out;
  out.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (keep_row[k]) out.push_back(std::move(rows[k]));
  }
  return out;
}

}  // namespace

PreprocessResult preprocess(std::vector<Interaction> rows, const PreprocessConfig& config) {
  config.validate();
  PreprocessResult result;
  result.stages.push_back(count_stage("input", rows));

  auto by_user = [](const Interaction& x) -> std::string_view { return x.user_id; };
  auto by_item = [](const Interaction& x) -> std::string_view { return x.item_id; };
  const auto max_user = static_cast<std::size_t>(config.max_user_ratings);
  const auto min_user = static_cast<std::size_t>(config.min_user_ratings);
  const auto min_item = static_cast<std::size_t>(config.min_item_ratings);

  if (config.drop_implicit) {
    std::erase_if(rows, [](const Interaction& x) { return x.rating == 0; });
  }
  result.stages.push_back(count_stage("drop_implicit", rows));

  rows = filter_by_count(std::move(rows), by_user, [&](std::size_t n) { return n <= max_user; });
  result.stages.push_back(count_stage("max_user_ratings", rows));

  int round = 0;
  for (;;) {
    const std::size_t before = rows.size();
    const std::string suffix = round == 0 ? "" : "#" + std::to_string(round + 1);
    rows = filter_by_count(std::move(rows), by_user, [&](std::size_t n) { return n >= min_user; });
    result.stages.push_back(count_stage("min_user_ratings" + suffix, rows));
    rows = filter_by_count(std::move(rows), by_item, [&](std::size_t n) { return n >= min_item; });
    result.stages.push_back(count_stage("min_item_ratings" + suffix, rows));
    ++round;
    if (!config.iterate_to_fixpoint || rows.size() == before) break;
  }

  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyResult, "every rating was removed by preprocessing");
  }
  result.interactions = std::move(rows);
  return result;
}

}  // namespace biaslens::ingest
