// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/linker.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "json.hpp"

#include "biaslens/error.h"
#include "biaslens/ingest.h"
#include "biaslens/io.h"
#include "biaslens/text.h"

namespace biaslens::linker {

std::string normalize_author_name(std::string_view raw) {
  std::size_t comma = raw.find(',');
  if (comma != std::string_view::npos) {
    std::string last = text::fold(raw.substr(0, comma));
    std::string rest = text::fold(raw.substr(comma + 1));
    if (!last.empty() && !rest.empty()) return rest + " " + last;
  }
  return text::fold(raw);
}

std::string_view adapter_kind_name(AdapterKind kind) {
  switch (kind) {
    case AdapterKind::kIsbnToAuthor: return "IsbnToAuthor";
    case AdapterKind::kNameToViaf: return "NameToViaf";
    case AdapterKind::kViafToWikidata: return "ViafToWikidata";
  }
  return "?";
}

std::string_view name_match_mode_name(NameMatchMode mode) {
  switch (mode) {
    case NameMatchMode::kExactNormalized: return "exact";
    case NameMatchMode::kTokenSet: return "tokenset";
    case NameMatchMode::kLevenshtein: return "levenshtein";
  }
  return "?";
}

std::string_view citizenship_policy_name(CitizenshipPolicy policy) {
  return policy == CitizenshipPolicy::kAll ? "all" : "first";
}

namespace {

std::string digits_only(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c >= '0' && c <= '9') out.push_back(c);
  }
  return out;
}

// Numeric order on digit strings of arbitrary length.
bool numeric_less(const std::string& a, const std::string& b) {
  auto strip = [](const std::string& s) {
    std::size_t k = s.find_first_not_of('0');
    return k == std::string::npos ? std::string_view{} : std::string_view(s).substr(k);
  };
  auto sa = strip(a), sb = strip(b);
  if (sa.size() != sb.size()) return sa.size() < sb.size();
  if (sa != sb) return sa < sb;
  return a < b;
}

void require_kind(const SourceAdapter& adapter, AdapterKind expected) {
  if (adapter.kind() != expected) {
    throw Error(ErrorCode::kWrongAdapterKind,
                "expected " + std::string(adapter_kind_name(expected)) + " adapter, got " +
                    std::string(adapter_kind_name(adapter.kind())));
  }
}

bool is_header(AdapterKind kind, std::string_view first_field) {
  first_field = text::trim(first_field);
  switch (kind) {
    case AdapterKind::kIsbnToAuthor: return first_field == "isbn";
    case AdapterKind::kNameToViaf: return first_field == "author_key";
    case AdapterKind::kViafToWikidata: return first_field == "viaf_id";
  }
  return false;
}

std::string join(const auto& values, char sep) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out.push_back(sep);
    out += v;
  }
  return out;
}

}  // namespace

std::size_t SourceAdapter::size() const {
  switch (kind_) {
    case AdapterKind::kIsbnToAuthor: return isbn_author_.size();
    case AdapterKind::kNameToViaf: return name_viaf_.size();
    case AdapterKind::kViafToWikidata: return viaf_wikidata_.size();
  }
  return 0;
}

void SourceAdapter::add_isbn_author(std::string_view isbn, std::string_view author_name) {
  require_kind(*this, AdapterKind::kIsbnToAuthor);
  auto canon = ingest::canonicalize_isbn(isbn);
  if (!canon) return;
  isbn_author_.try_emplace(*canon, std::string(text::trim(author_name)));
}

void SourceAdapter::add_name_viaf(std::string_view author_name, std::string_view viaf_id) {
  require_kind(*this, AdapterKind::kNameToViaf);
  std::string key = normalize_author_name(author_name);
  std::string id = digits_only(viaf_id);
  if (key.empty() || id.empty()) return;
  auto& ids = name_viaf_[key];
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    ids.push_back(id);
    std::sort(ids.begin(), ids.end(), numeric_less);
  }
}

void SourceAdapter::add_viaf_wikidata(std::string_view viaf_id, WikidataEntry entry) {
  require_kind(*this, AdapterKind::kViafToWikidata);
  std::string id = digits_only(viaf_id);
  if (id.empty()) return;
  auto it = viaf_wikidata_.find(id);
  if (it == viaf_wikidata_.end()) {
    viaf_wikidata_.emplace(std::move(id), std::move(entry));
  } else if (numeric_less(digits_only(entry.qid), digits_only(it->second.qid))) {
    // several entities claim one VIAF id: keep the lowest Q-number
    it->second = std::move(entry);
  }
}

const std::string* SourceAdapter::author_for_isbn(std::string_view isbn) const {
  auto canon = ingest::canonicalize_isbn(isbn);
  if (!canon) return nullptr;
  auto it = isbn_author_.find(*canon);
  return it == isbn_author_.end() ? nullptr : &it->second;
}

std::vector<std::string> SourceAdapter::viaf_candidates(std::string_view author_key) const {
  auto it = name_viaf_.find(normalize_author_name(author_key));
  return it == name_viaf_.end() ? std::vector<std::string>{} : it->second;
}

const WikidataEntry* SourceAdapter::wikidata_for(std::string_view viaf_id) const {
  auto it = viaf_wikidata_.find(digits_only(viaf_id));
  return it == viaf_wikidata_.end() ? nullptr : &it->second;
}

SourceAdapter SourceAdapter::from_text(AdapterKind kind, std::string_view content) {
  SourceAdapter adapter(kind);
  auto rows = io::lines(content);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    std::string_view line = rows[n];
    if (text::trim(line).empty()) continue;
    auto f = text::split(line, '\t');
    if (n == 0 && is_header(kind, f[0])) continue;
    const std::size_t want = kind == AdapterKind::kViafToWikidata ? 4 : 2;
    if (f.size() < want) {
      throw Error(ErrorCode::kFormatError, std::string(adapter_kind_name(kind)) + " dump line " +
                                               std::to_string(n + 1) + ": expected " +
                                               std::to_string(want) + " columns");
    }
    switch (kind) {
      case AdapterKind::kIsbnToAuthor:
        adapter.add_isbn_author(f[0], f[1]);
        break;
      case AdapterKind::kNameToViaf:
        adapter.add_name_viaf(f[0], f[1]);
        break;
      case AdapterKind::kViafToWikidata: {
        WikidataEntry entry{std::string(text::trim(f[1])), std::string(text::trim(f[2])), {}};
        for (auto code : text::split(f[3], ',')) {
          std::string c(text::trim(code));
          std::transform(c.begin(), c.end(), c.begin(),
                         [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
          if (!c.empty() &&
              std::find(entry.countries.begin(), entry.countries.end(), c) == entry.countries.end()) {
            entry.countries.push_back(std::move(c));
          }
        }
        adapter.add_viaf_wikidata(f[0], std::move(entry));
        break;
      }
    }
  }
  return adapter;
}

SourceAdapter SourceAdapter::load(AdapterKind kind, const std::filesystem::path& path) {
  return from_text(kind, io::read_file(path));
}

void LinkConfig::validate() const {
  if (levenshtein_max_distance < 0) {
    throw Error(ErrorCode::kInvalidArgument, "levenshtein_max_distance must be >= 0");
  }
}

bool names_match(std::string_view a, std::string_view b, const LinkConfig& config) {
  const std::string na = normalize_author_name(a);
  const std::string nb = normalize_author_name(b);
  if (na.empty() || nb.empty()) return false;
  switch (config.name_match_mode) {
    case NameMatchMode::kExactNormalized:
      return na == nb;
    case NameMatchMode::kTokenSet: {
      auto wa = text::split_words(na), wb = text::split_words(nb);
      return std::set<std::string>(wa.begin(), wa.end()) ==
             std::set<std::string>(wb.begin(), wb.end());
    }
    case NameMatchMode::kLevenshtein:
      return text::levenshtein(na, nb) <= static_cast<std::size_t>(config.levenshtein_max_distance);
  }
  return false;
}

ItemRecord validate_author(ItemRecord item, const SourceAdapter& books, const LinkConfig& config,
                           LinkLog* log) {
  require_kind(books, AdapterKind::kIsbnToAuthor);
  const std::string* source = books.author_for_isbn(item.item_id);
  for (auto it = item.raw_isbns.begin(); source == nullptr && it != item.raw_isbns.end(); ++it) {
    source = books.author_for_isbn(*it);
  }
  if (source != nullptr && !normalize_author_name(*source).empty()) {
    if (!names_match(*source, item.author_raw, config) && log != nullptr) {
      log->push_back({normalize_author_name(*source), "corrected",
                      "isbn=" + item.item_id + " raw=" + item.author_raw + " source=" + *source});
    }
    item.author_validated = *source;
    item.author_confirmed = true;
  } else {
    item.author_confirmed = false;
    if (normalize_author_name(item.author_raw).empty()) {
      item.author_validated.reset();
    } else {
      item.author_validated = item.author_raw;
    }
  }
  item.author_key.reset();
  if (item.author_validated) item.author_key = normalize_author_name(*item.author_validated);
  return item;
}

AuthorRecord link_to_viaf(AuthorRecord author, const SourceAdapter& viaf, const LinkConfig&,
                          LinkLog* log) {
  require_kind(viaf, AdapterKind::kNameToViaf);
  const std::string& key = author.author_key;
  std::vector<std::string> candidates = viaf.viaf_candidates(key);
  if (candidates.empty()) {
    if (log != nullptr) log->push_back({key, "miss", "viaf: no candidate"});
    return author;
  }
  if (candidates.size() > 1 && log != nullptr) {
    log->push_back({key, "ambiguous", "viaf candidates=" + join(candidates, ',') +
                                          " chosen=" + candidates.front()});
  }
  author.viaf_id = candidates.front();
  if (author.link_status < LinkStatus::kViafLinked) author.link_status = LinkStatus::kViafLinked;
  return author;
}

AuthorRecord link_to_wikidata(AuthorRecord author, const SourceAdapter& wikidata,
                              const LinkConfig& config, LinkLog* log) {
  require_kind(wikidata, AdapterKind::kViafToWikidata);
  if (!author.viaf_id) {
    throw Error(ErrorCode::kMissingViafId, "author '" + author.author_key + "' has no VIAF id");
  }
  const WikidataEntry* entry = wikidata.wikidata_for(*author.viaf_id);
  if (entry == nullptr) {
    if (log != nullptr) log->push_back({author.author_key, "miss", "wikidata: viaf=" + *author.viaf_id});
    return author;
  }
  const std::string& name = author.display_name.empty() ? author.author_key : author.display_name;
  if (!names_match(entry->label, name, config)) {
    if (log != nullptr) {
      log->push_back({author.author_key, "rejected",
                      "wikidata " + entry->qid + " label=" + entry->label + " name=" + name});
    }
    return author;
  }
  author.wikidata_id = entry->qid;
  author.countries.clear();
  if (config.multi_citizenship_policy == CitizenshipPolicy::kFirst) {
    if (!entry->countries.empty()) author.countries.insert(entry->countries.front());
  } else {
    author.countries.insert(entry->countries.begin(), entry->countries.end());
  }
  author.link_status = LinkStatus::kWikidataLinked;
  return author;
}

LinkageStats compute_linkage_stats(const std::vector<ItemRecord>& items, const AuthorTable& authors,
                                   const LinkLog& log) {
  LinkageStats stats;
  stats.items = items.size();
  for (const auto& item : items) stats.items_confirmed += item.author_confirmed ? 1 : 0;
  for (const auto& e : log) stats.corrections += e.event == "corrected" ? 1 : 0;
  stats.authors = authors.size();
  for (const auto& [key, a] : authors) {
    ++stats.by_status[static_cast<std::size_t>(a.link_status)];
    if (!a.countries.empty()) ++stats.authors_with_countries;
  }
  stats.coverage = stats.authors == 0 ? 0.0
                                      : static_cast<double>(stats.authors_with_countries) /
                                            static_cast<double>(stats.authors);
  return stats;
}

EnrichResult enrich_catalog(std::vector<ItemRecord> items, AuthorTable authors,
                            const Adapters& adapters, const LinkConfig& config) {
  config.validate();
  require_kind(adapters.books, AdapterKind::kIsbnToAuthor);
  require_kind(adapters.viaf, AdapterKind::kNameToViaf);
  require_kind(adapters.wikidata, AdapterKind::kViafToWikidata);

  EnrichResult result;
  for (ItemRecord& item : items) {
    item = validate_author(std::move(item), adapters.books, config, &result.log);
    if (!item.author_key) continue;
    auto [it, inserted] = authors.try_emplace(*item.author_key);
    AuthorRecord& author = it->second;
    if (inserted) {
      author.author_key = *item.author_key;
      author.display_name = *item.author_validated;
    }
    if (item.author_confirmed && author.link_status < LinkStatus::kNameValidated) {
      author.link_status = LinkStatus::kNameValidated;
    }
  }
  for (auto& [key, author] : authors) {
    if (!author.viaf_id) author = link_to_viaf(std::move(author), adapters.viaf, config, &result.log);
    if (author.viaf_id && !author.wikidata_id) {
      author = link_to_wikidata(std::move(author), adapters.wikidata, config, &result.log);
    }
  }
  std::sort(result.log.begin(), result.log.end());
  result.stats = compute_linkage_stats(items, authors, result.log);
  result.items = std::move(items);
  result.authors = std::move(authors);
  return result;
}

Ternary is_target_country(const ItemRecord& item, const AuthorTable& authors,
                          std::string_view target) {
  if (!item.author_key) return Ternary::kUnknown;
  auto it = authors.find(*item.author_key);
  if (it == authors.end() || it->second.countries.empty()) return Ternary::kUnknown;
  return it->second.countries.count(std::string(target)) ? Ternary::kYes : Ternary::kNo;
}

std::string stats_to_json(const LinkageStats& s) {
  nlohmann::ordered_json j;
  j["items"] = s.items;
  j["items_confirmed"] = s.items_confirmed;
  j["corrections"] = s.corrections;
  j["authors"] = s.authors;
  j["by_status"] = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < s.by_status.size(); ++k) {
    j["by_status"][std::string(link_status_name(static_cast<LinkStatus>(k)))] = s.by_status[k];
  }
  j["authors_with_countries"] = s.authors_with_countries;
  j["coverage"] = s.coverage;
  return j.dump(2) + "\n";
}

void write_link_log(const std::filesystem::path& path, const LinkLog& log) {
  std::ostringstream out;
  out << "author_key\tevent\tdetail\n";
  for (const auto& e : log) {
    out << io::tsv_cell(e.author_key) << '\t' << e.event << '\t' << io::tsv_cell(e.detail) << '\n';
  }
  io::write_file(path, out.str());
}

namespace {

constexpr std::string_view kCatalogHeader =
    "item_id\traw_isbns\ttitle\tauthor_raw\tauthor_validated\tyear\tpublisher\tauthor_key\t"
    "link_status\tviaf_id\twikidata_id\tcountries";

}  // namespace

std::string catalog_to_tsv(const std::vector<ItemRecord>& items, const AuthorTable& authors) {
  std::ostringstream out;
  out << kCatalogHeader << '\n';
  for (const auto& item : items) {
    const AuthorRecord* author = nullptr;
    if (item.author_key) {
      if (auto it = authors.find(*item.author_key); it != authors.end()) author = &it->second;
    }
    out << item.item_id << '\t' << join(item.raw_isbns, ',') << '\t' << io::tsv_cell(item.title)
        << '\t' << io::tsv_cell(item.author_raw) << '\t'
        << io::tsv_cell(item.author_validated.value_or("")) << '\t'
        << (item.year ? std::to_string(*item.year) : "") << '\t' << io::tsv_cell(item.publisher)
        << '\t' << io::tsv_cell(item.author_key.value_or("")) << '\t'
        << link_status_name(author ? author->link_status : LinkStatus::kUnlinked) << '\t'
        << (author ? author->viaf_id.value_or("") : "") << '\t'
        << (author ? author->wikidata_id.value_or("") : "") << '\t'
        << (author ? join(author->countries, ',') : "") << '\n';
  }
  return out.str();
}

void write_catalog(const std::filesystem::path& path, const std::vector<ItemRecord>& items,
                   const AuthorTable& authors) {
  io::write_file(path, catalog_to_tsv(items, authors));
}

Catalog parse_catalog_text(std::string_view content) {
  auto rows = io::lines(content);
  if (rows.empty() || rows[0] != kCatalogHeader) {
    throw Error(ErrorCode::kMalformedHeader, "catalog file must start with the catalog header");
  }
  Catalog catalog;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    if (text::trim(rows[n]).empty()) continue;
    auto f = text::split(rows[n], '\t');
    if (f.size() != 12) {
      throw Error(ErrorCode::kFormatError,
                  "catalog line " + std::to_string(n + 1) + ": expected 12 columns");
    }
    ItemRecord item;
    item.item_id = std::string(f[0]);
    for (auto isbn : text::split(f[1], ',')) {
      if (!isbn.empty()) item.raw_isbns.emplace(isbn);
    }
    item.raw_isbns.insert(item.item_id);
    item.title = std::string(f[2]);
    item.author_raw = std::string(f[3]);
    if (!f[4].empty()) item.author_validated = std::string(f[4]);
    if (!f[5].empty()) {
      int y = 0;
      auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), y);
      if (ec == std::errc() && ptr == f[5].data() + f[5].size()) item.year = y;
    }
    item.publisher = std::string(f[6]);
    auto status = parse_link_status(f[8]);
    if (!status) {
      throw Error(ErrorCode::kFormatError, "catalog line " + std::to_string(n + 1) +
                                               ": unknown link status '" + std::string(f[8]) + "'");
    }
    item.author_confirmed = *status >= LinkStatus::kNameValidated;
    if (!f[7].empty()) {
      item.author_key = std::string(f[7]);
      auto [it, inserted] = catalog.authors.try_emplace(*item.author_key);
      AuthorRecord& a = it->second;
      if (inserted) {
        a.author_key = *item.author_key;
        a.display_name = item.author_validated.value_or(item.author_raw);
        a.link_status = *status;
        if (!f[9].empty()) a.viaf_id = std::string(f[9]);
        if (!f[10].empty()) a.wikidata_id = std::string(f[10]);
        for (auto c : text::split(f[11], ',')) {
          if (!c.empty()) a.countries.emplace(c);
        }
      }
    }
    catalog.items.push_back(std::move(item));
  }
  return catalog;
}

Catalog read_catalog(const std::filesystem::path& path) {
  return parse_catalog_text(io::read_file(path));
}

std::unordered_map<std::string, Ternary> country_predicate(const Catalog& catalog,
                                                           std::string_view target) {
  std::unordered_map<std::string, Ternary> out;
  out.reserve(catalog.items.size() * 2);
  for (const auto& item : catalog.items) {
    Ternary t = is_target_country(item, catalog.authors, target);
    for (const auto& isbn : item.raw_isbns) out.emplace(isbn, t);
    out[item.item_id] = t;
  }
  return out;
}

}  // namespace biaslens::linker
