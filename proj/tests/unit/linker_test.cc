// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "biaslens/error.h"
#include "biaslens/linker.h"
#include "biaslens/rng.h"
#include "biaslens/text.h"
#include "support/fixtures.h"

namespace biaslens::linker {
namespace {

ItemRecord item(const std::string& isbn, const std::string& author) {
  ItemRecord r;
  r.item_id = isbn;
  r.raw_isbns.insert(isbn);
  r.title = "Title " + isbn;
  r.author_raw = author;
  return r;
}

std::string isbn_of(int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%010d", k);
  return buf;
}

LinkConfig mode(NameMatchMode m) {
  LinkConfig c;
  c.name_match_mode = m;
  return c;
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize_author_name("Tolkien, J. R. R."), "j r r tolkien");
  EXPECT_EQ(normalize_author_name("JANE AUSTEN"), "jane austen");
  EXPECT_EQ(normalize_author_name("Garc\xC3\xAD" "a M\xC3\xA1rquez, Gabriel"), "gabriel garcia marquez");
  EXPECT_EQ(normalize_author_name(""), "");
  EXPECT_EQ(normalize_author_name(" ,  "), "");
}

TEST(Normalize, Idempotent) {
  const char* corpus[] = {"Tolkien, J. R. R.", "JANE AUSTEN", "Garc\xC3\xAD" "a M\xC3\xA1rquez, Gabriel",
                          "O'Brien, Patrick", "Dr. Seuss", "  mixed   Case--Name ", "A, B, C",
                          "\xC3\x89mile Zola", "Le Guin, Ursula K.", ",leading", "trailing,"};
  for (const char* s : corpus) {
    const std::string once = normalize_author_name(s);
    EXPECT_EQ(normalize_author_name(once), once) << s;
  }
}

struct MatchCase {
  const char* a;
  const char* b;
  bool exact;
  bool token_set;
  bool levenshtein;
};

// Expected outcomes written down by hand from the three rule definitions.
const MatchCase kMatchTable[] = {
    {"Jane Austen", "Austen, Jane", true, true, true},
    {"J. R. R. Tolkien", "Tolkien, J.R.R.", true, true, true},
    {"J. Smith", "John Smith", false, false, false},
    {"Smith John", "John Smith", false, true, false},
    {"Jon Smith", "John Smith", false, false, true},
    {"Gabriel Garc\xC3\xAD" "a M\xC3\xA1rquez", "GABRIEL GARCIA MARQUEZ", true, true, true},
    {"", "Anyone", false, false, false},
    {"Stephen King", "Stephen Kings", false, false, true},
    {"Anne Rice", "Rice Anne Rice", false, true, false},
    {"Dr. Seuss", "Seuss, Dr.", true, true, true},
};

TEST(NamesMatch, HandTable) {
  for (const auto& c : kMatchTable) {
    EXPECT_EQ(names_match(c.a, c.b, mode(NameMatchMode::kExactNormalized)), c.exact) << c.a << " | " << c.b;
    EXPECT_EQ(names_match(c.a, c.b, mode(NameMatchMode::kTokenSet)), c.token_set) << c.a << " | " << c.b;
    EXPECT_EQ(names_match(c.a, c.b, mode(NameMatchMode::kLevenshtein)), c.levenshtein)
        << c.a << " | " << c.b;
  }
}

TEST(ValidateAuthor, SourceAgrees) {
  SourceAdapter books(AdapterKind::kIsbnToAuthor);
  books.add_isbn_author("0000000001", "Jane Austen");
  LinkLog log;
  auto r = validate_author(item("0000000001", "Jane Austen"), books, LinkConfig{}, &log);
  EXPECT_EQ(r.author_validated, "Jane Austen");
  EXPECT_TRUE(r.author_confirmed);
  EXPECT_EQ(r.author_key, "jane austen");
  EXPECT_TRUE(log.empty());
}

TEST(ValidateAuthor, TokenSetMatch) {
  SourceAdapter books(AdapterKind::kIsbnToAuthor);
  books.add_isbn_author("0000000002", "J. R. R. Tolkien");
  LinkLog log;
  auto r = validate_author(item("0000000002", "Tolkien, J.R.R."), books, LinkConfig{}, &log);
  EXPECT_EQ(r.author_validated, "J. R. R. Tolkien");
  EXPECT_TRUE(log.empty());
}

TEST(ValidateAuthor, ConflictSourceWins) {
  SourceAdapter books(AdapterKind::kIsbnToAuthor);
  books.add_isbn_author("0000000003", "John Smith");
  LinkLog log;
  auto r = validate_author(item("0000000003", "J. Smith"), books, mode(NameMatchMode::kExactNormalized),
                           &log);
  EXPECT_EQ(r.author_validated, "John Smith");
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].event, "corrected");
}

TEST(ValidateAuthor, IsbnMissingKeepsRaw) {
  SourceAdapter books(AdapterKind::kIsbnToAuthor);
  auto r = validate_author(item("0000000004", "Some One"), books, LinkConfig{});
  EXPECT_EQ(r.author_validated, "Some One");
  EXPECT_FALSE(r.author_confirmed);
}

TEST(ValidateAuthor, WrongAdapterKind) {
  SourceAdapter viaf(AdapterKind::kNameToViaf);
  try {
    validate_author(item("0000000005", "x"), viaf, LinkConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongAdapterKind);
  }
}

AuthorRecord author(const std::string& name) {
  AuthorRecord a;
  a.author_key = normalize_author_name(name);
  a.display_name = name;
  return a;
}

TEST(LinkViaf, HitMissAmbiguous) {
  SourceAdapter viaf(AdapterKind::kNameToViaf);
  viaf.add_name_viaf("Jane Austen", "102333412");
  viaf.add_name_viaf("John Smith", "101");
  viaf.add_name_viaf("John Smith", "42");
  LinkLog log;
  auto hit = link_to_viaf(author("Jane Austen"), viaf, LinkConfig{}, &log);
  EXPECT_EQ(hit.viaf_id, "102333412");
  EXPECT_EQ(hit.link_status, LinkStatus::kViafLinked);

  auto miss = link_to_viaf(author("Nobody Here"), viaf, LinkConfig{}, &log);
  EXPECT_EQ(miss.link_status, LinkStatus::kUnlinked);
  EXPECT_TRUE(miss.countries.empty());

  log.clear();
  auto amb = link_to_viaf(author("John Smith"), viaf, LinkConfig{}, &log);
  EXPECT_EQ(amb.viaf_id, "42");
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].event, "ambiguous");
}

TEST(LinkWikidata, Outcomes) {
  SourceAdapter wd(AdapterKind::kViafToWikidata);
  wd.add_viaf_wikidata("1", {"Q1", "Mark Twain", {"US"}});
  wd.add_viaf_wikidata("2", {"Q2", "Somebody Different", {"US"}});
  wd.add_viaf_wikidata("3", {"Q3", "Henry James", {"GB", "US"}});

  auto a = author("Mark Twain");
  a.viaf_id = "1";
  a.link_status = LinkStatus::kViafLinked;
  auto linked = link_to_wikidata(a, wd, LinkConfig{});
  EXPECT_EQ(linked.link_status, LinkStatus::kWikidataLinked);
  EXPECT_EQ(linked.wikidata_id, "Q1");
  EXPECT_EQ(linked.countries, (std::set<std::string>{"US"}));

  auto b = author("Mark Twain");
  b.viaf_id = "2";
  b.link_status = LinkStatus::kViafLinked;
  LinkLog log;
  auto rejected = link_to_wikidata(b, wd, LinkConfig{}, &log);
  EXPECT_EQ(rejected.link_status, LinkStatus::kViafLinked);
  EXPECT_FALSE(rejected.wikidata_id.has_value());
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].event, "rejected");

  auto c = author("Henry James");
  c.viaf_id = "3";
  EXPECT_EQ(link_to_wikidata(c, wd, LinkConfig{}).countries, (std::set<std::string>{"GB", "US"}));
  LinkConfig first;
  first.multi_citizenship_policy = CitizenshipPolicy::kFirst;
  EXPECT_EQ(link_to_wikidata(c, wd, first).countries, (std::set<std::string>{"GB"}));

  try {
    link_to_wikidata(author("No Viaf"), wd, LinkConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingViafId);
  }
}

TEST(Adapters, LoadFromText) {
  auto books = SourceAdapter::from_text(AdapterKind::kIsbnToAuthor,
                                        "isbn\tauthor_name\n0-345-45104-x\tJ. Doe\n");
  ASSERT_NE(books.author_for_isbn("034545104X"), nullptr);
  EXPECT_EQ(*books.author_for_isbn("034545104X"), "J. Doe");
  auto viaf = SourceAdapter::from_text(AdapterKind::kNameToViaf, "Doe, J.\tviaf/77\n");
  EXPECT_EQ(viaf.viaf_candidates("j doe"), (std::vector<std::string>{"77"}));
  auto wd = SourceAdapter::from_text(AdapterKind::kViafToWikidata, "77\tQ9\tJ. Doe\tus, gb\n88\tQ8\tX\t\n");
  ASSERT_NE(wd.wikidata_for("77"), nullptr);
  EXPECT_EQ(wd.wikidata_for("77")->countries, (std::vector<std::string>{"US", "GB"}));
  EXPECT_TRUE(wd.wikidata_for("88")->countries.empty());
  EXPECT_THROW(SourceAdapter::from_text(AdapterKind::kViafToWikidata, "77\tQ9\n"), Error);
}

// Three authors, each with one book, VIAF id and WikiData entry.
struct ChainFixture {
  SourceAdapter books{AdapterKind::kIsbnToAuthor};
  SourceAdapter viaf{AdapterKind::kNameToViaf};
  SourceAdapter wd{AdapterKind::kViafToWikidata};
  std::vector<ItemRecord> items;

  ChainFixture() {
    const char* names[] = {"Mark Twain", "Jane Austen", "Leo Tolstoy"};
    const char* countries[] = {"US", "GB", "RU"};
    for (int k = 0; k < 3; ++k) {
      books.add_isbn_author(isbn_of(k + 1), names[k]);
      viaf.add_name_viaf(names[k], std::to_string(100 + k));
      wd.add_viaf_wikidata(std::to_string(100 + k), {"Q" + std::to_string(k), names[k], {countries[k]}});
      items.push_back(item(isbn_of(k + 1), names[k]));
    }
  }
};

TEST(Enrich, AllHitFullCoverage) {
  ChainFixture f;
  auto r = enrich_catalog(f.items, {}, {f.books, f.viaf, f.wd}, LinkConfig{});
  EXPECT_EQ(r.stats.authors, 3u);
  EXPECT_DOUBLE_EQ(r.stats.coverage, 1.0);
  EXPECT_EQ(r.stats.by_status[static_cast<int>(LinkStatus::kWikidataLinked)], 3u);
  EXPECT_EQ(is_target_country(r.items[0], r.authors, "US"), Ternary::kYes);
  EXPECT_EQ(is_target_country(r.items[1], r.authors, "US"), Ternary::kNo);
}

TEST(Enrich, OneViafMiss) {
  ChainFixture f;
  SourceAdapter viaf(AdapterKind::kNameToViaf);
  viaf.add_name_viaf("Mark Twain", "100");
  viaf.add_name_viaf("Jane Austen", "101");
  auto r = enrich_catalog(f.items, {}, {f.books, viaf, f.wd}, LinkConfig{});
  EXPECT_NEAR(r.stats.coverage, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(r.authors.at("leo tolstoy").link_status, LinkStatus::kNameValidated);
  EXPECT_EQ(is_target_country(r.items[2], r.authors, "US"), Ternary::kUnknown);
}

TEST(IsTargetCountry, Cases) {
  AuthorTable authors;
  auto us = author("A B");
  us.countries = {"US"};
  us.link_status = LinkStatus::kWikidataLinked;
  auto gb = author("C D");
  gb.countries = {"GB"};
  gb.link_status = LinkStatus::kWikidataLinked;
  authors[us.author_key] = us;
  authors[gb.author_key] = gb;
  authors["e f"] = author("E F");
  ItemRecord i;
  i.author_key = "a b";
  EXPECT_EQ(is_target_country(i, authors, "US"), Ternary::kYes);
  i.author_key = "c d";
  EXPECT_EQ(is_target_country(i, authors, "US"), Ternary::kNo);
  i.author_key = "e f";
  EXPECT_EQ(is_target_country(i, authors, "US"), Ternary::kUnknown);
  i.author_key.reset();
  EXPECT_EQ(is_target_country(i, authors, "US"), Ternary::kUnknown);
}

// Random adapters over 50 authors; expectations come from walking every
// record on its own, without the library's author table.
TEST(Enrich, RandomFixtureMatchesRewalk) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SeededRng rng(seed, "linker-fixture");
    SourceAdapter books(AdapterKind::kIsbnToAuthor), viaf(AdapterKind::kNameToViaf),
        wd(AdapterKind::kViafToWikidata);
    std::vector<ItemRecord> items;
    const char* pool[] = {"US", "GB", "FR", "DE"};

    std::size_t expect_with_countries = 0, expect_confirmed = 0;
    std::array<std::size_t, 4> expect_status{};
    for (int k = 0; k < 50; ++k) {
      const std::string name = "Author" + std::to_string(k) + " Surname" + std::to_string(k * 7);
      const std::string isbn = isbn_of(1000 + k);
      items.push_back(item(isbn, name));
      const bool in_books = rng.uniform() < 0.7;
      const bool in_viaf = rng.uniform() < 0.7;
      const bool in_wd = rng.uniform() < 0.8;
      const bool label_ok = rng.uniform() < 0.8;
      const int n_countries = static_cast<int>(rng.uniform_index(3));
      if (in_books) books.add_isbn_author(isbn, name);
      const std::string id = std::to_string(5000 + k);
      if (in_viaf) viaf.add_name_viaf(name, id);
      WikidataEntry e{"Q" + id, label_ok ? name : "Other Person", {}};
      for (int c = 0; c < n_countries; ++c) e.countries.push_back(pool[rng.uniform_index(4)]);
      if (in_wd) wd.add_viaf_wikidata(id, e);

      LinkStatus s = in_books ? LinkStatus::kNameValidated : LinkStatus::kUnlinked;
      bool countries = false;
      if (in_viaf) {
        s = LinkStatus::kViafLinked;
        if (in_wd && label_ok) {
          s = LinkStatus::kWikidataLinked;
          countries = n_countries > 0;
        }
      }
      ++expect_status[static_cast<std::size_t>(s)];
      expect_with_countries += countries ? 1 : 0;
      expect_confirmed += in_books ? 1 : 0;
    }
    auto r = enrich_catalog(items, {}, {books, viaf, wd}, LinkConfig{});
    EXPECT_EQ(r.stats.authors, 50u);
    EXPECT_EQ(r.stats.items_confirmed, expect_confirmed);
    EXPECT_EQ(r.stats.by_status, expect_status);
    EXPECT_EQ(r.stats.authors_with_countries, expect_with_countries);
    EXPECT_DOUBLE_EQ(r.stats.coverage, static_cast<double>(expect_with_countries) / 50.0);
    EXPECT_EQ(r.stats, compute_linkage_stats(r.items, r.authors, r.log));
    EXPECT_TRUE(std::is_sorted(r.log.begin(), r.log.end()));
    for (const auto& [key, a] : r.authors) {
      if (a.wikidata_id) {
        EXPECT_TRUE(a.viaf_id.has_value());
      }
    }
    auto again = enrich_catalog(items, {}, {books, viaf, wd}, LinkConfig{});
    EXPECT_EQ(stats_to_json(again.stats), stats_to_json(r.stats));
    EXPECT_EQ(again.log, r.log);
  }
}

TEST(Enrich, StatusNeverDecreases) {
  ChainFixture f;
  auto first = enrich_catalog(f.items, {}, {f.books, f.viaf, f.wd}, LinkConfig{});
  SourceAdapter empty_viaf(AdapterKind::kNameToViaf);
  auto second = enrich_catalog(first.items, first.authors, {f.books, empty_viaf, f.wd}, LinkConfig{});
  for (const auto& [key, a] : second.authors) {
    EXPECT_GE(static_cast<int>(a.link_status), static_cast<int>(first.authors.at(key).link_status));
  }
}

TEST(Catalog, TsvRoundTrip) {
  ChainFixture f;
  auto r = enrich_catalog(f.items, {}, {f.books, f.viaf, f.wd}, LinkConfig{});
  r.items[0].year = 1884;
  r.items[1].publisher = "Tab\there";
  const std::string tsv = catalog_to_tsv(r.items, r.authors);
  auto parsed = parse_catalog_text(tsv);
  ASSERT_EQ(parsed.items.size(), 3u);
  EXPECT_EQ(parsed.items[0].year, 1884);
  EXPECT_EQ(catalog_to_tsv(parsed.items, parsed.authors), tsv);
  auto pred = country_predicate(parsed, "US");
  EXPECT_EQ(pred.at(isbn_of(1)), Ternary::kYes);
  EXPECT_EQ(pred.at(isbn_of(2)), Ternary::kNo);
}

}  // namespace
}  // namespace biaslens::linker
