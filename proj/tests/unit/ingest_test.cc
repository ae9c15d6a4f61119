// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "biaslens/error.h"
#include "biaslens/ingest.h"
#include "biaslens/io.h"
#include "biaslens/rng.h"
#include "support/fixtures.h"

namespace biaslens::ingest {
namespace {

constexpr const char* kRatingsHeader = "\"User-ID\";\"ISBN\";\"Book-Rating\"\n";
constexpr const char* kItemsHeader =
    "\"ISBN\";\"Book-Title\";\"Book-Author\";\"Year-Of-Publication\";\"Publisher\";"
    "\"Image-URL-S\"\n";

ItemRecord book(const std::string& isbn, const std::string& title, const std::string& author) {
  ItemRecord r;
  r.item_id = isbn;
  r.raw_isbns.insert(isbn);
  r.title = title;
  r.author_raw = author;
  return r;
}

TEST(ParseRatings, BookCrossingLine) {
  auto r = parse_ratings_text(std::string(kRatingsHeader) + "\"276725\";\"034545104X\";\"0\"\n",
                              Encoding::kLatin1);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0], (Interaction{"276725", "034545104X", 0}));
  EXPECT_TRUE(r.rejects.empty());
}

TEST(ParseRatings, EmptyDataSection) {
  auto r = parse_ratings_text(kRatingsHeader, Encoding::kLatin1);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.data_lines, 0u);
}

TEST(ParseRatings, ShortLineBecomesReject) {
  auto r = parse_ratings_text(std::string(kRatingsHeader) + "\"1\";\"0002005018\";\"5\"\n\"2\";\"x\"\n",
                              Encoding::kLatin1);
  EXPECT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.rejects.size(), 1u);
  EXPECT_EQ(r.rejects[0].line_number, 3u);
  EXPECT_EQ(r.rejects[0].raw_line, "\"2\";\"x\"");
}

TEST(ParseRatings, NothingSilentlyDropped) {
  std::string content = kRatingsHeader;
  content += "\"1\";\"a\";\"5\"\n";
  content += "\"2\";\"b\";\"11\"\n";
  content += "\"3\";\"c\";\"x\"\n";
  content += "\n";
  content += "\"4\";\"d\n";
  content += "\"\";\"e\";\"1\"\n";
  content += "\"6\";\"f\";\"10\";\"extra\"\n";
  content += "\"7\";\"g\";\"10\"\n";
  auto r = parse_ratings_text(content, Encoding::kLatin1);
  EXPECT_EQ(r.data_lines, 7u);
  EXPECT_EQ(r.records.size() + r.rejects.size(), r.data_lines);
  EXPECT_EQ(r.records.size(), 2u);
}

TEST(ParseRatings, HeaderAndFileErrors) {
  try {
    parse_ratings_text("\"User\";\"ISBN\";\"Book-Rating\"\n", Encoding::kLatin1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedHeader);
  }
  try {
    parse_ratings("/does/not/exist.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
  }
}

TEST(ParseRatings, Utf8ModeRejectsInvalidBytes) {
  auto r = parse_ratings_text(std::string(kRatingsHeader) + "\"1\";\"a\xE9\";\"5\"\n", Encoding::kUtf8);
  EXPECT_EQ(r.records.size(), 0u);
  EXPECT_EQ(r.rejects.size(), 1u);
  auto latin = parse_ratings_text(std::string(kRatingsHeader) + "\"1\";\"a\xE9\";\"5\"\n",
                                  Encoding::kLatin1);
  ASSERT_EQ(latin.records.size(), 1u);
  EXPECT_EQ(latin.records[0].item_id, "a\xC3\xA9");
}

TEST(ParseItems, FieldMappingAndYearSentinel) {
  std::string content = kItemsHeader;
  content += "\"0195153448\";\"Classical Mythology\";\"Mark P. O. Morford\";\"2002\";"
             "\"Oxford University Press\";\"http://x\"\n";
  content += "\"0002005018\";\"Clara Callan\";\"Richard Bruce Wright\";\"0\";\"HarperFlamingo\";\"\"\n";
  content += "\"0060973129\";\"Decision in Normandy\";\"Carlo D'Este\";\"2050\";\"Perennial\";\"\"\n";
  auto r = parse_items_text(content, Encoding::kLatin1);
  ASSERT_EQ(r.records.size(), 3u);
  const ItemRecord& a = r.records[0];
  EXPECT_EQ(a.item_id, "0195153448");
  EXPECT_EQ(a.title, "Classical Mythology");
  EXPECT_EQ(a.author_raw, "Mark P. O. Morford");
  EXPECT_EQ(a.year, 2002);
  EXPECT_EQ(a.publisher, "Oxford University Press");
  EXPECT_FALSE(a.author_validated.has_value());
  EXPECT_FALSE(r.records[1].year.has_value());
  EXPECT_FALSE(r.records[2].year.has_value());
}

TEST(ParseUsers, LocationVerbatim) {
  auto r = parse_users_text(
      "\"User-ID\";\"Location\";\"Age\"\n\"8\";\"tyler, texas, usa\";NULL\n\"9\";\"a, b\";\"33\"\n",
      Encoding::kLatin1);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].location, "tyler, texas, usa");
  EXPECT_FALSE(r.records[0].age.has_value());
  EXPECT_EQ(r.records[1].age, 33);
}

TEST(SplitBxLine, Quoting) {
  auto f = split_bx_line("\"a\";\"b;c\";\"d\"\"e\"");
  ASSERT_TRUE(f.has_value());
  ASSERT_EQ(f->size(), 3u);
  EXPECT_EQ((*f)[1], "b;c");
  EXPECT_EQ((*f)[2], "d\"e");
  EXPECT_FALSE(split_bx_line("\"a\";\"b").has_value());
}

TEST(GenericRatings, RoundTrip) {
  std::vector<Interaction> rows{{"u1", "i1", 3}, {"u2", "i1", 0}, {"u1", "i2", 10}};
  auto parsed = parse_generic_ratings_text(generic_ratings_to_tsv(rows));
  EXPECT_EQ(parsed.records, rows);
  EXPECT_TRUE(parsed.rejects.empty());
}

TEST(CanonicalizeIsbn, Examples) {
  EXPECT_EQ(canonicalize_isbn("0-345-45104-x"), "034545104X");
  EXPECT_EQ(canonicalize_isbn("034545104X"), "034545104X");
  EXPECT_EQ(canonicalize_isbn("978 0 345 45104 9"), "9780345451049");
  EXPECT_EQ(canonicalize_isbn("not-an-isbn"), std::nullopt);
  EXPECT_EQ(canonicalize_isbn("12345"), std::nullopt);
  EXPECT_EQ(canonicalize_isbn("X123456789"), std::nullopt);
}

TEST(CanonicalizeIds, RewritesAndDrops) {
  std::vector<ItemRecord> items{book("0-345-45104-x", "T", "A"), book("junk", "U", "B")};
  std::vector<Interaction> rows{{"u", "034545104x", 5}, {"u", "0345-45104X", 7}, {"v", "bad", 1}};
  auto report = canonicalize_ids(items, rows);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].item_id, "034545104X");
  EXPECT_EQ(report.invalid_item_isbns, 1u);
  EXPECT_EQ(report.invalid_rating_isbns, 1u);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].rating, 7);
  EXPECT_EQ(report.collapsed_rating_pairs, 1u);
}

TEST(ResolveDuplicates, HighestWinsTieKeepsFirst) {
  std::vector<Interaction> rows{{"u", "a", 7}, {"v", "a", 2}, {"u", "a", 9}, {"v", "a", 2}};
  EXPECT_EQ(resolve_duplicate_pairs(rows), 2u);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (Interaction{"u", "a", 9}));
  EXPECT_EQ(rows[1], (Interaction{"v", "a", 2}));
}

TEST(Dedup, MajorityIsbnWins) {
  std::vector<ItemRecord> items{book("1111111111", "The Hobbit", "J.R.R. Tolkien"),
                                book("2222222222", "the hobbit!", "j r r tolkien")};
  std::vector<Interaction> rows{{"a", "2222222222", 5}, {"b", "2222222222", 5},
                                {"c", "2222222222", 5}, {"d", "1111111111", 5}};
  auto r = dedup_items(items, rows);
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].item_id, "2222222222");
  EXPECT_EQ(r.items[0].raw_isbns, (std::set<std::string>{"1111111111", "2222222222"}));
  EXPECT_EQ(r.interactions.size(), 4u);
  for (const auto& i : r.interactions) EXPECT_EQ(i.item_id, "2222222222");
  ASSERT_EQ(r.merges.size(), 1u);
  EXPECT_EQ(r.merges[0].removed_isbn, "1111111111");
  EXPECT_EQ(r.merges[0].canonical_isbn, "2222222222");
  EXPECT_EQ(r.merges[0].removed_ratings, 1u);
}

TEST(Dedup, TieTakesSmallestIsbn) {
  std::vector<ItemRecord> items{book("2222222222", "X", "Y"), book("1111111111", "X", "Y")};
  auto r = dedup_items(items, {{"a", "2222222222", 1}, {"b", "1111111111", 1}});
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].item_id, "1111111111");
}

TEST(Dedup, DifferentAuthorsNotMerged) {
  std::vector<ItemRecord> items{book("1111111111", "Emma", "Jane Austen"),
                                book("2222222222", "Emma", "Someone Else")};
  auto r = dedup_items(items, {});
  EXPECT_EQ(r.items.size(), 2u);
  EXPECT_TRUE(r.merges.empty());
}

TEST(Dedup, OverlappingUserKeepsHighest) {
  std::vector<ItemRecord> items{book("1111111111", "X", "Y"), book("2222222222", "X", "Y")};
  auto r = dedup_items(items, {{"u", "1111111111", 7}, {"u", "2222222222", 9}});
  ASSERT_EQ(r.interactions.size(), 1u);
  EXPECT_EQ(r.interactions[0].rating, 9);
  EXPECT_EQ(r.collapsed_pairs, 1u);
}

TEST(Orphans, DroppedAndCounted) {
  std::vector<ItemRecord> items{book("a", "", ""), book("b", "", "")};
  auto identity = drop_orphan_ratings({{"u", "a", 1}, {"v", "b", 2}}, items);
  EXPECT_EQ(identity.dropped, 0u);
  EXPECT_EQ(identity.interactions.size(), 2u);

  std::vector<Interaction> mixed;
  SeededRng rng(4, "orphans");
  for (int k = 0; k < 200; ++k) {
    mixed.push_back({"u" + std::to_string(k), std::string(1, static_cast<char>('a' + rng.uniform_index(5))), 1});
  }
  auto r = drop_orphan_ratings(mixed, items);
  std::size_t brute = 0;
  for (const auto& i : mixed) brute += (i.item_id == "a" || i.item_id == "b") ? 0 : 1;
  EXPECT_EQ(r.dropped, brute);
  EXPECT_EQ(r.interactions.size(), mixed.size() - brute);
}

std::vector<Interaction> user_block(const std::string& user, int n, int offset, int rating = 5) {
  std::vector<Interaction> out;
  for (int k = 0; k < n; ++k) out.push_back({user, "i" + std::to_string(offset + k), rating});
  return out;
}

TEST(Preprocess, MoreThanMaxRemoved) {
  std::vector<Interaction> rows = user_block("heavy", 201, 0);
  for (int u = 0; u < 5; ++u) {
    auto b = user_block("u" + std::to_string(u), 5, 0);
    rows.insert(rows.end(), b.begin(), b.end());
  }
  auto r = preprocess(rows, PreprocessConfig{});
  for (const auto& i : r.interactions) EXPECT_NE(i.user_id, "heavy");
  ASSERT_GE(r.stages.size(), 3u);
  EXPECT_EQ(r.stages[2].stage, "max_user_ratings");
  EXPECT_EQ(r.stages[1].ratings - r.stages[2].ratings, 201u);
}

TEST(Preprocess, BoundaryUsersRetained) {
  std::vector<Interaction> rows;
  for (int u = 0; u < 5; ++u) {
    auto b = user_block("u" + std::to_string(u), 5, 0);
    rows.insert(rows.end(), b.begin(), b.end());
  }
  auto cap = user_block("cap", 200, 0);
  rows.insert(rows.end(), cap.begin(), cap.end());
  auto r = preprocess(rows, PreprocessConfig{});
  std::set<std::string> users;
  for (const auto& i : r.interactions) users.insert(i.user_id);
  EXPECT_EQ(users.size(), 6u);
}

TEST(Preprocess, ImplicitAndEmpty) {
  std::vector<Interaction> rows{{"u", "a", 0}};
  try {
    preprocess(rows, PreprocessConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyResult);
  }
  PreprocessConfig keep;
  keep.drop_implicit = false;
  keep.min_user_ratings = 0;
  keep.min_item_ratings = 0;
  EXPECT_EQ(preprocess(rows, keep).interactions.size(), 1u);
}

TEST(Preprocess, InvalidConfig) {
  PreprocessConfig c;
  c.min_user_ratings = 300;
  EXPECT_THROW(c.validate(), Error);
  c = PreprocessConfig{};
  c.min_item_ratings = -1;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Preprocess, FixpointIdempotentAndBounded) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto rows = testing::random_interactions(60, 40, 0.12, seed);
    PreprocessConfig c;
    c.iterate_to_fixpoint = true;
    auto once = preprocess(rows, c);
    auto twice = preprocess(once.interactions, c);
    EXPECT_EQ(once.interactions, twice.interactions);
    std::map<std::string, int> per_user, per_item;
    for (const auto& i : once.interactions) {
      ++per_user[i.user_id];
      ++per_item[i.item_id];
    }
    for (const auto& [u, n] : per_user) {
      EXPECT_GE(n, 5);
      EXPECT_LE(n, 200);
    }
    for (const auto& [i, n] : per_item) EXPECT_GE(n, 5);
  }
}

TEST(Preprocess, StageCountsMatchRecount) {
  auto rows = testing::random_interactions(50, 30, 0.2, 11);
  auto r = preprocess(rows, PreprocessConfig{});
  ASSERT_FALSE(r.stages.empty());
  const StageCount& last = r.stages.back();
  auto recount = count_stage(last.stage, r.interactions);
  EXPECT_EQ(last.ratings, recount.ratings);
  EXPECT_EQ(last.users, recount.users);
  EXPECT_EQ(last.items, recount.items);
  auto tsv = stages_to_tsv(r.stages);
  EXPECT_EQ(tsv.rfind("stage\tratings\tusers\titems\n", 0), 0u);
}

}  // namespace
}  // namespace biaslens::ingest
