// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "biaslens/io.h"
#include "biaslens/pipeline.h"
#include "support/fixtures.h"
#include "support/xml.h"

namespace biaslens {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

CliRun cli(const TempDir& tmp, const std::vector<std::string>& args) {
  std::string cmd = quote(BIASLENS_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  const fs::path out = tmp / "stdout.txt";
  const fs::path err = tmp / "stderr.txt";
  cmd += " >" + quote(out.string()) + " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = io::read_file(out);
  r.err = io::read_file(err);
  return r;
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
    cells.push_back(line.substr(start, tab - start));
  }
  cells.push_back(line.substr(start));
  return cells;
}

// Writes a 150 x 300 synthetic dataset into tmp/data.
void synth(const TempDir& tmp, const std::string& seed = "7") {
  const CliRun r = cli(tmp, {"synth", "--users", "150", "--items", "300", "--seed", seed, "--out",
                          (tmp / "data").string()});
  ASSERT_EQ(r.code, 0) << r.err;
}

std::vector<std::string> audit_args(const TempDir& tmp, const std::string& out) {
  return {"audit",  "--ratings",    (tmp / "data" / "ratings.tsv").string(),
          "--catalog", (tmp / "data" / "catalog.tsv").string(), "--out", (tmp / out).string()};
}

TEST(Cli, ExitCodesForUsageErrors) {
  TempDir tmp;
  EXPECT_EQ(cli(tmp, {}).code, 2);
  EXPECT_EQ(cli(tmp, {"--help"}).code, 0);
  EXPECT_EQ(cli(tmp, {"frobnicate"}).code, 2);
  EXPECT_EQ(cli(tmp, {"audit", "--no-such-flag"}).code, 2);
  EXPECT_EQ(cli(tmp, {"audit", "--algorithms", "mostpop,svd"}).code, 2);
  EXPECT_EQ(cli(tmp, {"synth", "--users", "many"}).code, 2);
  EXPECT_EQ(cli(tmp, {"synth", "--bias", "3", "--out", (tmp / "x").string()}).code, 2);
}

TEST(Cli, MissingFileIsNamed) {
  TempDir tmp;
  const std::string missing = (tmp / "absent_ratings.tsv").string();
  const CliRun r = cli(tmp, {"audit", "--ratings", missing, "--catalog", missing, "--out",
                          (tmp / "o").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("absent_ratings.tsv"), std::string::npos) << r.err;

  const CliRun c = cli(tmp, {"synth", "--config", (tmp / "none.toml").string()});
  EXPECT_EQ(c.code, 2);
  EXPECT_NE(c.err.find("none.toml"), std::string::npos) << c.err;
}

TEST(Cli, BadConfigNamesLine) {
  TempDir tmp;
  io::write_file(tmp / "bad.toml", "[synth]\nusers = 10\nitems = \n");
  const CliRun r = cli(tmp, {"synth", "--config", (tmp / "bad.toml").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Cli, SynthCountsMatchFiles) {
  TempDir tmp;
  synth(tmp);
  const std::string out = io::read_file(tmp / "stdout.txt");
  const std::string ratings = io::read_file(tmp / "data" / "ratings.tsv");
  EXPECT_EQ(out, "ratings\t" + std::to_string(line_count(ratings) - 1) + "\nitems\t300\n");
  EXPECT_EQ(line_count(io::read_file(tmp / "data" / "catalog.tsv")) - 1, 300u);

  const CliRun again = cli(tmp, {"synth", "--users", "150", "--items", "300", "--seed", "7", "--out",
                              (tmp / "again").string()});
  ASSERT_EQ(again.code, 0);
  for (const char* f : {"ratings.tsv", "catalog.tsv", "effective_config.toml"}) {
    const auto a = io::read_file(tmp / "data" / f);
    auto b = io::read_file(tmp / "again" / f);
    if (std::string(f) == "effective_config.toml") {
      const auto pos = b.find((tmp / "again").string());
      ASSERT_NE(pos, std::string::npos);
      b.replace(pos, (tmp / "again").string().size(), (tmp / "data").string());
    }
    EXPECT_EQ(a, b) << f;
  }
  cli(tmp, {"synth", "--users", "150", "--items", "300", "--seed", "8", "--out",
            (tmp / "other").string()});
  EXPECT_NE(io::read_file(tmp / "other" / "ratings.tsv"), ratings);
}

TEST(Cli, AuditSelectedAlgorithms) {
  TempDir tmp;
  synth(tmp);
  auto args = audit_args(tmp, "a");
  args.insert(args.end(), {"--algorithms", "mostpop,random"});
  const CliRun r = cli(tmp, args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(r.out), 3u);
  EXPECT_EQ(r.out.rfind("algorithm\t", 0), 0u);
  std::size_t json = 0;
  for (const auto& e : fs::directory_iterator(tmp / "a" / "reports")) json += e.path().extension() == ".json";
  EXPECT_EQ(json, 2u);

  // One scatter point per user with both ratios defined.
  for (const char* algo : {"MostPop", "Random"}) {
    const auto rows = io::read_file(tmp / "a" / "reports" / (std::string(algo) + "_per_user.tsv"));
    std::size_t both = 0;
    std::size_t start = rows.find('\n') + 1;
    for (std::size_t nl; (nl = rows.find('\n', start)) != std::string::npos; start = nl + 1) {
      const auto cells = split_tabs(rows.substr(start, nl - start));
      ASSERT_EQ(cells.size(), 5u);
      both += cells[1] != "NA" && cells[2] != "NA";
    }
    EXPECT_GT(both, 0u);
    const auto svg = io::read_file(tmp / "a" / "figures" / ("scatter_" + std::string(algo) + ".svg"));
    EXPECT_EQ(testing::count_occurrences(svg, "<circle"), both) << algo;
  }

  const CliRun rep = cli(tmp, {"report", "--dir", (tmp / "a").string()});
  EXPECT_EQ(rep.code, 0);
  EXPECT_EQ(rep.out, "figures\t4\n");
}

TEST(Cli, MatchesLibraryByteForByte) {
  TempDir tmp;
  synth(tmp);
  auto args = audit_args(tmp, "cli");
  args.insert(args.end(), {"--algorithms", "mostpop,userknn,bpr", "--k", "5", "--seed", "11"});
  ASSERT_EQ(cli(tmp, args).code, 0);

  config::RunConfig c;
  c.ratings = (tmp / "data" / "ratings.tsv").string();
  c.catalog = (tmp / "data" / "catalog.tsv").string();
  c.algorithms = {recsys::Kind::kMostPop, recsys::Kind::kUserKnn, recsys::Kind::kBpr};
  c.k = 5;
  c.seed = 11;
  c.output_dir = (tmp / "lib").string();
  pipeline::run_audit(c, 3);
  for (const auto& e : fs::recursive_directory_iterator(tmp / "cli")) {
    if (!e.is_regular_file() || e.path().filename() == "effective_config.toml") continue;
    const auto rel = fs::relative(e.path(), tmp / "cli");
    EXPECT_EQ(io::read_file(e.path()), io::read_file(tmp / "lib" / rel)) << rel;
  }
}

TEST(Cli, EffectiveConfigReproducesRun) {
  TempDir tmp;
  synth(tmp);
  auto args = audit_args(tmp, "first");
  args.insert(args.end(), {"--algorithms", "mostpop,random,mf", "--stratified", "--target", "GB"});
  ASSERT_EQ(cli(tmp, args).code, 0);
  const CliRun second = cli(tmp, {"audit", "--config", (tmp / "first" / "effective_config.toml").string(),
                               "--out", (tmp / "second").string()});
  ASSERT_EQ(second.code, 0) << second.err;
  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(tmp / "first")) {
    if (!e.is_regular_file() || e.path().filename() == "effective_config.toml") continue;
    const auto rel = fs::relative(e.path(), tmp / "first");
    EXPECT_EQ(io::read_file(e.path()), io::read_file(tmp / "second" / rel)) << rel;
    ++compared;
  }
  EXPECT_GE(compared, 14u);
}

TEST(Cli, StrictDivergenceExits3) {
  TempDir tmp;
  synth(tmp);
  io::write_file(tmp / "c.toml", "[algorithm.MF]\nlr = 1e9\n");
  auto args = audit_args(tmp, "s");
  args.insert(args.end(), {"--config", (tmp / "c.toml").string(), "--algorithms", "mostpop,mf"});
  auto strict = args;
  strict.push_back("--strict");
  const CliRun r = cli(tmp, strict);
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_FALSE(fs::exists(tmp / "s" / "reports"));

  const CliRun lenient = cli(tmp, args);
  EXPECT_EQ(lenient.code, 0);
  EXPECT_NE(lenient.err.find("MF"), std::string::npos);
  EXPECT_EQ(line_count(lenient.out), 2u);
}

TEST(Cli, IngestAndLink) {
  TempDir tmp;
  io::write_file(tmp / "r.tsv", "user_id\titem_id\trating\nu1\ti1\t4\nu1\ti2\t5\nu2\ti1\t3\n");
  const CliRun r = cli(tmp, {"ingest", "--format", "generic", "--ratings", (tmp / "r.tsv").string(),
                          "--min-user-ratings", "1", "--min-item-ratings", "1", "--out",
                          (tmp / "ing").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("stage\tratings\tusers\titems\n", 0), 0u);
  EXPECT_NE(r.out.find("\t3\t2\t2\n"), std::string::npos) << r.out;

  io::write_file(tmp / "empty.tsv", "");
  const CliRun l = cli(tmp, {"link", "--catalog", (tmp / "ing" / "catalog.tsv").string(), "--isbn-authors",
                          (tmp / "empty.tsv").string(), "--viaf", (tmp / "empty.tsv").string(),
                          "--wikidata", (tmp / "empty.tsv").string(), "--out", (tmp / "ln").string()});
  EXPECT_EQ(l.code, 0) << l.err;
  EXPECT_NE(l.out.find("\"coverage\""), std::string::npos);
}

}  // namespace
}  // namespace biaslens
