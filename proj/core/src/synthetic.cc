// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biaslens/error.h"
#include "biaslens/rng.h"

namespace biaslens::audit {

namespace {

constexpr std::size_t kMinActivity = 5;
constexpr std::size_t kMaxActivity = 200;
constexpr const char* kOtherCountries[] = {"GB", "CA", "DE", "FR", "IE", "AU", "IN", "ES", "IT",
                                           "SE"};

std::string padded_id(char prefix, std::size_t n, std::size_t total) {
  std::string digits = std::to_string(n);
  const std::size_t width = std::max<std::size_t>(4, std::to_string(total).size());
  return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

void SyntheticConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (n_users < 1) fail("users must be >= 1");
  if (n_items < kMinActivity) fail("items must be >= " + std::to_string(kMinActivity));
  if (!(zipf_s > 0.0) || !std::isfinite(zipf_s)) fail("zipf exponent must be > 0");
  if (!(target_fraction >= 0.0 && target_fraction <= 1.0)) fail("target fraction must be in [0, 1]");
  if (!(bias_strength >= 0.0 && bias_strength <= 1.0)) fail("bias strength must be in [0, 1]");
  if (target_country.empty()) fail("target country must be set");
}

SyntheticData generate_synthetic(const SyntheticConfig& c) {
  c.validate();
  const std::size_t n = c.n_items;
  const double nd = static_cast<double>(n);

  // rank_of[item]: 0 is the most popular.
  SeededRng rank_rng(c.seed, "synth/rank");
  std::vector<std::size_t> rank_of(n);
  std::iota(rank_of.begin(), rank_of.end(), 0);
  rank_rng.shuffle(rank_of);
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = std::pow(static_cast<double>(rank_of[i] + 1), -c.zipf_s);
  }

  SeededRng target_rng(c.seed, "synth/target");
  std::vector<std::pair<double, std::size_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double top = 1.0 - static_cast<double>(rank_of[i]) / nd;
    keys[i] = {c.bias_strength * top + (1.0 - c.bias_strength) * target_rng.uniform(), i};
  }
  std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  const auto n_target = static_cast<std::size_t>(std::llround(c.target_fraction * nd));
  std::vector<char> is_target(n, 0);
  for (std::size_t k = 0; k < n_target; ++k) is_target[keys[k].second] = 1;

  SyntheticData out;
  SeededRng country_rng(c.seed, "synth/country");
  for (std::size_t i = 0; i < n; ++i) {
    ItemRecord item;
    item.item_id = padded_id('i', i + 1, n);
    item.title = "Synthetic Book " + std::to_string(i + 1);
    item.author_raw = "Author " + std::to_string(i + 1);
    item.author_validated = item.author_raw;
    item.author_confirmed = true;
    item.author_key = "author " + std::to_string(i + 1);

    AuthorRecord author;
    author.author_key = *item.author_key;
    author.display_name = item.author_raw;
    author.wikidata_id = "Q" + std::to_string(i + 1);
    author.link_status = LinkStatus::kWikidataLinked;
    author.countries.insert(is_target[i] ? c.target_country
                                         : kOtherCountries[country_rng.uniform_index(
                                               std::size(kOtherCountries))]);
    out.authors.emplace(author.author_key, std::move(author));
    out.items.push_back(std::move(item));
  }

  SeededRng activity_rng(c.seed, "synth/activity");
  SeededRng pick_rng(c.seed, "synth/pick");
  SeededRng rating_rng(c.seed, "synth/rating");
  const std::size_t cap = std::min(kMaxActivity, n);
  std::vector<std::size_t> per_item(n, 0);
  std::vector<std::size_t> per_user(c.n_users, 0);
  std::vector<std::pair<double, std::size_t>> draw(n);
  auto rating_for = [&](std::size_t item) {
    const double mean = 6.0 + 2.0 * (1.0 - static_cast<double>(rank_of[item]) / nd);
    return static_cast<int>(std::clamp(std::llround(rating_rng.normal(mean, 2.0)), 1LL, 10LL));
  };

  for (std::size_t u = 0; u < c.n_users; ++u) {
    const double raw = std::exp(activity_rng.normal(std::log(15.0), 0.8));
    const auto count =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(raw)), kMinActivity, cap);
    // Weighted sampling without replacement (Efraimidis-Spirakis keys).
    for (std::size_t i = 0; i < n; ++i) {
      double r = pick_rng.uniform();
      while (r <= 0.0) r = pick_rng.uniform();
      draw[i] = {std::log(r) / weight[i], i};
    }
    std::partial_sort(draw.begin(), draw.begin() + count, draw.end(),
                      [](const auto& a, const auto& b) {
                        return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });
    const std::string user_id = padded_id('u', u + 1, c.n_users);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t i = draw[k].second;
      ++per_item[i];
      out.interactions.push_back({user_id, out.items[i].item_id, rating_for(i)});
    }
    per_user[u] = count;
  }

  SeededRng cover_rng(c.seed, "synth/cover");
  for (std::size_t i = 0; i < n; ++i) {
    if (per_item[i] > 0) continue;
    // Nobody rated i yet; prefer a user below the activity cap.
    std::size_t u = cover_rng.uniform_index(c.n_users);
    for (std::size_t step = 0; step < c.n_users && per_user[u] >= kMaxActivity; ++step) {
      u = (u + 1) % c.n_users;
    }
    ++per_user[u];
    ++per_item[i];
    out.interactions.push_back({padded_id('u', u + 1, c.n_users), out.items[i].item_id,
                                rating_for(i)});
  }
  return out;
}

}  // namespace biaslens::audit
