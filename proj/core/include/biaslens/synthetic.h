// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_SYNTHETIC_H_
#define BIASLENS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "biaslens/linker.h"
#include "biaslens/types.h"

namespace biaslens::audit {

struct SyntheticConfig {
  std::size_t n_users = 1000;
  std::size_t n_items = 2000;
  double zipf_s = 1.1;
  double target_fraction = 0.685;
  // 0: target membership independent of popularity; 1: the most popular
  // items are exactly the target items.
  double bias_strength = 0.8;
  std::uint64_t seed = 0;
  std::string target_country = "US";

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct SyntheticData {
  std::vector<Interaction> interactions;
  std::vector<ItemRecord> items;
  linker::AuthorTable authors;
};

// Item weights follow Zipf(s) over a seeded popularity ranking. Exactly
// round(target_fraction * n_items) items get the target country, chosen by
// the largest keys bias * (1 - rank / n) + (1 - bias) * U(0, 1). Each user
// rates between 5 and 200 distinct items (log-normal, mean about 20) drawn
// by weight without replacement; ratings are
// clamp(round(N(6 + 2 * (1 - rank / n), 2)), 1, 10). Items left unrated
// get one rating from a random user, preferring users below the cap, so
// every user and item appears.
SyntheticData generate_synthetic(const SyntheticConfig& config);

}  // namespace biaslens::audit

#endif  // BIASLENS_SYNTHETIC_H_
