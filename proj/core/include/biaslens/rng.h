// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RNG_H_
#define BIASLENS_RNG_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace biaslens {

// Deterministic pseudorandom source: xoshiro256** seeded through SplitMix64
// from (seed, FNV-1a(stream label)). Every (algorithm, purpose) pair gets its
// own stream label. Distribution sampling is implemented here, not through
// <random> distributions.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::string_view stream);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  double normal(double mean, double stddev);
  // Gamma(shape, scale) via Marsaglia-Tsang.
  double gamma(double shape, double scale);

  // Independent child stream; does not advance this generator.
  SeededRng fork(std::string_view label) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_hash_;
  std::uint64_t s_[4];
};

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);

// Stateless hash of (seed, a, b) mapped to [0, 1). Used where a value must be
// reproducible without drawing from a sequential stream.
double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace biaslens

#endif  // BIASLENS_RNG_H_
