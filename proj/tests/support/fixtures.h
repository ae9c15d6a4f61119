// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_TESTS_SUPPORT_FIXTURES_H_
#define BIASLENS_TESTS_SUPPORT_FIXTURES_H_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "biaslens/matrix.h"
#include "biaslens/recsys.h"
#include "biaslens/rng.h"
#include "biaslens/types.h"

namespace biaslens::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("biaslens-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string user_name(std::size_t u) { return "u" + std::to_string(u); }
inline std::string item_name(std::size_t i) { return "i" + std::to_string(i); }

// Random ratings in 1..10 where every user and every item appears at least
// once. User user_name(u) gets index u.
inline std::vector<Interaction> random_interactions(std::size_t n_users, std::size_t n_items,
                                                    double density, std::uint64_t seed) {
  SeededRng rng(seed, "fixture");
  std::vector<std::vector<bool>> on(n_users, std::vector<bool>(n_items, false));
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t i = 0; i < n_items; ++i) on[u][i] = rng.uniform() < density;
    on[u][rng.uniform_index(n_items)] = true;
  }
  for (std::size_t i = 0; i < n_items; ++i) {
    bool any = false;
    for (std::size_t u = 0; u < n_users; ++u) any = any || on[u][i];
    if (!any) on[rng.uniform_index(n_users)][i] = true;
  }
  std::vector<Interaction> out;
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t i = 0; i < n_items; ++i) {
      if (on[u][i]) {
        out.push_back({user_name(u), item_name(i), 1 + static_cast<int>(rng.uniform_index(10))});
      }
    }
  }
  return out;
}

inline std::shared_ptr<const InteractionMatrix> matrix_of(const std::vector<Interaction>& rows) {
  return std::make_shared<const InteractionMatrix>(InteractionMatrix::build(rows));
}

inline std::shared_ptr<const InteractionMatrix> random_matrix(std::size_t n_users,
                                                              std::size_t n_items, double density,
                                                              std::uint64_t seed) {
  return matrix_of(random_interactions(n_users, n_items, density, seed));
}

// Every cell of a users x items grid, rating from `value(u, i)`.
inline std::vector<Interaction> dense_interactions(
    std::size_t n_users, std::size_t n_items, const std::function<int(std::size_t, std::size_t)>& value) {
  std::vector<Interaction> out;
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t i = 0; i < n_items; ++i) out.push_back({user_name(u), item_name(i), value(u, i)});
  }
  return out;
}

// Full scan over score(), then sort by (score desc, item asc).
inline std::vector<recsys::Recommendation> brute_force_top_k(const recsys::FittedModel& model,
                                                             Index user, std::size_t k,
                                                             bool exclude_seen) {
  std::vector<recsys::Recommendation> all;
  for (Index i = 0; i < model.n_items(); ++i) {
    if (exclude_seen && model.train().rating(user, i)) continue;
    all.push_back({i, model.score(user, i)});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

struct GradCheck {
  double max_rel = 0.0;
  double max_abs_tiny = 0.0;  // largest |diff| among entries where both sides are ~0
  std::size_t checked = 0;
};

// Compares analytic[i] against a central difference of `loss` in the scalar
// `params[i]`, for every i.
inline void grad_check(std::span<double> params, std::span<const double> analytic,
                       const std::function<double()>& loss, GradCheck& out, double h = 1e-5) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double up = loss();
    params[i] = saved - h;
    const double down = loss();
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic[i];
    const double scale = std::max(std::abs(a), std::abs(numeric));
    if (scale < 1e-7) {
      out.max_abs_tiny = std::max(out.max_abs_tiny, std::abs(a - numeric));
    } else {
      out.max_rel = std::max(out.max_rel, std::abs(a - numeric) / scale);
    }
    ++out.checked;
  }
}

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Textbook Welch statistic and Welch-Satterthwaite degrees of freedom.
struct NaiveWelch {
  double t;
  double df;
};

inline NaiveWelch naive_welch(std::span<const double> a, std::span<const double> b) {
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na, vb = sample_variance(b) / nb;
  const double t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  const double df = (va + vb) * (va + vb) / (va * va / (na - 1) + vb * vb / (nb - 1));
  return {t, df};
}

// Two-sided Student t tail by Simpson integration of the density over
// [0, |t|]; accurate to about 1e-9 for moderate t.
inline double numeric_t_two_sided_p(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const double b = std::abs(t);
  const int n = 20000;
  const double h = b / n;
  double s = f(0) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return 1.0 - 2.0 * (s * h / 3.0);
}

}  // namespace biaslens::testing

#endif  // BIASLENS_TESTS_SUPPORT_FIXTURES_H_
