// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_STATS_H_
#define BIASLENS_STATS_H_

#include <cstddef>
#include <span>

namespace biaslens::stats {

double digamma(double x);

// I_x(a, b), evaluated with the modified Lentz continued fraction. Uses the
// symmetry I_x(a, b) = 1 - I_{1-x}(b, a) when x > (a + 1) / (a + b + 2) so
// the fraction converges quickly.
double regularized_incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom (df may be
// fractional).
double student_t_two_sided_p(double t, double df);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

// Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom.
// t > 0 when mean(a) > mean(b). Throws Error(kDegenerateGroup) if a group has
// fewer than two values or both groups have zero variance.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace biaslens::stats

#endif  // BIASLENS_STATS_H_
