// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_SVG_H_
#define BIASLENS_SVG_H_

#include <string>
#include <string_view>
#include <vector>

#include "biaslens/audit.h"

// Self-contained SVG charts for audit reports. Output depends only on the
// inputs.
namespace biaslens::svg {

std::string escape(std::string_view s);

// Grouped bars: average profile ratio vs average recommendation ratio per
// algorithm.
std::string ratio_bars(const std::vector<audit::AuditReport>& reports, std::string_view target);

// One bar per algorithm: relative increase of average popularity (%).
std::string delta_gap_bars(const std::vector<audit::AuditReport>& reports);

// One <circle> per user with both ratios defined; x = profile ratio,
// y = recommendation ratio.
std::string user_scatter(const audit::AuditReport& report, std::string_view target);

}  // namespace biaslens::svg

#endif  // BIASLENS_SVG_H_
