// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_PIPELINE_H_
#define BIASLENS_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "biaslens/audit.h"
#include "biaslens/config.h"
#include "biaslens/ingest.h"
#include "biaslens/linker.h"
#include "biaslens/synthetic.h"

// Whole-command entry points. The CLI parses arguments into a RunConfig
// and calls these.
// Every command writes effective_config.toml into config.output_dir.
namespace biaslens::pipeline {

struct IngestSummary {
  std::vector<ingest::StageCount> stages;
  std::size_t rating_rejects = 0;
  std::size_t item_rejects = 0;
  std::size_t user_rejects = 0;
  std::size_t users_parsed = 0;
  ingest::CanonicalizeReport canonicalize;
  std::size_t duplicate_pairs = 0;
  std::size_t dedup_merges = 0;
  std::size_t orphans_dropped = 0;
};

// parse -> canonicalize -> dedup -> orphan drop -> preprocess. Writes
// ratings.tsv, catalog.tsv, stages.tsv, ingest_summary.json, merges.tsv and
// rejects_*.tsv.
IngestSummary run_ingest(const config::RunConfig& config);

// Enriches config.catalog with the three dumps. Writes catalog.tsv,
// link_log.tsv and linkage_stats.json.
linker::EnrichResult run_link(const config::RunConfig& config);

struct AlgorithmFailure {
  std::string algorithm;
  std::string message;
};

struct AuditOutcome {
  audit::SplitResult split;
  std::vector<audit::AuditReport> reports;  // selection order
  std::vector<AlgorithmFailure> failures;   // non-strict training failures
};

// split -> fit -> recommend -> metrics on config.ratings (generic TSV) and
// config.catalog. Writes split.json, summary.tsv, loss_traces.tsv,
// recs/<Kind>.tsv, reports/<Kind>.json, reports/<Kind>_per_user.tsv and the
// SVG figures. A diverging algorithm is skipped, or raises
// Error(kDivergenceDetected) before anything is written when
// config.strict is set.
AuditOutcome run_audit(const config::RunConfig& config, std::size_t threads);

// Writes ratings.tsv and catalog.tsv.
audit::SyntheticData run_synth(const config::RunConfig& config);

// Re-renders figures/ from the reports/ of an audit output directory.
// Returns the number of SVG files written.
std::size_t run_report(const std::filesystem::path& audit_dir);

void write_figures(const std::filesystem::path& dir, const std::vector<audit::AuditReport>& reports);

}  // namespace biaslens::pipeline

#endif  // BIASLENS_PIPELINE_H_
