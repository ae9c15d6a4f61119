// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "biaslens/audit.h"
#include "biaslens/matrix.h"
#include "biaslens/recsys.h"
#include "biaslens/stats.h"
#include "biaslens/synthetic.h"
#include "biaslens/text.h"

namespace {

using namespace biaslens;

const audit::SyntheticData& dataset() {
  static const audit::SyntheticData data = [] {
    audit::SyntheticConfig c;
    c.n_users = 1000;
    c.n_items = 2000;
    c.seed = 1;
    return audit::generate_synthetic(c);
  }();
  return data;
}

std::shared_ptr<const InteractionMatrix> train() {
  static const auto m = std::make_shared<const InteractionMatrix>(InteractionMatrix::build(dataset().interactions));
  return m;
}

void BM_BuildMatrix(benchmark::State& state) {
  const auto& rows = dataset().interactions;
  for (auto _ : state) benchmark::DoNotOptimize(InteractionMatrix::build(rows));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows.size()));
}
BENCHMARK(BM_BuildMatrix)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const auto kind = recsys::all_kinds()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(recsys::kind_name(kind)));
  for (auto _ : state) benchmark::DoNotOptimize(recsys::fit(recsys::AlgorithmSpec(kind, {}, 3), train()));
}
BENCHMARK(BM_Fit)->DenseRange(0, 10)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_RecommendTopK(benchmark::State& state) {
  const auto kind = recsys::all_kinds()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(recsys::kind_name(kind)));
  const auto model = recsys::fit(recsys::AlgorithmSpec(kind, {}, 3), train());
  Index u = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(recsys::recommend_top_k(model, u, 10));
    u = (u + 1) % model.n_users();
  }
}
BENCHMARK(BM_RecommendTopK)->Arg(0)->Arg(1)->Arg(9);

void BM_Welch(benchmark::State& state) {
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = double(k % 17);
    b[k] = double(k % 13) + 0.5;
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::welch_t_test(a, b));
}
BENCHMARK(BM_Welch)->Arg(1000)->Arg(100000);

void BM_FoldText(benchmark::State& state) {
  const std::string name = "Gabriel Garc\xC3\xAD" "a M\xC3\xA1rquez, Jr.";
  for (auto _ : state) benchmark::DoNotOptimize(text::fold(name));
}
BENCHMARK(BM_FoldText);

}  // namespace

BENCHMARK_MAIN();
