// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_PARALLEL_H_
#define BIASLENS_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace biaslens {

// Calls fn(i) for every i in [0, n) on up to `threads` std::threads, handing
// out indices in ascending order. The first exception (by index) is
// rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

// BIASLENS_THREADS when set to a positive integer, else the hardware
// concurrency (at least 1).
std::size_t default_thread_count();

}  // namespace biaslens

#endif  // BIASLENS_PARALLEL_H_
