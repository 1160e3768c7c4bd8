// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qnoma/params.hpp"

namespace qnoma {

struct TimingStats {
  double mean_us = 0.0;
  double std_us = 0.0;
};

struct BenchRow {
  std::size_t n_devices = 0;
  TimingStats tdma;
  TimingStats greedy;
  TimingStats sca;
};

struct BenchOptions {
  std::size_t repetitions = 30;
  // Timed calls per instance; the per-call mean is one sample.
  std::size_t inner_calls = 0;  // 0 picks a per-scheme default
  std::uint64_t seed = 7;
};

/// For each N, times only the allocator call (greedy, SCA, TDMA) on the same
/// random all-offload frame states, one state per repetition.
std::vector<BenchRow> run_bench(std::span<const std::size_t> n_values, const SystemParams& base,
                                const BenchOptions& options = {});

}  // namespace qnoma
