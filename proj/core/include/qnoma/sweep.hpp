// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qnoma/params.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

enum class SweepField { Lambda, PQlc, V, Nu, NDevices };

std::string_view sweep_field_name(SweepField f) noexcept;
/// lambda, p_qlc, V, nu, n_devices. Throws std::invalid_argument otherwise.
SweepField parse_sweep_field(std::string_view name);

struct SweepSpec {
  SweepField swept_field = SweepField::Lambda;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<Scheme> schemes{Scheme::NomaHeuristic};
  std::size_t horizon_K = 10000;
  double warmup_fraction = 0.5;
  SystemParams base;
  // 0 uses std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::NomaHeuristic;
  RunMetrics full;
  RunMetrics steady;
};

/// Params with one field replaced. lambda is in bit/s; uniform across devices.
SystemParams apply_sweep_value(const SystemParams& base, SweepField field, double value);

/// Throws std::invalid_argument on empty values/seeds/schemes or invalid
/// swept values.
void validate_sweep(const SweepSpec& spec);

/// Independent runs per (scheme, value, seed), in that nesting order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Seed means of the steady-state metrics, one row per (scheme, value).
std::vector<SweepRow> aggregate_seeds(const std::vector<SweepRow>& rows);

}  // namespace qnoma
