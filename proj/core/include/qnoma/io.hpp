// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qnoma/bench.hpp"
#include "qnoma/params.hpp"
#include "qnoma/sca.hpp"
#include "qnoma/sim.hpp"
#include "qnoma/sweep.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

inline constexpr int kOutputSchemaVersion = 1;

/// Shortest decimal that parses back to exactly v.
std::string format_double(double v);

/// "# qnoma kind=<kind> schema=1 config_hash=<hash> seed=<seed>"
std::string artifact_header(std::string_view kind, const SystemParams& p, std::uint64_t seed);

/// One row per frame:
///   t, Q_0..Q_{N-1}, Y_*, h_*, x_*, f_*, P_*, r_*, e_*, A_*,
///   objective, M_t, chosen_index, loss
/// loss is empty on frames without a training step.
void write_frames_csv(std::ostream& os, std::span<const FrameRecord> frames,
                      const SystemParams& p, std::uint64_t seed);
std::vector<std::string> frames_csv_columns(std::size_t n_devices);

/// Parses a frames.csv written by write_frames_csv (header comment skipped).
/// SINR is not stored and comes back as zeros. Throws std::runtime_error on
/// malformed input.
std::vector<FrameRecord> read_frames_csv(std::istream& is, std::size_t n_devices);

std::string summary_json(const RunResult& result, Scheme scheme, const SystemParams& p,
                         std::uint64_t seed, std::size_t horizon);

/// One row per (scheme, value, seed); with aggregated=true the seed column
/// reads "mean".
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, SweepField field,
                     const SystemParams& p, bool aggregated = false);

/// t, then per scheme: mean Q, mean power, weighted rate, objective.
void write_compare_csv(std::ostream& os, std::span<const Scheme> schemes,
                       std::span<const RunResult> runs, const SystemParams& p, std::uint64_t seed);

/// N, TDMA, NOMA_Heuristic, NOMA_SCA mean microseconds.
void write_bench_csv(std::ostream& os, std::span<const BenchRow> rows, const SystemParams& p,
                     std::uint64_t seed);
/// Same rows with mean and standard deviation per scheme.
void write_bench_detail_csv(std::ostream& os, std::span<const BenchRow> rows,
                            const SystemParams& p, std::uint64_t seed);

/// k, F, surrogate, step_norm.
void write_sca_trace_csv(std::ostream& os, const ScaResult& result);

}  // namespace qnoma
