// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qnoma {

enum class Scheme { NomaHeuristic, NomaSca, Tdma };

std::string_view scheme_name(Scheme s) noexcept;
/// Accepts the canonical names (NOMA_Heuristic, NOMA_SCA, TDMA) and the
/// lower-case aliases heuristic, sca, tdma.
Scheme parse_scheme(std::string_view name);

/// Per-frame environment state seen by the actor and the allocators.
struct FrameObservation {
  std::size_t frame_t = 0;
  std::vector<double> gains_h;
  std::vector<double> data_queue_Q;    // data units
  std::vector<double> energy_queue_Y;

  std::size_t size() const noexcept { return gains_h.size(); }
};

/// Binary offloading vector; 1 means edge execution.
struct Decision {
  std::vector<std::uint8_t> offload_x;

  Decision() = default;
  explicit Decision(std::vector<std::uint8_t> x) : offload_x(std::move(x)) {}
  static Decision all_local(std::size_t n) { return Decision(std::vector<std::uint8_t>(n, 0)); }
  static Decision all_offload(std::size_t n) { return Decision(std::vector<std::uint8_t>(n, 1)); }
  /// Bit i of mask sets device i.
  static Decision from_mask(std::uint64_t mask, std::size_t n);

  std::size_t size() const noexcept { return offload_x.size(); }
  bool offloads(std::size_t i) const { return offload_x.at(i) != 0; }
  std::size_t offload_count() const noexcept;

  friend bool operator==(const Decision&, const Decision&) = default;
};

struct Allocation {
  std::vector<std::uint8_t> offload_x;
  std::vector<double> freq_f;    // cycles/s
  std::vector<double> power_P;   // W
  std::vector<double> sinr_rho;
  std::vector<double> rate_r;    // data units/s
  std::vector<double> energy_e;  // W
  double objective = 0.0;

  static Allocation zeros(std::size_t n);
  std::size_t size() const noexcept { return rate_r.size(); }
};

struct FrameRecord {
  std::size_t frame_t = 0;
  FrameObservation observation;
  std::vector<double> arrivals_A;  // data units
  Allocation allocation;
  std::size_t chosen_candidate_index = 0;
  std::size_t num_candidates_Mt = 1;
  std::optional<double> training_loss;
  Scheme scheme_tag = Scheme::NomaHeuristic;
};

struct RunMetrics {
  double avg_data_queue = 0.0;
  double avg_energy_queue = 0.0;
  std::vector<double> avg_power_per_device;
  double avg_power = 0.0;
  double weighted_sum_rate = 0.0;
  double offload_ratio = 0.0;
  double wall_time_per_frame_us = 0.0;
  std::size_t first_frame = 0;
  std::size_t frame_count = 0;
};

}  // namespace qnoma
