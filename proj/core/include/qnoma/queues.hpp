// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qnoma/params.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

/// Relative overshoot of r*T over Q above which a clamp is reported.
inline constexpr double kCausalityWarnTolerance = 1e-9;

struct QueueState {
  std::vector<double> data_Q;
  std::vector<double> energy_Y;

  static QueueState initial(std::size_t n) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  }
};

struct RateEnergy {
  std::vector<double> rate_r;
  std::vector<double> energy_e;
  std::vector<double> sinr;
};

/// SIC decoding order of the offloading devices: descending gain, ties by
/// ascending device index. A device is interfered with only by devices that
/// come after it in this order.
std::vector<std::size_t> decoding_order(std::span<const double> gains,
                                        std::span<const std::uint8_t> offload_x);

/// Rates and powers of every device for the chosen execution modes.
/// Throws std::invalid_argument on negative f or P or length mismatch.
RateEnergy rate_and_energy(const Decision& x, std::span<const double> freq_f,
                           std::span<const double> power_P,
                           std::span<const double> gains, const SystemParams& p);

/// Same, with the decoding order of x's offloaders already known.
RateEnergy rate_and_energy(const Decision& x, std::span<const double> freq_f,
                           std::span<const double> power_P, std::span<const double> gains,
                           const SystemParams& p, std::span<const std::size_t> order);

struct ClampResult {
  double rate = 0.0;
  bool clamped = false;
  bool warned = false;  // overshoot beyond kCausalityWarnTolerance
};

ClampResult clamp_rate_to_queue(double rate, double queue, double frame_T = 1.0);

/// Q - D + A. Throws std::logic_error if D > Q or D < 0.
double step_data_queue(double queue, double processed, double arrived);

/// max(Y + nu (e - gamma), 0).
double step_energy_queue(double y, double energy, double gamma, double nu);

}  // namespace qnoma
