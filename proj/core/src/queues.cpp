// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/queues.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace qnoma {

std::vector<std::size_t> decoding_order(std::span<const double> gains,
                                        std::span<const std::uint8_t> offload_x) {
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (offload_x[i] != 0) keyed.emplace_back(-gains[i], i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> order(keyed.size());
  for (std::size_t k = 0; k < keyed.size(); ++k) order[k] = keyed[k].second;
  return order;
}

RateEnergy rate_and_energy(const Decision& x, std::span<const double> freq_f,
                           std::span<const double> power_P, std::span<const double> gains,
                           const SystemParams& p) {
  return rate_and_energy(x, freq_f, power_P, gains, p, decoding_order(gains, x.offload_x));
}

RateEnergy rate_and_energy(const Decision& x, std::span<const double> freq_f,
                           std::span<const double> power_P, std::span<const double> gains,
                           const SystemParams& p, std::span<const std::size_t> order) {
  const std::size_t n = x.size();
  if (freq_f.size() != n || power_P.size() != n || gains.size() != n || p.f_max.size() != n) {
    throw std::invalid_argument("rate_and_energy: dimension mismatch");
  }
  RateEnergy out;
  out.rate_r.assign(n, 0.0);
  out.energy_e.assign(n, 0.0);
  out.sinr.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (freq_f[i] < 0.0 || power_P[i] < 0.0) {
      throw std::invalid_argument("rate_and_energy: negative frequency or power at device " +
                                  std::to_string(i));
    }
    if (!x.offloads(i)) {
      out.rate_r[i] = freq_f[i] / p.cycles_per_unit();
      out.energy_e[i] = p.energy_eff_kappa * freq_f[i] * freq_f[i] * freq_f[i];
    }
  }

  // Walk from the weakest offloader up, accumulating received power that
  // has not been cancelled yet.
  const double scale = p.payload_eta_q * p.offload_rate_scale();
  double residual = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t i = *it;
    const double received = power_P[i] * gains[i];
    const double sinr = received / (p.noise_N0 + residual);
    out.sinr[i] = sinr;
    out.rate_r[i] = scale * std::log2(1.0 + sinr);
    out.energy_e[i] = power_P[i] + p.p_qlc[i];
    residual += received;
  }
  return out;
}

ClampResult clamp_rate_to_queue(double rate, double queue, double frame_T) {
  ClampResult r{rate, false, false};
  const double processed = rate * frame_T;
  if (processed > queue) {
    r.rate = queue / frame_T;
    r.clamped = true;
    r.warned = processed - queue > kCausalityWarnTolerance * std::max(queue, 1e-300);
  }
  return r;
}

double step_data_queue(double queue, double processed, double arrived) {
  if (processed < 0.0 || processed > queue) {
    throw std::logic_error("step_data_queue: processed " + std::to_string(processed) +
                           " outside [0, " + std::to_string(queue) + "]");
  }
  return queue - processed + arrived;
}

double step_energy_queue(double y, double energy, double gamma, double nu) {
  return std::max(y + nu * (energy - gamma), 0.0);
}

}  // namespace qnoma
