// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/tdma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qnoma/noma.hpp"
#include "qnoma/objective.hpp"

namespace qnoma {

namespace {

double tdma_rate(double power, double tau, double gain, const SystemParams& p) {
  return tau * p.payload_eta_q * p.offload_rate_scale() * std::log1p(power * gain / p.noise_N0) /
         std::numbers::ln2;
}

}  // namespace

TdmaShare tdma_share(const Decision& x) {
  TdmaShare share;
  share.offloaders = x.offload_count();
  share.tau = share.offloaders == 0 ? 0.0 : 1.0 / static_cast<double>(share.offloaders);
  return share;
}

double tdma_user_objective(double power, double tau, double gain, double queue, double weight_c,
                           double energy_queue, double p_qlc, const SystemParams& p) {
  return (queue + p.V * weight_c) * tdma_rate(power, tau, gain, p) -
         p.nu * energy_queue * tau * (power + p_qlc);
}

double tdma_rate_cap_power(double tau, double gain, double queue, const SystemParams& p) {
  if (queue <= 0.0 || tau <= 0.0) return 0.0;
  const double exponent = queue / (p.frame_T * tau * p.payload_eta_q * p.offload_rate_scale());
  return std::expm1(std::numbers::ln2 * exponent) * p.noise_N0 / gain;
}

double tdma_power(double tau, double gain, double queue, double weight_c, double energy_queue,
                  double p_max, const SystemParams& p) {
  const double cap = std::min(p_max, tdma_rate_cap_power(tau, gain, queue, p));
  if (cap <= 0.0) return 0.0;
  const double energy_weight = p.nu * energy_queue;
  if (energy_weight < kZeroEnergyWeight) return cap;
  const double stationary = (queue + p.V * weight_c) * p.payload_eta_q * p.offload_rate_scale() /
                                (std::numbers::ln2 * energy_weight) -
                            p.noise_N0 / gain;
  return std::clamp(stationary, 0.0, cap);
}

Allocation tdma_allocate(const Decision& x, const FrameObservation& obs, const SystemParams& p) {
  const std::size_t n = obs.size();
  if (x.size() != n) throw std::invalid_argument("tdma_allocate: dimension mismatch");
  const TdmaShare share = tdma_share(x);
  Allocation alloc = Allocation::zeros(n);
  alloc.offload_x = x.offload_x;
  for (std::size_t i = 0; i < n; ++i) {
    const double Q = obs.data_queue_Q[i];
    const double Y = obs.energy_queue_Y[i];
    if (x.offloads(i)) {
      const double h = obs.gains_h[i];
      const double P = tdma_power(share.tau, h, Q, p.weights_c[i], Y, p.p_max[i], p);
      alloc.power_P[i] = P;
      alloc.sinr_rho[i] = P * h / p.noise_N0;
      alloc.rate_r[i] = tdma_rate(P, share.tau, h, p);
      alloc.energy_e[i] = share.tau * (P + p.p_qlc[i]);
    } else {
      const double f = local_frequency(Q, p.weights_c[i], Y, p.f_max[i], p);
      alloc.freq_f[i] = f;
      alloc.rate_r[i] = f / p.cycles_per_unit();
      alloc.energy_e[i] = p.energy_eff_kappa * f * f * f;
    }
  }
  alloc.objective = evaluate_objective(alloc, obs, p);
  return alloc;
}

}  // namespace qnoma
