// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/noma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qnoma/objective.hpp"
#include "qnoma/queues.hpp"

namespace qnoma {

double local_frequency(double queue, double weight_c, double energy_queue, double f_max,
                       const SystemParams& p) {
  const double cap = std::min(p.cycles_per_unit() * queue, f_max);
  if (cap <= 0.0) return 0.0;
  const double energy_weight = p.nu * energy_queue;
  if (energy_weight < kZeroEnergyWeight) return cap;
  const double reward_weight = queue + p.V * weight_c;
  if (reward_weight <= 0.0) return 0.0;
  const double stationary =
      std::sqrt(reward_weight / (3.0 * p.cycles_per_unit() * p.energy_eff_kappa * energy_weight));
  return std::min(stationary, cap);
}

PowerSubproblem build_subproblem(const Decision& x, const FrameObservation& obs,
                                 const SystemParams& p) {
  const std::size_t n = obs.size();
  if (x.size() != n || obs.data_queue_Q.size() != n || obs.energy_queue_Y.size() != n) {
    throw std::invalid_argument("build_subproblem: dimension mismatch");
  }
  PowerSubproblem sp;
  sp.noise_N0 = p.noise_N0;
  sp.bandwidth_W = p.bandwidth_W;
  sp.overhead_vu = p.overhead_vu;
  sp.payload_eta_q = p.payload_eta_q;
  sp.rate_scale = p.offload_rate_scale();

  const auto order = decoding_order(obs.gains_h, x.offload_x);
  sp.members.reserve(order.size());
  const double payload_rate = p.payload_eta_q * sp.rate_scale;
  for (std::size_t i : order) {
    PowerSubproblem::Member m;
    m.device = i;
    m.gain_h = obs.gains_h[i];
    m.queue_Q = obs.data_queue_Q[i];
    m.coeff_a = p.payload_eta_q * (obs.data_queue_Q[i] + p.V * p.weights_c[i]);
    m.coeff_b = p.nu * obs.energy_queue_Y[i];
    const double e = std::numbers::ln2 * obs.data_queue_Q[i] / payload_rate;
    m.rate_cap_Gamma = e > 1.0 ? std::exp(e) - 1.0 : std::expm1(e);
    m.power_cap_Pmax = p.p_max[i];
    m.p_qlc = p.p_qlc[i];
    sp.members.push_back(m);
  }
  return sp;
}

double interference_product(std::span<const double> rho, std::size_t k, double noise_N0) {
  double product = 1.0;
  for (std::size_t j = k + 1; j < rho.size(); ++j) product *= 1.0 + rho[j];
  return noise_N0 * product;
}

double greedy_member_cap(const PowerSubproblem& sp, std::size_t k, double c_next) {
  const auto& m = sp.members[k];
  return std::min(m.rate_cap_Gamma, m.gain_h * m.power_cap_Pmax / (sp.noise_N0 * c_next));
}

double greedy_member_objective(const PowerSubproblem& sp, std::size_t k, double rho,
                               double c_next) {
  const auto& m = sp.members[k];
  return sp.log_weight(k) * std::log2(1.0 + rho) -
         m.coeff_b * rho * sp.noise_N0 * c_next / m.gain_h;
}

GreedySolution greedy_power_allocation(const PowerSubproblem& sp) {
  const std::size_t M = sp.size();
  GreedySolution sol;
  sol.rho.assign(M, 0.0);
  sol.cumulative_C.assign(M + 1, 1.0);
  sol.powers_P.assign(M, 0.0);

  for (std::size_t k = M; k-- > 0;) {
    const auto& m = sp.members[k];
    const double c_next = sol.cumulative_C[k + 1];
    const double cap = greedy_member_cap(sp, k, c_next);
    double rho;
    if (m.coeff_b < kZeroEnergyWeight) {
      // Objective is increasing in rho: take the boundary.
      rho = cap;
    } else {
      const double stationary =
          sp.log_weight(k) * m.gain_h /
              (std::numbers::ln2 * m.coeff_b * sp.noise_N0 * c_next) -
          1.0;
      rho = std::min(std::max(0.0, stationary), cap);
    }
    rho = std::max(rho, 0.0);
    sol.rho[k] = rho;
    sol.cumulative_C[k] = c_next * (1.0 + rho);
    ++sol.work_steps;
  }

  for (std::size_t k = 0; k < M; ++k) {
    const auto& m = sp.members[k];
    const double power = sol.rho[k] * sp.noise_N0 * sol.cumulative_C[k + 1] / m.gain_h;
    sol.powers_P[k] = std::min(power, m.power_cap_Pmax);
    ++sol.work_steps;
  }
  return sol;
}

Allocation assemble_allocation(const Decision& x, const FrameObservation& obs,
                               const SystemParams& p, const PowerSubproblem& sp,
                               std::span<const double> member_powers) {
  const std::size_t n = obs.size();
  if (member_powers.size() != sp.size()) {
    throw std::invalid_argument("assemble_allocation: one power per member expected");
  }
  Allocation alloc = Allocation::zeros(n);
  alloc.offload_x = x.offload_x;
  for (std::size_t i = 0; i < n; ++i) {
    if (!x.offloads(i)) {
      alloc.freq_f[i] = local_frequency(obs.data_queue_Q[i], p.weights_c[i],
                                        obs.energy_queue_Y[i], p.f_max[i], p);
    }
  }
  std::vector<std::size_t> order(sp.size());
  for (std::size_t k = 0; k < sp.size(); ++k) {
    order[k] = sp.members[k].device;
    alloc.power_P[order[k]] = member_powers[k];
  }

  RateEnergy re = rate_and_energy(x, alloc.freq_f, alloc.power_P, obs.gains_h, p, order);
  alloc.rate_r = std::move(re.rate_r);
  alloc.energy_e = std::move(re.energy_e);
  alloc.sinr_rho = std::move(re.sinr);
  alloc.objective = evaluate_objective(alloc, obs, p);
  return alloc;
}

Allocation allocate(const Decision& x, const FrameObservation& obs, const SystemParams& p) {
  const PowerSubproblem sp = build_subproblem(x, obs, p);
  const GreedySolution sol = greedy_power_allocation(sp);
  return assemble_allocation(x, obs, p, sp, sol.powers_P);
}

}  // namespace qnoma
