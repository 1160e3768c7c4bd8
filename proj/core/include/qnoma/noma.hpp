// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qnoma/params.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

/// Energy weights below this are treated as zero (pure rate maximization).
inline constexpr double kZeroEnergyWeight = 1e-18;

/// Optimal local CPU frequency for one device: the stationary point of
/// (Q + V c) f / phi - nu Y kappa f^3 clamped to [0, min(phi Q, f_max)].
double local_frequency(double queue, double weight_c, double energy_queue,
                       double f_max, const SystemParams& p);

/// Offloading-set view of a frame, members in SIC decoding order.
struct PowerSubproblem {
  struct Member {
    std::size_t device = 0;
    double gain_h = 0.0;
    double queue_Q = 0.0;
    double coeff_a = 0.0;         // eta_q (Q + V c)
    double coeff_b = 0.0;         // nu Y
    double rate_cap_Gamma = 0.0;  // 2^(Q / (eta_q * rate_scale)) - 1, may be +inf
    double power_cap_Pmax = 0.0;
    double p_qlc = 0.0;
  };

  std::vector<Member> members;
  double noise_N0 = 0.0;
  double bandwidth_W = 0.0;
  double overhead_vu = 1.0;
  double payload_eta_q = 1.0;
  // W / (v_u * data unit); with 1-bit units this is W / v_u.
  double rate_scale = 0.0;

  std::size_t size() const noexcept { return members.size(); }
  bool empty() const noexcept { return members.empty(); }
  /// Weight on log2(1 + rho) in member k's objective: a_k * rate_scale.
  double log_weight(std::size_t k) const { return members[k].coeff_a * rate_scale; }
};

/// All offloaders of x sorted by decoding order; empty when nobody offloads.
PowerSubproblem build_subproblem(const Decision& x, const FrameObservation& obs,
                                 const SystemParams& p);

/// N0 * prod_{j > k} (1 + rho_j) for 0-based member k.
double interference_product(std::span<const double> rho, std::size_t k, double noise_N0);

struct GreedySolution {
  std::vector<double> rho;
  // C[k] = prod_{j >= k} (1 + rho_j); C[M] = 1.
  std::vector<double> cumulative_C;
  std::vector<double> powers_P;
  // Loop iterations executed, for complexity checks.
  std::size_t work_steps = 0;
};

/// Member k's local objective a W/v_u log2(1 + rho) - b rho N0 C_{k+1} / h.
double greedy_member_objective(const PowerSubproblem& sp, std::size_t k, double rho,
                               double c_next);

/// Upper end of member k's feasible SINR interval given C_{k+1}:
/// min(Gamma, h P_max / (N0 C_{k+1})).
double greedy_member_cap(const PowerSubproblem& sp, std::size_t k, double c_next);

/// Backward pass from the weakest member fixing each SINR at its clamped
/// closed-form optimum, then a forward pass reconstructing powers.
GreedySolution greedy_power_allocation(const PowerSubproblem& sp);

/// Fills a full Allocation from per-member powers: local devices at their
/// optimal frequency, rates/energies via rate_and_energy, objective via
/// evaluate_objective. Rates are left unclamped; the simulator clamps them.
Allocation assemble_allocation(const Decision& x, const FrameObservation& obs,
                               const SystemParams& p, const PowerSubproblem& sp,
                               std::span<const double> member_powers);

/// Greedy NOMA allocation for decision x; the critic's inner solver.
Allocation allocate(const Decision& x, const FrameObservation& obs, const SystemParams& p);

}  // namespace qnoma
