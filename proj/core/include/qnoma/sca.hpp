// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qnoma/noma.hpp"
#include "qnoma/params.hpp"

namespace qnoma {

// Successive convex approximation benchmark for the NOMA power subproblem.
//
// The objective over the offloading members (in decoding order) is written
// as a difference of concave terms,
//
//   F(P) = sum_k alpha_k [g_k(P) - l_k(P)] - sum_k beta_k P_k,
//   g_k  = log2(N0 + sum_{j >= k} P_j h_j),
//   l_k  = log2(N0 + sum_{j >  k} P_j h_j),
//
// with alpha_k = (Q_k + V c_k) eta_q W / v_u and beta_k = nu Y_k. Each
// iteration replaces l_k by its tangent plane at the current iterate and
// maximizes the resulting concave surrogate over the box 0 <= P <= P_max and
// the linear rate constraints P_k h_k - Gamma_k sum_{j>k} P_j h_j <= Gamma_k N0.

struct ScaIterate {
  std::vector<double> power_P;
  double true_objective = 0.0;
  double surrogate_objective = 0.0;
  double step_norm = 0.0;
  std::size_t iteration_k = 0;
};

/// Tangent data of every l_k at an anchor point.
struct LinearizedL {
  std::vector<double> anchor_P;
  std::vector<double> values;               // l_k(P_anchor)
  std::vector<std::vector<double>> gradient;  // gradient[k][j] = dl_k/dP_j
};

struct ScaResult {
  std::vector<double> powers_P;
  std::vector<ScaIterate> trace;  // trace[0] is the initial point
  std::size_t iterations = 0;
  bool converged = false;
};

/// Thrown when the interior-point solver exhausts its iteration budget.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const std::vector<double>& best_iterate() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

/// alpha_k of member k.
double sca_alpha(const PowerSubproblem& sp, std::size_t k);

/// F(P) evaluated in difference-of-logs form.
double dc_objective(std::span<const double> P, const PowerSubproblem& sp);
/// F(P) evaluated as sum alpha log2(1 + SINR) - beta P.
double direct_objective(std::span<const double> P, const PowerSubproblem& sp);

/// l_k(P) for every member.
std::vector<double> l_values(std::span<const double> P, const PowerSubproblem& sp);

LinearizedL linearize_l(std::span<const double> anchor_P, const PowerSubproblem& sp);

/// Tangent upper bound of l_k at P.
double linearized_l_value(const LinearizedL& lin, std::size_t k, std::span<const double> P);

/// Concave surrogate sum alpha (g - l~) - sum beta P.
double surrogate_objective(std::span<const double> P, const LinearizedL& lin,
                           const PowerSubproblem& sp);

/// Largest violation of the box and linear rate constraints (0 if feasible).
double max_constraint_violation(std::span<const double> P, const PowerSubproblem& sp);

/// Uniform start c * P_max with the largest c in [1e-6, 1] keeping every
/// rate constraint strictly satisfied; members with Gamma = 0 get 0.
std::vector<double> uniform_feasible_start(const PowerSubproblem& sp);

/// Maximizes the surrogate anchored at lin.anchor_P with a log-barrier
/// interior-point method. Returns the anchor itself if the solver cannot
/// improve on it. Throws SolverError on Newton iteration exhaustion.
std::vector<double> solve_convex_subproblem(const LinearizedL& lin, const PowerSubproblem& sp,
                                            double tolerance = 1e-9);

/// Full SCA loop: uniform feasible start, then linearize/solve until
/// |F(P^{k+1}) - F(P^k)| <= tol_eps or k_max iterations.
ScaResult sca_power_allocation(const PowerSubproblem& sp, const ScaConfig& cfg = {});

/// SCA counterpart of allocate().
Allocation sca_allocate(const Decision& x, const FrameObservation& obs, const SystemParams& p);

}  // namespace qnoma
