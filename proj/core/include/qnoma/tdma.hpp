// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "qnoma/params.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

/// Equal time shares for the offloaders of one frame.
struct TdmaShare {
  double tau = 0.0;  // 1 / |offloaders|, or 0 when nobody offloads
  std::size_t offloaders = 0;
};

TdmaShare tdma_share(const Decision& x);

/// tau-scaled single-user objective of the TDMA baseline,
/// (Q + V c) r(P) - nu Y tau (P + P_qlc) with r = tau eta_q W/v_u log2(1 + P h / N0).
double tdma_user_objective(double power, double tau, double gain, double queue,
                           double weight_c, double energy_queue, double p_qlc,
                           const SystemParams& p);

/// Largest power keeping r * T <= Q for a user holding share tau.
double tdma_rate_cap_power(double tau, double gain, double queue, const SystemParams& p);

/// Optimal per-user power: the stationary point clamped to [0, min(P_max, P_Gamma)].
double tdma_power(double tau, double gain, double queue, double weight_c,
                  double energy_queue, double p_max, const SystemParams& p);

/// Orthogonal-access baseline allocation for decision x.
Allocation tdma_allocate(const Decision& x, const FrameObservation& obs, const SystemParams& p);

}  // namespace qnoma
