// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/objective.hpp"

#include <stdexcept>

namespace qnoma {

double evaluate_objective(const Allocation& alloc, const FrameObservation& obs,
                          const SystemParams& p) {
  const std::size_t n = obs.size();
  if (alloc.rate_r.size() != n || alloc.energy_e.size() != n || obs.data_queue_Q.size() != n ||
      obs.energy_queue_Y.size() != n || p.weights_c.size() != n) {
    throw std::invalid_argument("evaluate_objective: dimension mismatch");
  }
  double reward = 0.0;
  double penalty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    reward += (obs.data_queue_Q[i] + p.V * p.weights_c[i]) * alloc.rate_r[i];
    penalty += obs.energy_queue_Y[i] * alloc.energy_e[i];
  }
  return reward - p.nu * penalty;
}

}  // namespace qnoma
