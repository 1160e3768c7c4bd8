// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qnoma/params.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

/// Per-frame drift-plus-penalty value
///   sum_i (Q_i + V c_i) r_i  -  nu * sum_i Y_i e_i
/// computed from the rates and energies already stored in alloc.
/// Throws std::invalid_argument on any length mismatch.
double evaluate_objective(const Allocation& alloc, const FrameObservation& obs,
                          const SystemParams& p);

}  // namespace qnoma
