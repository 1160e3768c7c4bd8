// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/types.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qnoma {

std::string_view scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::NomaHeuristic: return "NOMA_Heuristic";
    case Scheme::NomaSca: return "NOMA_SCA";
    case Scheme::Tdma: return "TDMA";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "NOMA_Heuristic" || name == "heuristic" || name == "noma") return Scheme::NomaHeuristic;
  if (name == "NOMA_SCA" || name == "sca") return Scheme::NomaSca;
  if (name == "TDMA" || name == "tdma") return Scheme::Tdma;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

Decision Decision::from_mask(std::uint64_t mask, std::size_t n) {
  Decision d = all_local(n);
  for (std::size_t i = 0; i < n && i < 64; ++i) d.offload_x[i] = (mask >> i) & 1U;
  return d;
}

std::size_t Decision::offload_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(offload_x.begin(), offload_x.end(), [](std::uint8_t v) { return v != 0; }));
}

Allocation Allocation::zeros(std::size_t n) {
  Allocation a;
  a.offload_x.assign(n, 0);
  a.freq_f.assign(n, 0.0);
  a.power_P.assign(n, 0.0);
  a.sinr_rho.assign(n, 0.0);
  a.rate_r.assign(n, 0.0);
  a.energy_e.assign(n, 0.0);
  return a;
}

}  // namespace qnoma
