// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "qnoma/channel.hpp"
#include "qnoma/params.hpp"
#include "qnoma/random.hpp"
#include "qnoma/sim.hpp"
#include "qnoma/types.hpp"

namespace qnoma::testing {

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Frame state drawn the way the offline bench draws it: Q up to ten frames of
// mean arrivals, Y up to ten frames of budget.
inline FrameObservation random_frame(const SystemParams& p, RandomStream& rng) {
  const ChannelModel channel = ChannelModel::from_params(p);
  return sample_frame_state(p, channel, rng, 10.0 * p.mean_arrival_units(0) * p.frame_T,
                            10.0 * p.nu * p.gamma[0]);
}

inline Decision random_decision(std::size_t n, RandomStream& rng) {
  Decision x = Decision::all_local(n);
  for (auto& b : x.offload_x) b = rng.uniform() < 0.5 ? 1 : 0;
  return x;
}

// Maximum of f over n + 1 equally spaced points on [lo, hi], plus the argmax.
struct GridMax {
  double value = 0.0;
  double arg = 0.0;
  double step = 0.0;
};

inline GridMax grid_max(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
  GridMax g{f(lo), lo, (hi - lo) / static_cast<double>(n)};
  for (std::size_t i = 1; i <= n; ++i) {
    const double v = lo + g.step * static_cast<double>(i);
    const double fv = f(v);
    if (fv > g.value) {
      g.value = fv;
      g.arg = v;
    }
  }
  return g;
}

// Largest change of f between neighbouring grid points near arg: the
// objective resolution of the grid at its maximizer.
inline double grid_resolution(const std::function<double(double)>& f, const GridMax& g, double lo,
                              double hi) {
  const double left = std::max(lo, g.arg - g.step);
  const double right = std::min(hi, g.arg + g.step);
  return std::max(std::abs(f(g.arg) - f(left)), std::abs(f(right) - f(g.arg)));
}

// Brute-force SIC: for each offloader, sums the received power of every
// offloader decoded after it (weaker gain, or equal gain and larger index).
inline std::vector<double> naive_sinr(const std::vector<std::uint8_t>& x, const std::vector<double>& P,
                                      const std::vector<double>& h, double N0) {
  const std::size_t n = x.size();
  std::vector<double> sinr(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!x[i]) continue;
    double interference = N0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !x[j]) continue;
      const bool later = h[j] < h[i] || (h[j] == h[i] && j > i);
      if (later) interference += P[j] * h[j];
    }
    sinr[i] = P[i] * h[i] / interference;
  }
  return sinr;
}

}  // namespace qnoma::testing
