// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qnoma/params.hpp"
#include "qnoma/random.hpp"

namespace qnoma {

inline constexpr double kSpeedOfLight = 3e8;
inline constexpr double kMinDistance = 120.0;
inline constexpr double kMaxDistance = 255.0;
/// Rician K at or above this is treated as a pure line-of-sight channel.
inline constexpr double kLineOfSightK = 1e12;

/// Path loss plus Rician small-scale fading for a fixed device placement.
struct ChannelModel {
  std::vector<double> distances;
  double pathloss_exp_de = 3.0;
  double carrier_freq = 915e6;
  double pathloss_ref_Ad = 4.11;
  double rician_K = 3.0;
  std::vector<double> mean_pathloss;

  static ChannelModel from_params(const SystemParams& p);
};

/// A_d * (c / (4 pi f_c d))^d_e.
double mean_pathloss(double distance, double carrier_freq, double ref_Ad,
                     double exponent);

/// n distances equally spaced over [120, 255] m; n = 1 gives {120}.
std::vector<double> init_distances(std::size_t n);
/// n distances drawn uniformly from [120, 255] m.
std::vector<double> random_distances(std::size_t n, RandomStream& rng);

/// h_i = mean_pathloss_i * |g|^2 with unit-power Rician g.
std::vector<double> sample_gains(const ChannelModel& model, RandomStream& rng);

/// Exponential arrivals with the given per-device means (0 gives 0).
std::vector<double> sample_arrivals(std::span<const double> mean_per_frame,
                                    RandomStream& rng);

/// Exogenous randomness of a run. Gains and arrivals of frame t are pure
/// functions of (seed, t), so every scheme sees the same environment.
class Environment {
 public:
  Environment(const SystemParams& p, std::uint64_t seed);

  const ChannelModel& channel() const noexcept { return channel_; }
  std::vector<double> gains(std::size_t frame_t) const;
  std::vector<double> arrivals(std::size_t frame_t) const;

 private:
  ChannelModel channel_;
  std::vector<double> mean_arrivals_;
  std::uint64_t seed_;
};

}  // namespace qnoma
