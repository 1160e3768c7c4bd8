// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnoma {

namespace {

constexpr std::uint64_t kChannelStream = 0x6368616e6e656cULL;
constexpr std::uint64_t kArrivalStream = 0x617272697661ULL;

}  // namespace

double mean_pathloss(double distance, double carrier_freq, double ref_Ad, double exponent) {
  const double ratio = kSpeedOfLight / (4.0 * std::numbers::pi * carrier_freq * distance);
  return ref_Ad * std::pow(ratio, exponent);
}

ChannelModel ChannelModel::from_params(const SystemParams& p) {
  ChannelModel m;
  m.distances = p.distances;
  m.pathloss_exp_de = p.pathloss_exp_de;
  m.carrier_freq = p.carrier_freq;
  m.pathloss_ref_Ad = p.pathloss_ref_Ad;
  m.rician_K = p.rician_K;
  m.mean_pathloss.reserve(m.distances.size());
  for (double d : m.distances) {
    m.mean_pathloss.push_back(qnoma::mean_pathloss(d, m.carrier_freq, m.pathloss_ref_Ad, m.pathloss_exp_de));
  }
  return m;
}

std::vector<double> init_distances(std::size_t n) {
  if (n == 0) throw std::invalid_argument("init_distances: n must be at least 1");
  std::vector<double> d(n, kMinDistance);
  if (n == 1) return d;
  const double step = (kMaxDistance - kMinDistance) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = kMinDistance + step * static_cast<double>(i);
  d.back() = kMaxDistance;
  return d;
}

std::vector<double> random_distances(std::size_t n, RandomStream& rng) {
  if (n == 0) throw std::invalid_argument("random_distances: n must be at least 1");
  std::vector<double> d(n);
  for (auto& x : d) x = rng.uniform(kMinDistance, kMaxDistance);
  return d;
}

std::vector<double> sample_gains(const ChannelModel& model, RandomStream& rng) {
  std::vector<double> h(model.mean_pathloss.size());
  const double K = model.rician_K;
  if (K >= kLineOfSightK) {
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = model.mean_pathloss[i];
    return h;
  }
  const double los = std::sqrt(K / (K + 1.0));
  const double scatter = std::sqrt(1.0 / (2.0 * (K + 1.0)));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double re = los + scatter * rng.normal();
    const double im = scatter * rng.normal();
    // Guards the (measure-zero) exact null so gains stay strictly positive.
    const double power = std::max(re * re + im * im, 1e-300);
    h[i] = model.mean_pathloss[i] * power;
  }
  return h;
}

std::vector<double> sample_arrivals(std::span<const double> mean_per_frame, RandomStream& rng) {
  std::vector<double> a(mean_per_frame.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.exponential(mean_per_frame[i]);
  return a;
}

Environment::Environment(const SystemParams& p, std::uint64_t seed)
    : channel_(ChannelModel::from_params(p)), seed_(seed) {
  mean_arrivals_.resize(p.n_devices);
  for (std::size_t i = 0; i < p.n_devices; ++i) mean_arrivals_[i] = p.mean_arrival_units(i);
}

std::vector<double> Environment::gains(std::size_t frame_t) const {
  RandomStream rng = RandomStream::derive(seed_, kChannelStream, frame_t);
  return sample_gains(channel_, rng);
}

std::vector<double> Environment::arrivals(std::size_t frame_t) const {
  RandomStream rng = RandomStream::derive(seed_, kArrivalStream, frame_t);
  return sample_arrivals(mean_arrivals_, rng);
}

}  // namespace qnoma
