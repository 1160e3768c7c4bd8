// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qnoma/channel.hpp"
#include "qnoma/noma.hpp"
#include "qnoma/sca.hpp"
#include "qnoma/sim.hpp"
#include "qnoma/tdma.hpp"

namespace qnoma {

namespace {

constexpr std::size_t kFastInnerCalls = 2000;
constexpr std::size_t kScaInnerCalls = 1;

TimingStats summarize(const std::vector<double>& samples) {
  TimingStats s;
  for (double v : samples) s.mean_us += v;
  s.mean_us /= static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double var = 0.0;
    for (double v : samples) var += (v - s.mean_us) * (v - s.mean_us);
    s.std_us = std::sqrt(var / static_cast<double>(samples.size() - 1));
  }
  return s;
}

double time_call(AllocatorFn fn, const Decision& x, const FrameObservation& obs, const SystemParams& p,
                 std::size_t calls) {
  volatile double sink = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t c = 0; c < calls; ++c) sink = sink + fn(x, obs, p).objective;
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::micro>(stop - start).count() / static_cast<double>(calls);
}

}  // namespace

std::vector<BenchRow> run_bench(std::span<const std::size_t> n_values, const SystemParams& base,
                                const BenchOptions& options) {
  if (options.repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
  std::vector<BenchRow> rows;
  for (std::size_t n : n_values) {
    const SystemParams p = with_device_count(base, n);
    validate_params(p);
    const ChannelModel channel = ChannelModel::from_params(p);
    const Decision x = Decision::all_offload(n);
    const double queue_hi = 10.0 * p.mean_arrival_units(0) * p.frame_T;
    const double energy_hi = 10.0 * p.nu * p.gamma[0];
    const std::size_t fast_calls = options.inner_calls ? options.inner_calls : kFastInnerCalls;
    const std::size_t sca_calls = options.inner_calls ? options.inner_calls : kScaInnerCalls;

    std::vector<double> tdma, greedy, sca;
    for (std::size_t r = 0; r < options.repetitions; ++r) {
      RandomStream rng = RandomStream::derive(options.seed, n, r);
      const FrameObservation obs = sample_frame_state(p, channel, rng, queue_hi, energy_hi);
      tdma.push_back(time_call(&tdma_allocate, x, obs, p, fast_calls));
      greedy.push_back(time_call(&allocate, x, obs, p, fast_calls));
      sca.push_back(time_call(&sca_allocate, x, obs, p, sca_calls));
    }
    rows.push_back({n, summarize(tdma), summarize(greedy), summarize(sca)});
  }
  return rows;
}

}  // namespace qnoma
