// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "qnoma/channel.hpp"
#include "qnoma/noma.hpp"
#include "qnoma/params.hpp"
#include "qnoma/random.hpp"
#include "qnoma/sca.hpp"
#include "qnoma/sim.hpp"
#include "qnoma/tdma.hpp"

namespace {

using qnoma::AllocatorFn;

// A pool of all-offload frame states so one lucky channel draw does not
// dominate the timing.
struct Workload {
  qnoma::SystemParams params;
  qnoma::Decision decision;
  std::vector<qnoma::FrameObservation> frames;
};

Workload make_workload(std::size_t n) {
  Workload w{qnoma::with_device_count(qnoma::default_params(), n), qnoma::Decision::all_offload(n), {}};
  const auto channel = qnoma::ChannelModel::from_params(w.params);
  qnoma::RandomStream rng(n);
  for (int k = 0; k < 16; ++k) {
    w.frames.push_back(qnoma::sample_frame_state(w.params, channel, rng,
                                                 10.0 * w.params.mean_arrival_units(0) * w.params.frame_T,
                                                 10.0 * w.params.nu * w.params.gamma[0]));
  }
  return w;
}

void run(benchmark::State& state, AllocatorFn allocator) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(allocator(w.decision, w.frames[k], w.params));
    k = (k + 1) % w.frames.size();
  }
}

void BM_Greedy(benchmark::State& state) { run(state, &qnoma::allocate); }
void BM_Sca(benchmark::State& state) { run(state, &qnoma::sca_allocate); }
void BM_Tdma(benchmark::State& state) { run(state, &qnoma::tdma_allocate); }

void BM_Critic(benchmark::State& state) {
  const Workload w = make_workload(10);
  qnoma::RandomStream rng(3);
  std::vector<qnoma::Decision> candidates;
  for (std::int64_t c = 0; c < state.range(0); ++c) candidates.push_back(qnoma::Decision::from_mask(rng.below(1024), 10));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qnoma::critic_select(candidates, w.frames[k], w.params, &qnoma::allocate));
    k = (k + 1) % w.frames.size();
  }
}

}  // namespace

BENCHMARK(BM_Greedy)->DenseRange(10, 35, 5);
BENCHMARK(BM_Tdma)->DenseRange(10, 35, 5);
BENCHMARK(BM_Sca)->DenseRange(10, 35, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Critic)->Arg(1)->Arg(5)->Arg(10);

BENCHMARK_MAIN();
