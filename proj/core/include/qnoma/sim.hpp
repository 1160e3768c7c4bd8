// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qnoma/agent.hpp"
#include "qnoma/channel.hpp"
#include "qnoma/params.hpp"
#include "qnoma/queues.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

struct SchemeConfig {
  Scheme scheme = Scheme::NomaHeuristic;
  std::size_t horizon_K = 10000;
  SystemParams params;
  // Steady-state metrics cover the last (1 - warmup_fraction) of frames.
  double warmup_fraction = 0.5;
};

using AllocatorFn = Allocation (*)(const Decision&, const FrameObservation&, const SystemParams&);

/// allocate for both NOMA schemes' reference, sca_allocate, or tdma_allocate.
AllocatorFn allocator_for(Scheme scheme) noexcept;

struct CriticChoice {
  Decision decision;
  Allocation allocation;
  std::size_t index = 0;
};

/// Evaluates every candidate and returns the highest objective; ties go to
/// the lowest index. Throws std::invalid_argument on an empty list.
CriticChoice critic_select(std::span<const Decision> candidates, const FrameObservation& obs,
                           const SystemParams& p, AllocatorFn allocator);

/// Throws std::logic_error if the record breaks a per-frame constraint:
/// binary x, f in [0, f_max], P in [0, P_max], mode exclusivity, r T <= Q,
/// non-negative queues.
void audit_frame(const FrameRecord& record, const SystemParams& p);

/// One online run: environment, queues and agent, advanced frame by frame.
class Simulator {
 public:
  Simulator(const SchemeConfig& cfg, std::uint64_t seed);

  /// Observe, propose, evaluate, execute, update queues, learn.
  FrameRecord run_frame();

  std::size_t next_frame() const noexcept { return t_; }
  const QueueState& queues() const noexcept { return queues_; }
  const Agent& agent() const noexcept { return agent_; }
  const Environment& environment() const noexcept { return env_; }
  std::size_t clamp_warnings() const noexcept { return clamp_warnings_; }

 private:
  SchemeConfig cfg_;
  Environment env_;
  Agent agent_;
  QueueState queues_;
  AllocatorFn allocator_;
  std::size_t t_ = 1;
  std::size_t clamp_warnings_ = 0;
};

/// Averages over frames [first, first + count).
RunMetrics compute_metrics(std::span<const FrameRecord> frames, const SystemParams& p,
                           std::size_t first, std::size_t count, double wall_time_per_frame_us);

struct RunResult {
  std::vector<FrameRecord> frames;
  RunMetrics full;
  RunMetrics steady;
  std::size_t clamp_warnings = 0;
};

RunResult run_simulation(const SchemeConfig& cfg, std::uint64_t seed);

/// Random frame state for offline allocator tests and benchmarks: channel
/// gains from the model, Q uniform on [0, queue_hi], Y uniform on [0, energy_hi].
FrameObservation sample_frame_state(const SystemParams& p, const ChannelModel& channel,
                                    RandomStream& rng, double queue_hi, double energy_hi);

}  // namespace qnoma
