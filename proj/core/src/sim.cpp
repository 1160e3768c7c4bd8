// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qnoma/noma.hpp"
#include "qnoma/objective.hpp"
#include "qnoma/sca.hpp"
#include "qnoma/tdma.hpp"

namespace qnoma {

namespace {

constexpr double kAuditRelTol = 1e-9;

[[noreturn]] void audit_fail(const FrameRecord& r, std::size_t device, const std::string& what) {
  throw std::logic_error("frame " + std::to_string(r.frame_t) + " device " + std::to_string(device) +
                         ": " + what);
}

}  // namespace

AllocatorFn allocator_for(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::NomaSca:
      return &sca_allocate;
    case Scheme::Tdma:
      return &tdma_allocate;
    case Scheme::NomaHeuristic:
      break;
  }
  return &allocate;
}

CriticChoice critic_select(std::span<const Decision> candidates, const FrameObservation& obs,
                           const SystemParams& p, AllocatorFn allocator) {
  if (candidates.empty()) throw std::invalid_argument("critic_select: no candidates");
  CriticChoice best{candidates[0], allocator(candidates[0], obs, p), 0};
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    Allocation a = allocator(candidates[i], obs, p);
    if (a.objective > best.allocation.objective) best = {candidates[i], std::move(a), i};
  }
  return best;
}

void audit_frame(const FrameRecord& record, const SystemParams& p) {
  const auto& a = record.allocation;
  const auto& obs = record.observation;
  const std::size_t n = p.n_devices;
  if (a.offload_x.size() != n || a.freq_f.size() != n || a.power_P.size() != n || a.rate_r.size() != n ||
      a.energy_e.size() != n || obs.size() != n || record.arrivals_A.size() != n) {
    throw std::logic_error("frame " + std::to_string(record.frame_t) + ": dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t x = a.offload_x[i];
    if (x > 1) audit_fail(record, i, "offload flag not binary");
    if (!(a.freq_f[i] >= 0.0) || a.freq_f[i] > p.f_max[i] * (1.0 + kAuditRelTol)) {
      audit_fail(record, i, "frequency outside [0, f_max]");
    }
    if (!(a.power_P[i] >= 0.0) || a.power_P[i] > p.p_max[i] * (1.0 + kAuditRelTol)) {
      audit_fail(record, i, "power outside [0, P_max]");
    }
    if (x == 1 && a.freq_f[i] != 0.0) audit_fail(record, i, "offloader computes locally");
    if (x == 0 && a.power_P[i] != 0.0) audit_fail(record, i, "local device transmits");
    if (!(a.rate_r[i] >= 0.0) || a.rate_r[i] * p.frame_T > obs.data_queue_Q[i] * (1.0 + kAuditRelTol)) {
      audit_fail(record, i, "processed more than queued");
    }
    if (!(a.energy_e[i] >= 0.0)) audit_fail(record, i, "negative energy");
    if (!(obs.data_queue_Q[i] >= 0.0) || !(obs.energy_queue_Y[i] >= 0.0)) {
      audit_fail(record, i, "negative queue");
    }
    if (!(record.arrivals_A[i] >= 0.0)) audit_fail(record, i, "negative arrival");
  }
}

Simulator::Simulator(const SchemeConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      env_(cfg.params, seed),
      agent_(cfg.params, env_.channel().mean_pathloss, seed),
      queues_(QueueState::initial(cfg.params.n_devices)),
      allocator_(allocator_for(cfg.scheme)) {}

FrameRecord Simulator::run_frame() {
  const SystemParams& p = cfg_.params;
  const std::size_t n = p.n_devices;
  const std::size_t t = t_;

  FrameRecord rec;
  rec.frame_t = t;
  rec.scheme_tag = cfg_.scheme;
  rec.observation = {t, env_.gains(t), queues_.data_Q, queues_.energy_Y};

  std::vector<double> input = agent_.observe(rec.observation);
  const std::vector<Decision> candidates = agent_.propose(input);
  CriticChoice choice = critic_select(candidates, rec.observation, p, allocator_);
  rec.num_candidates_Mt = candidates.size();
  rec.chosen_candidate_index = choice.index;

  Allocation& alloc = choice.allocation;
  bool clamped = false;
  for (std::size_t i = 0; i < n; ++i) {
    const ClampResult c = clamp_rate_to_queue(alloc.rate_r[i], queues_.data_Q[i], p.frame_T);
    if (c.warned) ++clamp_warnings_;
    clamped = clamped || c.clamped;
    alloc.rate_r[i] = c.rate;
  }
  if (clamped) alloc.objective = evaluate_objective(alloc, rec.observation, p);
  rec.allocation = alloc;
  rec.arrivals_A = env_.arrivals(t);
  audit_frame(rec, p);

  for (std::size_t i = 0; i < n; ++i) {
    queues_.data_Q[i] = step_data_queue(queues_.data_Q[i], alloc.rate_r[i] * p.frame_T, rec.arrivals_A[i]);
    queues_.energy_Y[i] = step_energy_queue(queues_.energy_Y[i], alloc.energy_e[i], p.gamma[i], p.nu);
  }

  rec.training_loss = agent_.learn(std::move(input), choice.decision, choice.index, t);
  ++t_;
  return rec;
}

RunMetrics compute_metrics(std::span<const FrameRecord> frames, const SystemParams& p, std::size_t first,
                           std::size_t count, double wall_time_per_frame_us) {
  if (first + count > frames.size()) throw std::out_of_range("metrics window exceeds the run");
  const std::size_t n = p.n_devices;
  RunMetrics m;
  m.first_frame = first;
  m.frame_count = count;
  m.wall_time_per_frame_us = wall_time_per_frame_us;
  m.avg_power_per_device.assign(n, 0.0);
  if (count == 0) return m;

  double q = 0.0, y = 0.0, rate = 0.0, offloads = 0.0;
  for (std::size_t k = first; k < first + count; ++k) {
    const auto& r = frames[k];
    for (std::size_t i = 0; i < n; ++i) {
      q += r.observation.data_queue_Q[i];
      y += r.observation.energy_queue_Y[i];
      rate += p.weights_c[i] * r.allocation.rate_r[i];
      offloads += r.allocation.offload_x[i];
      m.avg_power_per_device[i] += r.allocation.energy_e[i];
    }
  }
  const double frames_d = static_cast<double>(count);
  const double cells = frames_d * static_cast<double>(n);
  m.avg_data_queue = q / cells;
  m.avg_energy_queue = y / cells;
  m.weighted_sum_rate = rate / frames_d;
  m.offload_ratio = offloads / cells;
  double total = 0.0;
  for (double& e : m.avg_power_per_device) {
    e /= frames_d;
    total += e;
  }
  m.avg_power = total / static_cast<double>(n);
  return m;
}

RunResult run_simulation(const SchemeConfig& cfg, std::uint64_t seed) {
  validate_params(cfg.params);
  if (cfg.horizon_K == 0) throw std::invalid_argument("horizon_K must be at least 1");
  if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0)) {
    throw std::invalid_argument("warmup_fraction must lie in [0, 1)");
  }
  Simulator sim(cfg, seed);
  RunResult out;
  out.frames.reserve(cfg.horizon_K);
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < cfg.horizon_K; ++k) out.frames.push_back(sim.run_frame());
  const auto stop = std::chrono::steady_clock::now();
  const double wall_us =
      std::chrono::duration<double, std::micro>(stop - start).count() / static_cast<double>(cfg.horizon_K);

  const std::size_t K = cfg.horizon_K;
  const auto first = std::min(K - 1, static_cast<std::size_t>(std::floor(cfg.warmup_fraction * static_cast<double>(K))));
  out.full = compute_metrics(out.frames, cfg.params, 0, K, wall_us);
  out.steady = compute_metrics(out.frames, cfg.params, first, K - first, wall_us);
  out.clamp_warnings = sim.clamp_warnings();
  return out;
}

FrameObservation sample_frame_state(const SystemParams& p, const ChannelModel& channel, RandomStream& rng,
                                    double queue_hi, double energy_hi) {
  FrameObservation obs;
  obs.gains_h = sample_gains(channel, rng);
  obs.data_queue_Q.resize(p.n_devices);
  obs.energy_queue_Y.resize(p.n_devices);
  for (std::size_t i = 0; i < p.n_devices; ++i) obs.data_queue_Q[i] = rng.uniform(0.0, queue_hi);
  for (std::size_t i = 0; i < p.n_devices; ++i) obs.energy_queue_Y[i] = rng.uniform(0.0, energy_hi);
  return obs;
}

}  // namespace qnoma
