// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qnoma/actor.hpp"
#include "qnoma/params.hpp"
#include "qnoma/random.hpp"
#include "qnoma/types.hpp"

namespace qnoma {

/// Fixed per-device scales mapping an observation onto network inputs.
struct InputScales {
  std::vector<double> gain;   // mean path loss per device
  std::vector<double> queue;  // q_scale per device, data units
  std::vector<double> energy; // y_scale per device

  static InputScales from_params(const SystemParams& p, std::span<const double> mean_pathloss);
};

/// (h / mean_pathloss, Q / q_scale, Y / y_scale), length 3N.
std::vector<double> normalize_observation(const FrameObservation& obs, const InputScales& scales);
FrameObservation denormalize_observation(std::span<const double> input, const InputScales& scales,
                                         std::size_t frame_t = 0);

/// Deterministic order-preserving candidates: the 0.5 threshold first, then
/// thresholds at the entries nearest 0.5. Returns up to count vectors
/// (not deduplicated).
std::vector<Decision> order_preserving_family(std::span<const double> relaxed, std::size_t count);

/// Noisy order-preserving quantization into at most M_t distinct decisions.
/// The first ceil(M_t/2) come from relaxed, the rest from
/// logistic(logit(relaxed) + sigma z). Candidate 0 is always the
/// 0.5-threshold vector.
std::vector<Decision> nop_quantize(std::span<const double> relaxed, std::size_t M_t,
                                   double sigma, RandomStream& rng);

struct Experience {
  std::vector<double> input;
  std::vector<double> label;
};

/// Ring buffer of (normalized observation, chosen action) pairs.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(std::vector<double> input, const Decision& action);
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const Experience& at(std::size_t i) const { return entries_.at(i); }

  /// min(batch, size) distinct indices, uniform without replacement.
  std::vector<std::size_t> sample_indices(std::size_t batch, RandomStream& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Experience> entries_;
};

struct QuantizerState {
  std::size_t M_t = 1;
  std::size_t M_max = 1;
  double noise_sigma = 3.0;
  std::size_t interval_dM = 32;
  std::vector<std::size_t> history;  // chosen indices since the last update
};

/// clamp(max(history) + 2, 1, M_max); empty history keeps M_t.
std::size_t adapt_Mt(const QuantizerState& state, std::span<const std::size_t> history);

/// Records the chosen index of frame t and, when t is a multiple of
/// interval_dM, applies adapt_Mt over the window and clears it.
void observe_choice(QuantizerState& state, std::size_t chosen_index, std::size_t frame_t);

/// Pushes the experience and trains on a uniform batch every train_interval
/// frames. Returns the pre-update loss when training happened.
std::optional<double> record_and_maybe_train(ReplayMemory& memory, ActorNetwork& net,
                                             std::vector<double> input, const Decision& action,
                                             std::size_t frame_t, std::size_t train_interval,
                                             std::size_t batch_size, RandomStream& rng);

/// Actor half of the loop: network, quantizer, memory and their RNG.
class Agent {
 public:
  Agent(const SystemParams& p, std::span<const double> mean_pathloss, std::uint64_t seed);

  /// Normalized input for obs.
  std::vector<double> observe(const FrameObservation& obs) const;
  std::vector<Decision> propose(std::span<const double> input);
  /// Stores the critic's choice, adapts M_t and maybe trains.
  std::optional<double> learn(std::vector<double> input, const Decision& chosen,
                              std::size_t chosen_index, std::size_t frame_t);

  const ActorNetwork& network() const noexcept { return net_; }
  ActorNetwork& network() noexcept { return net_; }
  const QuantizerState& quantizer() const noexcept { return quant_; }
  const ReplayMemory& memory() const noexcept { return memory_; }
  const InputScales& scales() const noexcept { return scales_; }

 private:
  InputScales scales_;
  ActorNetwork net_;
  ReplayMemory memory_;
  QuantizerState quant_;
  std::size_t train_interval_;
  std::size_t batch_size_;
  RandomStream noise_rng_;
  RandomStream batch_rng_;
};

}  // namespace qnoma
