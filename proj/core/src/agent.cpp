// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qnoma {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;   // "init"
constexpr std::uint64_t kNoiseStream = 0x6e6f6973;  // "nois"
constexpr std::uint64_t kBatchStream = 0x62617463;  // "batc"

double positive_or_one(double v) { return v > 0.0 ? v : 1.0; }

std::vector<std::size_t> closeness_order(std::span<const double> relaxed) {
  std::vector<std::size_t> idx(relaxed.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(relaxed[a] - 0.5) < std::abs(relaxed[b] - 0.5);
  });
  return idx;
}

Decision threshold(std::span<const double> relaxed, double level, bool strict) {
  std::vector<std::uint8_t> x(relaxed.size());
  for (std::size_t i = 0; i < relaxed.size(); ++i) {
    x[i] = strict ? relaxed[i] > level : relaxed[i] >= level;
  }
  return Decision(std::move(x));
}

void append_unique(std::vector<Decision>& out, const std::vector<Decision>& in, std::size_t limit) {
  for (const auto& d : in) {
    if (out.size() >= limit) return;
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
}

}  // namespace

InputScales InputScales::from_params(const SystemParams& p, std::span<const double> mean_pathloss) {
  if (mean_pathloss.size() != p.n_devices) throw std::invalid_argument("one mean path loss per device expected");
  InputScales s;
  s.gain.assign(mean_pathloss.begin(), mean_pathloss.end());
  s.queue.resize(p.n_devices);
  s.energy.resize(p.n_devices);
  for (std::size_t i = 0; i < p.n_devices; ++i) {
    s.queue[i] = positive_or_one(p.actor.q_scale > 0.0 ? p.actor.q_scale
                                                        : 10.0 * p.mean_arrival_units(i) * p.frame_T);
    s.energy[i] = positive_or_one(p.actor.y_scale > 0.0 ? p.actor.y_scale : 10.0 * p.nu * p.gamma[i]);
  }
  return s;
}

std::vector<double> normalize_observation(const FrameObservation& obs, const InputScales& scales) {
  const std::size_t n = obs.size();
  if (scales.gain.size() != n) throw std::invalid_argument("observation does not match input scales");
  std::vector<double> input(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    input[i] = obs.gains_h[i] / scales.gain[i];
    input[n + i] = obs.data_queue_Q[i] / scales.queue[i];
    input[2 * n + i] = obs.energy_queue_Y[i] / scales.energy[i];
  }
  return input;
}

FrameObservation denormalize_observation(std::span<const double> input, const InputScales& scales,
                                         std::size_t frame_t) {
  const std::size_t n = scales.gain.size();
  if (input.size() != 3 * n) throw std::invalid_argument("input length must be 3N");
  FrameObservation obs;
  obs.frame_t = frame_t;
  obs.gains_h.resize(n);
  obs.data_queue_Q.resize(n);
  obs.energy_queue_Y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs.gains_h[i] = input[i] * scales.gain[i];
    obs.data_queue_Q[i] = input[n + i] * scales.queue[i];
    obs.energy_queue_Y[i] = input[2 * n + i] * scales.energy[i];
  }
  return obs;
}

std::vector<Decision> order_preserving_family(std::span<const double> relaxed, std::size_t count) {
  std::vector<Decision> out;
  if (count == 0) return out;
  out.push_back(threshold(relaxed, 0.5, true));
  const auto order = closeness_order(relaxed);
  for (std::size_t k = 0; k < order.size() && out.size() < count; ++k) {
    const double level = relaxed[order[k]];
    out.push_back(threshold(relaxed, level, level > 0.5));
  }
  return out;
}

std::vector<Decision> nop_quantize(std::span<const double> relaxed, std::size_t M_t, double sigma,
                                   RandomStream& rng) {
  if (M_t == 0) throw std::invalid_argument("M_t must be at least 1");
  const std::size_t head = (M_t + 1) / 2;
  std::vector<Decision> out;
  append_unique(out, order_preserving_family(relaxed, head), M_t);
  const std::size_t tail = M_t - head;
  if (tail > 0) {
    std::vector<double> noisy(relaxed.size());
    for (std::size_t i = 0; i < relaxed.size(); ++i) {
      const double x = std::clamp(relaxed[i], kProbClip, 1.0 - kProbClip);
      const double logit = std::log(x / (1.0 - x));
      noisy[i] = 1.0 / (1.0 + std::exp(-(logit + sigma * rng.normal())));
    }
    append_unique(out, order_preserving_family(noisy, tail), M_t);
  }
  return out;
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay memory capacity must be positive");
  entries_.reserve(capacity);
}

void ReplayMemory::push(std::vector<double> input, const Decision& action) {
  Experience e{std::move(input), std::vector<double>(action.offload_x.begin(), action.offload_x.end())};
  if (entries_.size() < capacity_) {
    entries_.push_back(std::move(e));
  } else {
    entries_[next_] = std::move(e);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayMemory::sample_indices(std::size_t batch, RandomStream& rng) const {
  const std::size_t n = entries_.size();
  const std::size_t k = std::min(batch, n);
  // Partial Fisher-Yates.
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
  pool.resize(k);
  return pool;
}

std::size_t adapt_Mt(const QuantizerState& state, std::span<const std::size_t> history) {
  if (history.empty()) return state.M_t;
  const std::size_t peak = *std::max_element(history.begin(), history.end());
  return std::clamp<std::size_t>(peak + 2, 1, state.M_max);
}

void observe_choice(QuantizerState& state, std::size_t chosen_index, std::size_t frame_t) {
  state.history.push_back(chosen_index);
  if (state.interval_dM > 0 && frame_t % state.interval_dM == 0) {
    state.M_t = adapt_Mt(state, state.history);
    state.history.clear();
  }
}

std::optional<double> record_and_maybe_train(ReplayMemory& memory, ActorNetwork& net,
                                             std::vector<double> input, const Decision& action,
                                             std::size_t frame_t, std::size_t train_interval,
                                             std::size_t batch_size, RandomStream& rng) {
  memory.push(std::move(input), action);
  if (train_interval == 0 || frame_t % train_interval != 0) return std::nullopt;
  const auto idx = memory.sample_indices(batch_size, rng);
  if (idx.empty()) return std::nullopt;
  const auto rows_in = static_cast<Eigen::Index>(net.input_size());
  const auto rows_out = static_cast<Eigen::Index>(net.output_size());
  Eigen::MatrixXd inputs(rows_in, static_cast<Eigen::Index>(idx.size()));
  Eigen::MatrixXd labels(rows_out, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const auto& e = memory.at(idx[c]);
    const auto col = static_cast<Eigen::Index>(c);
    inputs.col(col) = Eigen::Map<const Eigen::VectorXd>(e.input.data(), rows_in);
    labels.col(col) = Eigen::Map<const Eigen::VectorXd>(e.label.data(), rows_out);
  }
  return net.train_step(inputs, labels);
}

Agent::Agent(const SystemParams& p, std::span<const double> mean_pathloss, std::uint64_t seed)
    : scales_(InputScales::from_params(p, mean_pathloss)),
      memory_(p.actor.memory_size_q),
      train_interval_(p.actor.train_interval_dT),
      batch_size_(p.actor.batch_size),
      noise_rng_(RandomStream::derive(seed, kNoiseStream)),
      batch_rng_(RandomStream::derive(seed, kBatchStream)) {
  RandomStream init = RandomStream::derive(seed, kInitStream);
  net_ = ActorNetwork(p.resolved_layer_sizes(), p.actor.learning_rate, init);
  quant_.M_max = p.resolved_M_max();
  quant_.M_t = quant_.M_max;
  quant_.noise_sigma = p.actor.noise_sigma;
  quant_.interval_dM = p.actor.quant_interval_dM;
}

std::vector<double> Agent::observe(const FrameObservation& obs) const {
  return normalize_observation(obs, scales_);
}

std::vector<Decision> Agent::propose(std::span<const double> input) {
  const auto relaxed = net_.forward(input);
  return nop_quantize(relaxed, quant_.M_t, quant_.noise_sigma, noise_rng_);
}

std::optional<double> Agent::learn(std::vector<double> input, const Decision& chosen,
                                   std::size_t chosen_index, std::size_t frame_t) {
  observe_choice(quant_, chosen_index, frame_t);
  return record_and_maybe_train(memory_, net_, std::move(input), chosen, frame_t, train_interval_,
                                batch_size_, batch_rng_);
}

}  // namespace qnoma
