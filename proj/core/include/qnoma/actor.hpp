// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qnoma/random.hpp"

namespace qnoma {

/// Outputs are clipped to [kProbClip, 1 - kProbClip] inside the loss.
inline constexpr double kProbClip = 1e-7;

/// Fully connected policy network: rectifier hidden layers, logistic output.
/// Trained with binary cross-entropy and Adam.
///
/// Batches are column-major: one sample per column.
class ActorNetwork {
 public:
  struct Layer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd biases;
  };
  struct Gradients {
    double loss = 0.0;
    std::vector<Layer> layers;
  };

  ActorNetwork() = default;
  /// He-uniform weights, zero biases.
  ActorNetwork(std::vector<std::size_t> layer_sizes, double learning_rate, RandomStream& rng);
  /// All parameters zero.
  static ActorNetwork zeros(std::vector<std::size_t> layer_sizes, double learning_rate);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t parameter_count() const noexcept;
  double learning_rate() const noexcept { return learning_rate_; }
  std::size_t step_count() const noexcept { return step_; }

  std::vector<Layer>& layers() noexcept { return layers_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  /// Relaxed action in (0, 1)^N. Throws std::invalid_argument on size mismatch.
  std::vector<double> forward(std::span<const double> input) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  /// Mean over the batch of the summed per-output cross-entropy.
  double loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) const;
  Gradients gradients(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) const;

  /// One Adam update; returns the loss before the update.
  /// Throws std::invalid_argument on an empty batch.
  double train_step(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels);

  /// JSON checkpoint: layer sizes, then per layer row-major weights and
  /// biases plus the Adam moments and step count.
  std::string to_json() const;
  static ActorNetwork from_json(std::string_view text);

  friend bool operator==(const ActorNetwork& a, const ActorNetwork& b);

 private:
  void check_batch(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) const;

  std::vector<std::size_t> sizes_;
  std::vector<Layer> layers_;
  std::vector<Layer> first_moment_;
  std::vector<Layer> second_moment_;
  double learning_rate_ = 1e-3;
  std::size_t step_ = 0;
};

}  // namespace qnoma
