// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/actor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace qnoma {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

ActorNetwork::Layer zero_layer(std::size_t in, std::size_t out) {
  ActorNetwork::Layer layer;
  layer.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  layer.biases = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out));
  return layer;
}

void check_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("network needs at least input and output layers");
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("layer sizes must be positive");
  }
}

Eigen::MatrixXd logistic(const Eigen::MatrixXd& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

nlohmann::json layer_to_json(const ActorNetwork::Layer& l) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(l.weights.size()));
  for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < l.weights.cols(); ++c) w.push_back(l.weights(r, c));
  }
  return {{"weights", w}, {"biases", std::vector<double>(l.biases.data(), l.biases.data() + l.biases.size())}};
}

ActorNetwork::Layer layer_from_json(const nlohmann::json& j, std::size_t in, std::size_t out) {
  ActorNetwork::Layer l = zero_layer(in, out);
  const auto w = j.at("weights").get<std::vector<double>>();
  const auto b = j.at("biases").get<std::vector<double>>();
  if (w.size() != in * out || b.size() != out) throw std::invalid_argument("checkpoint layer shape mismatch");
  for (std::size_t r = 0; r < out; ++r) {
    for (std::size_t c = 0; c < in; ++c) {
      l.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w[r * in + c];
    }
    l.biases[static_cast<Eigen::Index>(r)] = b[r];
  }
  return l;
}

}  // namespace

ActorNetwork::ActorNetwork(std::vector<std::size_t> layer_sizes, double learning_rate, RandomStream& rng)
    : ActorNetwork(zeros(std::move(layer_sizes), learning_rate)) {
  for (auto& layer : layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.cols()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = rng.uniform(-limit, limit);
    }
  }
}

ActorNetwork ActorNetwork::zeros(std::vector<std::size_t> layer_sizes, double learning_rate) {
  check_sizes(layer_sizes);
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  ActorNetwork net;
  net.sizes_ = std::move(layer_sizes);
  net.learning_rate_ = learning_rate;
  for (std::size_t i = 0; i + 1 < net.sizes_.size(); ++i) {
    net.layers_.push_back(zero_layer(net.sizes_[i], net.sizes_[i + 1]));
  }
  net.first_moment_ = net.layers_;
  net.second_moment_ = net.layers_;
  return net;
}

std::size_t ActorNetwork::parameter_count() const noexcept {
  std::size_t count = 0;
  for (const auto& l : layers_) count += static_cast<std::size_t>(l.weights.size() + l.biases.size());
  return count;
}

std::vector<double> ActorNetwork::forward(std::span<const double> input) const {
  if (input.size() != input_size()) throw std::invalid_argument("actor input has wrong length");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(input.size()), 1);
  for (std::size_t i = 0; i < input.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = input[i];
  const Eigen::MatrixXd y = forward_batch(x);
  return std::vector<double>(y.data(), y.data() + y.size());
}

Eigen::MatrixXd ActorNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (static_cast<std::size_t>(inputs.rows()) != input_size()) {
    throw std::invalid_argument("actor input has wrong length");
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = layers_[i].weights * a;
    z.colwise() += layers_[i].biases;
    a = i + 1 < layers_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : logistic(z);
  }
  return a;
}

void ActorNetwork::check_batch(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) const {
  if (inputs.cols() == 0) throw std::invalid_argument("empty training batch");
  if (labels.cols() != inputs.cols() || static_cast<std::size_t>(labels.rows()) != output_size() ||
      static_cast<std::size_t>(inputs.rows()) != input_size()) {
    throw std::invalid_argument("training batch shape mismatch");
  }
}

double ActorNetwork::loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) const {
  check_batch(inputs, labels);
  const Eigen::MatrixXd y = forward_batch(inputs).cwiseMax(kProbClip).cwiseMin(1.0 - kProbClip);
  const Eigen::MatrixXd terms =
      labels.cwiseProduct(y.array().log().matrix()) +
      (1.0 - labels.array()).matrix().cwiseProduct((1.0 - y.array()).log().matrix());
  return -terms.sum() / static_cast<double>(inputs.cols());
}

ActorNetwork::Gradients ActorNetwork::gradients(const Eigen::MatrixXd& inputs,
                                                const Eigen::MatrixXd& labels) const {
  check_batch(inputs, labels);
  const std::size_t L = layers_.size();
  std::vector<Eigen::MatrixXd> acts(L + 1);
  acts[0] = inputs;
  for (std::size_t i = 0; i < L; ++i) {
    Eigen::MatrixXd z = layers_[i].weights * acts[i];
    z.colwise() += layers_[i].biases;
    acts[i + 1] = i + 1 < L ? Eigen::MatrixXd(z.cwiseMax(0.0)) : logistic(z);
  }

  const double batch = static_cast<double>(inputs.cols());
  const Eigen::MatrixXd& y = acts[L];
  Gradients g;
  g.layers.resize(L);
  // Logistic output with cross-entropy: dL/dz = (y - x) / B, zero where clipped.
  Eigen::MatrixXd delta(y.rows(), y.cols());
  double loss = 0.0;
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const double raw = y(r, c);
      const double clipped = std::clamp(raw, kProbClip, 1.0 - kProbClip);
      const double label = labels(r, c);
      loss -= label * std::log(clipped) + (1.0 - label) * std::log(1.0 - clipped);
      delta(r, c) = clipped == raw ? (raw - label) / batch : 0.0;
    }
  }
  g.loss = loss / batch;

  for (std::size_t i = L; i-- > 0;) {
    g.layers[i].weights = delta * acts[i].transpose();
    g.layers[i].biases = delta.rowwise().sum();
    if (i > 0) {
      Eigen::MatrixXd back = layers_[i].weights.transpose() * delta;
      delta = back.cwiseProduct((acts[i].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

double ActorNetwork::train_step(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) {
  const Gradients g = gradients(inputs, labels);
  ++step_;
  const double t = static_cast<double>(step_);
  const double correction1 = 1.0 - std::pow(kAdamBeta1, t);
  const double correction2 = 1.0 - std::pow(kAdamBeta2, t);
  auto update = [&](auto& param, auto& m, auto& v, const auto& grad) {
    m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * grad;
    v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * grad.cwiseProduct(grad);
    const auto m_hat = (m / correction1).array();
    const auto v_hat = (v / correction2).array();
    param.array() -= learning_rate_ * m_hat / (v_hat.sqrt() + kAdamEps);
  };
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    update(layers_[i].weights, first_moment_[i].weights, second_moment_[i].weights, g.layers[i].weights);
    update(layers_[i].biases, first_moment_[i].biases, second_moment_[i].biases, g.layers[i].biases);
  }
  return g.loss;
}

std::string ActorNetwork::to_json() const {
  nlohmann::json j;
  j["layer_sizes"] = sizes_;
  j["learning_rate"] = learning_rate_;
  j["step"] = step_;
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    nlohmann::json l = layer_to_json(layers_[i]);
    l["first_moment"] = layer_to_json(first_moment_[i]);
    l["second_moment"] = layer_to_json(second_moment_[i]);
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  return j.dump();
}

ActorNetwork ActorNetwork::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ActorNetwork net = zeros(j.at("layer_sizes").get<std::vector<std::size_t>>(),
                             j.at("learning_rate").get<double>());
    net.step_ = j.at("step").get<std::size_t>();
    const auto& layers = j.at("layers");
    if (layers.size() != net.layers_.size()) throw std::invalid_argument("checkpoint layer count mismatch");
    for (std::size_t i = 0; i < net.layers_.size(); ++i) {
      const std::size_t in = net.sizes_[i], out = net.sizes_[i + 1];
      net.layers_[i] = layer_from_json(layers[i], in, out);
      net.first_moment_[i] = layer_from_json(layers[i].at("first_moment"), in, out);
      net.second_moment_[i] = layer_from_json(layers[i].at("second_moment"), in, out);
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad actor checkpoint: ") + e.what());
  }
}

bool operator==(const ActorNetwork& a, const ActorNetwork& b) {
  if (a.sizes_ != b.sizes_ || a.step_ != b.step_ || a.learning_rate_ != b.learning_rate_) return false;
  auto same = [](const std::vector<ActorNetwork::Layer>& x, const std::vector<ActorNetwork::Layer>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].weights != y[i].weights || x[i].biases != y[i].biases) return false;
    }
    return true;
  };
  return same(a.layers_, b.layers_) && same(a.first_moment_, b.first_moment_) &&
         same(a.second_moment_, b.second_moment_);
}

}  // namespace qnoma
