// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qnoma {

/// Raised by validate_params and the config loader. field() names the
/// offending SystemParams field using its dotted config path.
class ParamError : public std::invalid_argument {
 public:
  ParamError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ActorConfig {
  // Empty means [3N, 256, 128, N].
  std::vector<std::size_t> layer_sizes;
  double learning_rate = 1e-3;
  std::size_t memory_size_q = 1024;
  std::size_t train_interval_dT = 20;
  std::size_t quant_interval_dM = 32;
  // 0 means min(2^min(N,10), 64).
  std::size_t M_max = 0;
  double noise_sigma = 3.0;
  std::size_t batch_size = 128;
  // Input normalization scales; 0 selects 10*lambda*T and 10*nu*gamma.
  double q_scale = 0.0;
  double y_scale = 0.0;
};

struct ScaConfig {
  double tol_eps = 1e-4;
  std::size_t k_max = 100;
  double subproblem_tol = 1e-9;
};

/// Every physical and algorithmic constant of the system. Per-device
/// quantities are vectors of length n_devices. Data quantities (queues,
/// arrivals, rates) are expressed in data units of data_unit_bits bits;
/// data_unit_bits = 1 gives plain bits.
struct SystemParams {
  std::size_t n_devices = 10;
  double bandwidth_W = 2e6;          // Hz
  double overhead_vu = 1.1;
  double payload_eta_q = 1.0;
  double noise_N0 = 0.0;             // W
  double cycles_per_bit_phi = 100.0;
  double energy_eff_kappa = 1e-26;   // J s^2 / cycle^3
  std::vector<double> f_max;         // cycles/s
  std::vector<double> p_max;         // W
  std::vector<double> p_qlc;         // W
  std::vector<double> gamma;         // W
  double nu = 60.0;
  double V = 20.0;
  std::vector<double> weights_c;
  double frame_T = 1.0;              // s
  std::vector<double> arrival_rate_lambda;  // bit/s
  std::vector<double> distances;     // m
  double pathloss_exp_de = 3.0;
  double carrier_freq = 915e6;       // Hz
  double pathloss_ref_Ad = 4.11;
  double rician_K = 3.0;
  double data_unit_bits = 1e6;
  bool random_placement = false;
  ActorConfig actor;
  ScaConfig sca;
  std::uint64_t seed = 1;

  /// Data units per second delivered per bit/s/Hz of spectral efficiency,
  /// before the payload factor: W / (v_u * unit).
  double offload_rate_scale() const noexcept {
    return bandwidth_W / (overhead_vu * data_unit_bits);
  }
  /// CPU cycles needed for one data unit.
  double cycles_per_unit() const noexcept {
    return cycles_per_bit_phi * data_unit_bits;
  }
  /// Mean arrivals per frame for device i, in data units.
  double mean_arrival_units(std::size_t i) const {
    return arrival_rate_lambda.at(i) * frame_T / data_unit_bits;
  }
  std::vector<std::size_t> resolved_layer_sizes() const;
  std::size_t resolved_M_max() const;
};

/// Thermal noise over the default bandwidth, -174 dBm/Hz.
double default_noise_power(double bandwidth_W);

/// Table-I configuration for n devices with all derived defaults filled in.
SystemParams default_params(std::size_t n_devices = 10);

/// Rebuilds every per-device vector for a new device count, keeping
/// uniform values and re-deriving placement, weights and layer sizes.
SystemParams with_device_count(const SystemParams& p, std::size_t n_devices);

/// c_i = 1.5 for odd 1-based indices, 1.0 otherwise.
std::vector<double> default_weights(std::size_t n_devices);

/// Returns p unchanged when every invariant holds; throws ParamError.
const SystemParams& validate_params(const SystemParams& p);

/// Loads from JSON text. Per-device fields accept a scalar (broadcast) or an
/// array of length n_devices; omitted fields take Table-I defaults.
SystemParams params_from_json(std::string_view text);
std::string params_to_json(const SystemParams& p, int indent = 2);
SystemParams load_params_file(const std::string& path);

/// Applies "dotted.path=value" overrides to JSON config text. value is parsed
/// as JSON, falling back to a plain string.
std::string apply_overrides(std::string_view json_text,
                            std::span<const std::string> overrides);

/// FNV-1a hash of the canonical resolved configuration, as 16 hex digits.
std::string config_hash(const SystemParams& p);

}  // namespace qnoma
