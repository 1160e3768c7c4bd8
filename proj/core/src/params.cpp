// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnoma/channel.hpp"
#include "qnoma/random.hpp"

namespace qnoma {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPlacementStream = 0x706c6163656d6e74ULL;

bool is_uniform(const std::vector<double>& v) {
  return !v.empty() && std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

std::vector<std::size_t> default_layer_sizes(std::size_t n) { return {3 * n, 256, 128, n}; }

std::vector<double> placement(std::size_t n, bool random, std::uint64_t seed) {
  if (!random) return init_distances(n);
  RandomStream rng = RandomStream::derive(seed, kPlacementStream);
  return random_distances(n, rng);
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ParamError(field, what);
}

void require_per_device(const std::vector<double>& v, std::size_t n, const char* field) {
  require(v.size() == n, field,
          "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  for (double x : v) require(std::isfinite(x), field, "entries must be finite");
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "n_devices", "bandwidth_W", "overhead_vu", "payload_eta_q", "noise_N0",
      "cycles_per_bit_phi", "energy_eff_kappa", "f_max", "p_max", "p_qlc", "gamma", "nu", "V",
      "weights_c", "frame_T", "arrival_rate_lambda", "distances", "pathloss_exp_de",
      "carrier_freq", "pathloss_ref_Ad", "rician_K", "data_unit_bits", "random_placement",
      "actor", "sca", "seed"};
  return keys;
}

template <typename T>
void read_scalar(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParamError(key, std::string("wrong type: ") + e.what());
  }
}

// Scalar broadcasts to n entries; arrays must have exactly n.
void read_per_device(const json& j, const char* key, std::size_t n, std::vector<double>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    if (v.is_number()) {
      out.assign(n, v.get<double>());
    } else if (v.is_array()) {
      out = v.get<std::vector<double>>();
      require(out.size() == n, key,
              "expected " + std::to_string(n) + " entries, got " + std::to_string(out.size()));
    } else {
      throw ParamError(key, "expected a number or an array");
    }
  } catch (const json::exception& e) {
    throw ParamError(key, std::string("wrong type: ") + e.what());
  }
}

json to_json_value(const SystemParams& p) {
  json j;
  j["n_devices"] = p.n_devices;
  j["bandwidth_W"] = p.bandwidth_W;
  j["overhead_vu"] = p.overhead_vu;
  j["payload_eta_q"] = p.payload_eta_q;
  j["noise_N0"] = p.noise_N0;
  j["cycles_per_bit_phi"] = p.cycles_per_bit_phi;
  j["energy_eff_kappa"] = p.energy_eff_kappa;
  j["f_max"] = p.f_max;
  j["p_max"] = p.p_max;
  j["p_qlc"] = p.p_qlc;
  j["gamma"] = p.gamma;
  j["nu"] = p.nu;
  j["V"] = p.V;
  j["weights_c"] = p.weights_c;
  j["frame_T"] = p.frame_T;
  j["arrival_rate_lambda"] = p.arrival_rate_lambda;
  j["distances"] = p.distances;
  j["pathloss_exp_de"] = p.pathloss_exp_de;
  j["carrier_freq"] = p.carrier_freq;
  j["pathloss_ref_Ad"] = p.pathloss_ref_Ad;
  j["rician_K"] = p.rician_K;
  j["data_unit_bits"] = p.data_unit_bits;
  j["random_placement"] = p.random_placement;
  j["actor"] = {
      {"layer_sizes", p.resolved_layer_sizes()},
      {"learning_rate", p.actor.learning_rate},
      {"memory_size_q", p.actor.memory_size_q},
      {"train_interval_dT", p.actor.train_interval_dT},
      {"quant_interval_dM", p.actor.quant_interval_dM},
      {"M_max", p.resolved_M_max()},
      {"noise_sigma", p.actor.noise_sigma},
      {"batch_size", p.actor.batch_size},
      {"q_scale", p.actor.q_scale},
      {"y_scale", p.actor.y_scale},
  };
  j["sca"] = {
      {"tol_eps", p.sca.tol_eps},
      {"k_max", p.sca.k_max},
      {"subproblem_tol", p.sca.subproblem_tol},
  };
  j["seed"] = p.seed;
  return j;
}

}  // namespace

std::vector<std::size_t> SystemParams::resolved_layer_sizes() const {
  return actor.layer_sizes.empty() ? default_layer_sizes(n_devices) : actor.layer_sizes;
}

std::size_t SystemParams::resolved_M_max() const {
  if (actor.M_max != 0) return actor.M_max;
  const std::size_t bits = std::min<std::size_t>(n_devices, 10);
  return std::min<std::size_t>(std::size_t{1} << bits, 64);
}

double default_noise_power(double bandwidth_W) {
  // -174 dBm/Hz = 10^-20.4 W/Hz
  return std::pow(10.0, -20.4) * bandwidth_W;
}

std::vector<double> default_weights(std::size_t n_devices) {
  std::vector<double> c(n_devices);
  for (std::size_t i = 0; i < n_devices; ++i) c[i] = ((i + 1) % 2 == 1) ? 1.5 : 1.0;
  return c;
}

SystemParams default_params(std::size_t n_devices) {
  SystemParams p;
  p.n_devices = n_devices;
  p.noise_N0 = default_noise_power(p.bandwidth_W);
  p.f_max.assign(n_devices, 0.3e9);
  p.p_max.assign(n_devices, 0.1);
  p.p_qlc.assign(n_devices, 0.0);
  p.gamma.assign(n_devices, 0.08);
  p.weights_c = default_weights(n_devices);
  p.arrival_rate_lambda.assign(n_devices, 3e6);
  p.distances = init_distances(n_devices);
  return p;
}

SystemParams with_device_count(const SystemParams& p, std::size_t n_devices) {
  if (n_devices == 0) throw ParamError("n_devices", "must be at least 1");
  SystemParams q = p;
  q.n_devices = n_devices;
  auto rebroadcast = [&](std::vector<double>& v, const char* field) {
    if (!is_uniform(v)) throw ParamError(field, "cannot resize a non-uniform per-device vector");
    v.assign(n_devices, v.front());
  };
  rebroadcast(q.f_max, "f_max");
  rebroadcast(q.p_max, "p_max");
  rebroadcast(q.p_qlc, "p_qlc");
  rebroadcast(q.gamma, "gamma");
  rebroadcast(q.arrival_rate_lambda, "arrival_rate_lambda");
  if (p.weights_c == default_weights(p.n_devices)) {
    q.weights_c = default_weights(n_devices);
  } else {
    rebroadcast(q.weights_c, "weights_c");
  }
  q.distances = placement(n_devices, q.random_placement, q.seed);
  if (!p.actor.layer_sizes.empty()) {
    if (p.actor.layer_sizes != default_layer_sizes(p.n_devices)) {
      throw ParamError("actor.layer_sizes", "cannot resize a custom architecture");
    }
    q.actor.layer_sizes.clear();
  }
  return q;
}

const SystemParams& validate_params(const SystemParams& p) {
  const std::size_t n = p.n_devices;
  require(n >= 1, "n_devices", "must be at least 1");
  require(std::isfinite(p.bandwidth_W) && p.bandwidth_W > 0, "bandwidth_W", "must be > 0");
  require(p.overhead_vu >= 1.0, "overhead_vu", "must be >= 1");
  require(p.payload_eta_q > 0.0 && p.payload_eta_q <= 1.0, "payload_eta_q", "must be in (0, 1]");
  require(p.noise_N0 > 0.0 && std::isfinite(p.noise_N0), "noise_N0", "must be > 0");
  require(p.cycles_per_bit_phi > 0.0, "cycles_per_bit_phi", "must be > 0");
  require(p.energy_eff_kappa > 0.0, "energy_eff_kappa", "must be > 0");
  require_per_device(p.f_max, n, "f_max");
  require_per_device(p.p_max, n, "p_max");
  require_per_device(p.p_qlc, n, "p_qlc");
  require_per_device(p.gamma, n, "gamma");
  require_per_device(p.weights_c, n, "weights_c");
  require_per_device(p.arrival_rate_lambda, n, "arrival_rate_lambda");
  require_per_device(p.distances, n, "distances");
  for (std::size_t i = 0; i < n; ++i) {
    require(p.f_max[i] > 0.0, "f_max", "must be > 0");
    require(p.p_max[i] > 0.0, "p_max", "must be > 0");
    require(p.p_qlc[i] >= 0.0, "p_qlc", "must be >= 0");
    require(p.gamma[i] > 0.0, "gamma", "must be > 0");
    require(p.weights_c[i] >= 0.0, "weights_c", "must be >= 0");
    require(p.arrival_rate_lambda[i] >= 0.0, "arrival_rate_lambda", "must be >= 0");
    require(p.distances[i] > 0.0, "distances", "must be > 0");
  }
  require(p.nu > 0.0 && std::isfinite(p.nu), "nu", "must be > 0");
  require(p.V > 0.0 && std::isfinite(p.V), "V", "must be > 0");
  require(p.frame_T == 1.0, "frame_T", "frames are normalized; must equal 1");
  require(p.pathloss_exp_de > 0.0, "pathloss_exp_de", "must be > 0");
  require(p.carrier_freq > 0.0, "carrier_freq", "must be > 0");
  require(p.pathloss_ref_Ad > 0.0, "pathloss_ref_Ad", "must be > 0");
  require(p.rician_K >= 0.0, "rician_K", "must be >= 0");
  require(p.data_unit_bits > 0.0 && std::isfinite(p.data_unit_bits), "data_unit_bits",
          "must be > 0");

  const auto sizes = p.resolved_layer_sizes();
  require(sizes.size() >= 2, "actor.layer_sizes", "need at least input and output layers");
  require(sizes.front() == 3 * n, "actor.layer_sizes", "input layer must have 3N units");
  require(sizes.back() == n, "actor.layer_sizes", "output layer must have N units");
  for (std::size_t s : sizes) require(s >= 1, "actor.layer_sizes", "layers must be non-empty");
  require(p.actor.learning_rate > 0.0, "actor.learning_rate", "must be > 0");
  require(p.actor.memory_size_q >= 1, "actor.memory_size_q", "must be >= 1");
  require(p.actor.train_interval_dT >= 1, "actor.train_interval_dT", "must be >= 1");
  require(p.actor.quant_interval_dM >= 1, "actor.quant_interval_dM", "must be >= 1");
  require(p.actor.noise_sigma >= 0.0, "actor.noise_sigma", "must be >= 0");
  require(p.actor.batch_size >= 1, "actor.batch_size", "must be >= 1");
  require(p.actor.q_scale >= 0.0, "actor.q_scale", "must be >= 0");
  require(p.actor.y_scale >= 0.0, "actor.y_scale", "must be >= 0");
  require(p.sca.tol_eps > 0.0, "sca.tol_eps", "must be > 0");
  require(p.sca.k_max >= 1, "sca.k_max", "must be >= 1");
  require(p.sca.subproblem_tol > 0.0, "sca.subproblem_tol", "must be > 0");
  return p;
}

SystemParams params_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParamError("<config>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParamError("<config>", "top level must be an object");
  for (const auto& [key, _] : j.items()) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParamError(key, "unknown field");
    }
  }

  std::size_t n = 10;
  read_scalar(j, "n_devices", n);
  if (n == 0) throw ParamError("n_devices", "must be at least 1");
  SystemParams p = default_params(n);
  read_scalar(j, "bandwidth_W", p.bandwidth_W);
  p.noise_N0 = default_noise_power(p.bandwidth_W);
  read_scalar(j, "overhead_vu", p.overhead_vu);
  read_scalar(j, "payload_eta_q", p.payload_eta_q);
  read_scalar(j, "noise_N0", p.noise_N0);
  read_scalar(j, "cycles_per_bit_phi", p.cycles_per_bit_phi);
  read_scalar(j, "energy_eff_kappa", p.energy_eff_kappa);
  read_per_device(j, "f_max", n, p.f_max);
  read_per_device(j, "p_max", n, p.p_max);
  read_per_device(j, "p_qlc", n, p.p_qlc);
  read_per_device(j, "gamma", n, p.gamma);
  read_scalar(j, "nu", p.nu);
  read_scalar(j, "V", p.V);
  read_per_device(j, "weights_c", n, p.weights_c);
  read_scalar(j, "frame_T", p.frame_T);
  read_per_device(j, "arrival_rate_lambda", n, p.arrival_rate_lambda);
  read_scalar(j, "pathloss_exp_de", p.pathloss_exp_de);
  read_scalar(j, "carrier_freq", p.carrier_freq);
  read_scalar(j, "pathloss_ref_Ad", p.pathloss_ref_Ad);
  read_scalar(j, "rician_K", p.rician_K);
  read_scalar(j, "data_unit_bits", p.data_unit_bits);
  read_scalar(j, "random_placement", p.random_placement);
  read_scalar(j, "seed", p.seed);
  if (j.contains("distances")) {
    read_per_device(j, "distances", n, p.distances);
  } else {
    p.distances = placement(n, p.random_placement, p.seed);
  }

  if (j.contains("actor")) {
    const json& a = j.at("actor");
    if (!a.is_object()) throw ParamError("actor", "must be an object");
    static const std::vector<std::string> actor_keys = {
        "layer_sizes", "learning_rate", "memory_size_q", "train_interval_dT", "quant_interval_dM",
        "M_max", "noise_sigma", "batch_size", "q_scale", "y_scale"};
    for (const auto& [key, _] : a.items()) {
      if (std::find(actor_keys.begin(), actor_keys.end(), key) == actor_keys.end()) {
        throw ParamError("actor." + key, "unknown field");
      }
    }
    read_scalar(a, "layer_sizes", p.actor.layer_sizes);
    if (p.actor.layer_sizes == default_layer_sizes(n)) p.actor.layer_sizes.clear();
    read_scalar(a, "learning_rate", p.actor.learning_rate);
    read_scalar(a, "memory_size_q", p.actor.memory_size_q);
    read_scalar(a, "train_interval_dT", p.actor.train_interval_dT);
    read_scalar(a, "quant_interval_dM", p.actor.quant_interval_dM);
    read_scalar(a, "M_max", p.actor.M_max);
    read_scalar(a, "noise_sigma", p.actor.noise_sigma);
    read_scalar(a, "batch_size", p.actor.batch_size);
    read_scalar(a, "q_scale", p.actor.q_scale);
    read_scalar(a, "y_scale", p.actor.y_scale);
  }
  if (j.contains("sca")) {
    const json& s = j.at("sca");
    if (!s.is_object()) throw ParamError("sca", "must be an object");
    for (const auto& [key, _] : s.items()) {
      if (key != "tol_eps" && key != "k_max" && key != "subproblem_tol") {
        throw ParamError("sca." + key, "unknown field");
      }
    }
    read_scalar(s, "tol_eps", p.sca.tol_eps);
    read_scalar(s, "k_max", p.sca.k_max);
    read_scalar(s, "subproblem_tol", p.sca.subproblem_tol);
  }
  return validate_params(p);
}

std::string params_to_json(const SystemParams& p, int indent) {
  return to_json_value(p).dump(indent);
}

SystemParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("<config>", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

std::string apply_overrides(std::string_view json_text, std::span<const std::string> overrides) {
  json j = json_text.empty() ? json::object() : json::parse(json_text);
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParamError(ov, "override must look like path.to.field=value");
    }
    const std::string path = ov.substr(0, eq);
    const std::string raw = ov.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    json* node = &j;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
      if (key.empty()) throw ParamError(path, "empty path component");
      if (!node->is_object()) throw ParamError(path, "path crosses a non-object value");
      if (dot == std::string::npos) {
        (*node)[key] = value;
        break;
      }
      node = &(*node)[key];
      if (node->is_null()) *node = json::object();
      start = dot + 1;
    }
  }
  return j.dump(2);
}

std::string config_hash(const SystemParams& p) {
  const std::string canonical = params_to_json(p, -1);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qnoma
