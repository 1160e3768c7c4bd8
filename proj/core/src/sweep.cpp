// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include "qnoma/sim.hpp"

namespace qnoma {

std::string_view sweep_field_name(SweepField f) noexcept {
  switch (f) {
    case SweepField::Lambda: return "lambda";
    case SweepField::PQlc: return "p_qlc";
    case SweepField::V: return "V";
    case SweepField::Nu: return "nu";
    case SweepField::NDevices: return "n_devices";
  }
  return "lambda";
}

SweepField parse_sweep_field(std::string_view name) {
  for (SweepField f : {SweepField::Lambda, SweepField::PQlc, SweepField::V, SweepField::Nu,
                       SweepField::NDevices}) {
    if (name == sweep_field_name(f)) return f;
  }
  throw std::invalid_argument("unknown sweep field '" + std::string(name) +
                              "' (expected lambda, p_qlc, V, nu or n_devices)");
}

SystemParams apply_sweep_value(const SystemParams& base, SweepField field, double value) {
  SystemParams p = base;
  switch (field) {
    case SweepField::Lambda:
      p.arrival_rate_lambda.assign(p.n_devices, value);
      break;
    case SweepField::PQlc:
      p.p_qlc.assign(p.n_devices, value);
      break;
    case SweepField::V:
      p.V = value;
      break;
    case SweepField::Nu:
      p.nu = value;
      break;
    case SweepField::NDevices: {
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw std::invalid_argument("n_devices sweep values must be positive integers");
      }
      p = with_device_count(base, static_cast<std::size_t>(value));
      break;
    }
  }
  return p;
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (spec.seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
  if (spec.schemes.empty()) throw std::invalid_argument("sweep needs at least one scheme");
  if (spec.horizon_K == 0) throw std::invalid_argument("horizon_K must be at least 1");
  for (double v : spec.values) {
    try {
      validate_params(apply_sweep_value(spec.base, spec.swept_field, v));
    } catch (const ParamError& e) {
      throw std::invalid_argument("invalid " + std::string(sweep_field_name(spec.swept_field)) +
                                  " value " + std::to_string(v) + ": " + e.what());
    }
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  std::vector<SweepRow> rows;
  for (Scheme s : spec.schemes) {
    for (double v : spec.values) {
      for (std::uint64_t seed : spec.seeds) rows.push_back({v, seed, s, {}, {}});
    }
  }

  std::size_t workers = spec.workers == 0 ? std::thread::hardware_concurrency() : spec.workers;
  workers = std::clamp<std::size_t>(workers, 1, rows.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        SweepRow& row = rows[i];
        SchemeConfig cfg{row.scheme, spec.horizon_K, apply_sweep_value(spec.base, spec.swept_field, row.value),
                         spec.warmup_fraction};
        RunResult r = run_simulation(cfg, row.seed);
        row.full = std::move(r.full);
        row.steady = std::move(r.steady);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<SweepRow> aggregate_seeds(const std::vector<SweepRow>& rows) {
  std::vector<SweepRow> out;
  std::vector<std::size_t> counts;
  for (const SweepRow& row : rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const SweepRow& o) { return o.scheme == row.scheme && o.value == row.value; });
    if (it == out.end()) {
      SweepRow agg{row.value, 0, row.scheme, {}, {}};
      agg.steady.avg_power_per_device.assign(row.steady.avg_power_per_device.size(), 0.0);
      agg.full.avg_power_per_device.assign(row.full.avg_power_per_device.size(), 0.0);
      out.push_back(std::move(agg));
      counts.push_back(0);
      it = out.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - out.begin());
    ++counts[idx];
    for (auto [dst, src] : {std::pair{&it->full, &row.full}, std::pair{&it->steady, &row.steady}}) {
      dst->avg_data_queue += src->avg_data_queue;
      dst->avg_energy_queue += src->avg_energy_queue;
      dst->avg_power += src->avg_power;
      dst->weighted_sum_rate += src->weighted_sum_rate;
      dst->offload_ratio += src->offload_ratio;
      dst->wall_time_per_frame_us += src->wall_time_per_frame_us;
      dst->first_frame = src->first_frame;
      dst->frame_count = src->frame_count;
      for (std::size_t i = 0; i < dst->avg_power_per_device.size(); ++i) {
        dst->avg_power_per_device[i] += src->avg_power_per_device[i];
      }
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double n = static_cast<double>(counts[k]);
    for (RunMetrics* m : {&out[k].full, &out[k].steady}) {
      m->avg_data_queue /= n;
      m->avg_energy_queue /= n;
      m->avg_power /= n;
      m->weighted_sum_rate /= n;
      m->offload_ratio /= n;
      m->wall_time_per_frame_us /= n;
      for (double& e : m->avg_power_per_device) e /= n;
    }
  }
  return out;
}

}  // namespace qnoma
