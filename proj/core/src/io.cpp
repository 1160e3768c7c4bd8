// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnoma/io.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qnoma {

namespace {

using nlohmann::json;

const char* const kGroups[] = {"Q", "Y", "h", "x", "f", "P", "r", "e", "A"};

template <typename T>
void write_joined(std::ostream& os, const std::vector<T>& v) {
  for (const T& x : v) os << ',' << format_double(static_cast<double>(x));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // from_chars rejects "inf"/"nan" spellings produced elsewhere.
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("frames csv: bad number '" + s + "'");
  }
  return v;
}

json metrics_json(const RunMetrics& m) {
  return {{"avg_data_queue", m.avg_data_queue},
          {"avg_energy_queue", m.avg_energy_queue},
          {"avg_power", m.avg_power},
          {"avg_power_per_device", m.avg_power_per_device},
          {"weighted_sum_rate", m.weighted_sum_rate},
          {"offload_ratio", m.offload_ratio},
          {"wall_time_per_frame_us", m.wall_time_per_frame_us},
          {"first_frame", m.first_frame},
          {"frame_count", m.frame_count}};
}

void write_metrics(std::ostream& os, const RunMetrics& m) {
  os << ',' << format_double(m.avg_data_queue) << ',' << format_double(m.avg_energy_queue) << ','
     << format_double(m.avg_power) << ',' << format_double(m.weighted_sum_rate) << ','
     << format_double(m.offload_ratio);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string artifact_header(std::string_view kind, const SystemParams& p, std::uint64_t seed) {
  std::ostringstream os;
  os << "# qnoma kind=" << kind << " schema=" << kOutputSchemaVersion << " config_hash=" << config_hash(p)
     << " seed=" << seed;
  return os.str();
}

std::vector<std::string> frames_csv_columns(std::size_t n_devices) {
  std::vector<std::string> cols{"t"};
  for (const char* g : kGroups) {
    for (std::size_t i = 0; i < n_devices; ++i) cols.push_back(std::string(g) + "_" + std::to_string(i));
  }
  for (const char* c : {"objective", "M_t", "chosen_index", "loss"}) cols.emplace_back(c);
  return cols;
}

void write_frames_csv(std::ostream& os, std::span<const FrameRecord> frames, const SystemParams& p,
                      std::uint64_t seed) {
  os << artifact_header("frames", p, seed) << '\n';
  const auto cols = frames_csv_columns(p.n_devices);
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  for (const FrameRecord& r : frames) {
    const auto& a = r.allocation;
    os << r.frame_t;
    write_joined(os, r.observation.data_queue_Q);
    write_joined(os, r.observation.energy_queue_Y);
    write_joined(os, r.observation.gains_h);
    write_joined(os, a.offload_x);
    write_joined(os, a.freq_f);
    write_joined(os, a.power_P);
    write_joined(os, a.rate_r);
    write_joined(os, a.energy_e);
    write_joined(os, r.arrivals_A);
    os << ',' << format_double(a.objective) << ',' << r.num_candidates_Mt << ',' << r.chosen_candidate_index
       << ',';
    if (r.training_loss) os << format_double(*r.training_loss);
    os << '\n';
  }
}

std::vector<FrameRecord> read_frames_csv(std::istream& is, std::size_t n) {
  const auto cols = frames_csv_columns(n);
  std::string line;
  bool header_seen = false;
  std::vector<FrameRecord> out;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (!header_seen) {
      if (cells != cols) throw std::runtime_error("frames csv: unexpected header");
      header_seen = true;
      continue;
    }
    if (cells.size() != cols.size()) throw std::runtime_error("frames csv: wrong cell count");
    FrameRecord r;
    std::size_t k = 0;
    r.frame_t = static_cast<std::size_t>(parse_double(cells[k++]));
    auto take = [&](std::vector<double>& v) {
      v.resize(n);
      for (auto& x : v) x = parse_double(cells[k++]);
    };
    take(r.observation.data_queue_Q);
    take(r.observation.energy_queue_Y);
    take(r.observation.gains_h);
    r.observation.frame_t = r.frame_t;
    auto& a = r.allocation;
    a.offload_x.resize(n);
    for (auto& x : a.offload_x) {
      const double v = parse_double(cells[k++]);
      if (v != 0.0 && v != 1.0) throw std::runtime_error("frames csv: offload flag not binary");
      x = static_cast<std::uint8_t>(v);
    }
    take(a.freq_f);
    take(a.power_P);
    take(a.rate_r);
    take(a.energy_e);
    take(r.arrivals_A);
    a.sinr_rho.assign(n, 0.0);
    a.objective = parse_double(cells[k++]);
    r.num_candidates_Mt = static_cast<std::size_t>(parse_double(cells[k++]));
    r.chosen_candidate_index = static_cast<std::size_t>(parse_double(cells[k++]));
    if (!cells[k].empty()) r.training_loss = parse_double(cells[k]);
    out.push_back(std::move(r));
  }
  if (!header_seen) throw std::runtime_error("frames csv: missing header");
  return out;
}

std::string summary_json(const RunResult& result, Scheme scheme, const SystemParams& p, std::uint64_t seed,
                         std::size_t horizon) {
  json j;
  j["schema"] = kOutputSchemaVersion;
  j["scheme"] = std::string(scheme_name(scheme));
  j["seed"] = seed;
  j["horizon_K"] = horizon;
  j["config_hash"] = config_hash(p);
  j["config"] = json::parse(params_to_json(p, -1));
  j["full"] = metrics_json(result.full);
  j["steady"] = metrics_json(result.steady);
  j["clamp_warnings"] = result.clamp_warnings;
  return j.dump(2);
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, SweepField field, const SystemParams& p,
                     bool aggregated) {
  os << artifact_header(aggregated ? "sweep_aggregate" : "sweep", p, p.seed) << '\n';
  os << sweep_field_name(field) << ",seed,scheme";
  for (const char* prefix : {"steady_", "full_"}) {
    for (const char* m : {"avg_data_queue", "avg_energy_queue", "avg_power", "weighted_sum_rate",
                          "offload_ratio"}) {
      os << ',' << prefix << m;
    }
  }
  os << '\n';
  for (const SweepRow& r : rows) {
    os << format_double(r.value) << ',';
    if (aggregated) {
      os << "mean";
    } else {
      os << r.seed;
    }
    os << ',' << scheme_name(r.scheme);
    write_metrics(os, r.steady);
    write_metrics(os, r.full);
    os << '\n';
  }
}

void write_compare_csv(std::ostream& os, std::span<const Scheme> schemes, std::span<const RunResult> runs,
                       const SystemParams& p, std::uint64_t seed) {
  if (schemes.size() != runs.size()) throw std::invalid_argument("one run per scheme expected");
  os << artifact_header("compare", p, seed) << '\n' << 't';
  for (Scheme s : schemes) {
    for (const char* m : {"mean_Q", "mean_power", "weighted_rate", "objective"}) {
      os << ',' << scheme_name(s) << '_' << m;
    }
  }
  os << '\n';
  std::size_t frames = runs.empty() ? 0 : runs[0].frames.size();
  for (const auto& r : runs) frames = std::min(frames, r.frames.size());
  const double n = static_cast<double>(p.n_devices);
  for (std::size_t k = 0; k < frames; ++k) {
    os << runs[0].frames[k].frame_t;
    for (const auto& run : runs) {
      const FrameRecord& r = run.frames[k];
      double q = 0.0, power = 0.0, rate = 0.0;
      for (std::size_t i = 0; i < p.n_devices; ++i) {
        q += r.observation.data_queue_Q[i];
        power += r.allocation.energy_e[i];
        rate += p.weights_c[i] * r.allocation.rate_r[i];
      }
      os << ',' << format_double(q / n) << ',' << format_double(power / n) << ',' << format_double(rate) << ','
         << format_double(r.allocation.objective);
    }
    os << '\n';
  }
}

void write_bench_csv(std::ostream& os, std::span<const BenchRow> rows, const SystemParams& p,
                     std::uint64_t seed) {
  os << artifact_header("bench", p, seed) << '\n' << "N,TDMA,NOMA_Heuristic,NOMA_SCA\n";
  for (const BenchRow& r : rows) {
    os << r.n_devices << ',' << format_double(r.tdma.mean_us) << ',' << format_double(r.greedy.mean_us) << ','
       << format_double(r.sca.mean_us) << '\n';
  }
}

void write_bench_detail_csv(std::ostream& os, std::span<const BenchRow> rows, const SystemParams& p,
                            std::uint64_t seed) {
  os << artifact_header("bench_detail", p, seed) << '\n'
     << "N,TDMA_mean_us,TDMA_std_us,NOMA_Heuristic_mean_us,NOMA_Heuristic_std_us,NOMA_SCA_mean_us,"
        "NOMA_SCA_std_us\n";
  for (const BenchRow& r : rows) {
    os << r.n_devices;
    for (const TimingStats* t : {&r.tdma, &r.greedy, &r.sca}) {
      os << ',' << format_double(t->mean_us) << ',' << format_double(t->std_us);
    }
    os << '\n';
  }
}

void write_sca_trace_csv(std::ostream& os, const ScaResult& result) {
  os << "k,F,surrogate,step_norm\n";
  for (const ScaIterate& it : result.trace) {
    os << it.iteration_k << ',' << format_double(it.true_objective) << ','
       << format_double(it.surrogate_objective) << ',' << format_double(it.step_norm) << '\n';
  }
}

}  // namespace qnoma
