// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

// qnoma: command-line driver for simulations, sweeps and timing runs.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qnoma/bench.hpp"
#include "qnoma/io.hpp"
#include "qnoma/params.hpp"
#include "qnoma/sim.hpp"
#include "qnoma/sweep.hpp"

namespace fs = std::filesystem;
using namespace qnoma;

namespace {

struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_config_options(CLI::App* cmd, ConfigOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a field, e.g. --set nu=1000 --set actor.noise_sigma=2")
      ->take_all();
  cmd->add_option("--seed", o.seed, "Run seed (default: the config's seed)");
}

SystemParams load(const ConfigOptions& o) {
  std::string text = "{}";
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open " + o.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  SystemParams p = params_from_json(apply_overrides(text, o.overrides));
  if (o.seed) p.seed = *o.seed;
  validate_params(p);
  return p;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

void print_metrics(std::string_view label, const RunMetrics& m) {
  std::cout << label << ": Q=" << format_double(m.avg_data_queue) << " Y=" << format_double(m.avg_energy_queue)
            << " power=" << format_double(m.avg_power) << " W rate=" << format_double(m.weighted_sum_rate)
            << " offload=" << format_double(m.offload_ratio) << " (" << m.frame_count << " frames)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qnoma: quantum-secure NOMA edge-computing simulator"};
  app.require_subcommand(1);

  ConfigOptions sim_cfg, sweep_cfg, bench_cfg, cmp_cfg, val_cfg;
  std::string out_dir = "out";
  std::string scheme_text = "NOMA_Heuristic";
  std::size_t horizon = 10000;
  double warmup = 0.5;

  auto* simulate = app.add_subcommand("simulate", "Run one scheme and write frames.csv and summary.json");
  add_config_options(simulate, sim_cfg);
  simulate->add_option("--scheme", scheme_text, "NOMA_Heuristic, NOMA_SCA or TDMA");
  simulate->add_option("-K,--horizon", horizon, "Frames to simulate")->check(CLI::PositiveNumber);
  simulate->add_option("--warmup", warmup, "Fraction of frames excluded from steady metrics")
      ->check(CLI::Range(0.0, 0.999));
  simulate->add_option("-o,--out", out_dir, "Output directory");

  std::string field_text;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> scheme_list{"NOMA_Heuristic"};
  std::size_t workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Sweep one field over values and seeds");
  add_config_options(sweep, sweep_cfg);
  sweep->add_option("--field", field_text, "lambda, p_qlc, V, nu or n_devices")->required();
  sweep->add_option("--values", values, "Values of the swept field")->required()->delimiter(',');
  sweep->add_option("--seeds", seeds, "Seeds")->required()->delimiter(',');
  sweep->add_option("--schemes", scheme_list, "Schemes")->delimiter(',');
  sweep->add_option("-K,--horizon", horizon, "Frames per run")->check(CLI::PositiveNumber);
  sweep->add_option("--warmup", warmup, "Warmup fraction")->check(CLI::Range(0.0, 0.999));
  sweep->add_option("-j,--workers", workers, "Parallel runs (0 = all cores)");
  sweep->add_option("-o,--out", out_dir, "Output directory");

  std::vector<std::size_t> n_values{10, 15, 20, 25, 30, 35};
  std::size_t repetitions = 30;
  auto* bench = app.add_subcommand("bench", "Time the power allocators over device counts");
  add_config_options(bench, bench_cfg);
  bench->add_option("--n", n_values, "Device counts")->delimiter(',');
  bench->add_option("--reps", repetitions, "Repetitions per device count")->check(CLI::PositiveNumber);
  bench->add_option("-o,--out", out_dir, "Output directory");

  auto* compare = app.add_subcommand("compare", "Run all three schemes on a shared seed");
  add_config_options(compare, cmp_cfg);
  compare->add_option("-K,--horizon", horizon, "Frames per run")->check(CLI::PositiveNumber);
  compare->add_option("--warmup", warmup, "Warmup fraction")->check(CLI::Range(0.0, 0.999));
  compare->add_option("-o,--out", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate-config", "Check a configuration and print it resolved");
  add_config_options(validate, val_cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const SystemParams p = load(sim_cfg);
      const Scheme scheme = parse_scheme(scheme_text);
      const RunResult r = run_simulation({scheme, horizon, p, warmup}, p.seed);
      auto frames = open_out(out_dir, "frames.csv");
      write_frames_csv(frames, r.frames, p, p.seed);
      open_out(out_dir, "summary.json") << summary_json(r, scheme, p, p.seed, horizon) << '\n';
      print_metrics("full", r.full);
      print_metrics("steady", r.steady);
      if (r.clamp_warnings > 0) std::cerr << "warning: " << r.clamp_warnings << " rate clamps beyond tolerance\n";
    } else if (*sweep) {
      SweepSpec spec;
      spec.base = load(sweep_cfg);
      spec.swept_field = parse_sweep_field(field_text);
      spec.values = values;
      spec.seeds = seeds;
      spec.schemes.clear();
      for (const auto& s : scheme_list) spec.schemes.push_back(parse_scheme(s));
      spec.horizon_K = horizon;
      spec.warmup_fraction = warmup;
      spec.workers = workers;
      const auto rows = run_sweep(spec);
      const auto agg = aggregate_seeds(rows);
      auto table = open_out(out_dir, "sweep.csv");
      write_sweep_csv(table, rows, spec.swept_field, spec.base);
      auto means = open_out(out_dir, "sweep_aggregate.csv");
      write_sweep_csv(means, agg, spec.swept_field, spec.base, true);
      for (const auto& a : agg) {
        print_metrics(std::string(scheme_name(a.scheme)) + " " + field_text + "=" + format_double(a.value),
                      a.steady);
      }
    } else if (*bench) {
      const SystemParams p = load(bench_cfg);
      BenchOptions opt;
      opt.repetitions = repetitions;
      opt.seed = p.seed;
      const auto rows = run_bench(n_values, p, opt);
      auto table = open_out(out_dir, "bench.csv");
      write_bench_csv(table, rows, p, p.seed);
      auto detail = open_out(out_dir, "bench_detail.csv");
      write_bench_detail_csv(detail, rows, p, p.seed);
      write_bench_csv(std::cout, rows, p, p.seed);
    } else if (*compare) {
      const SystemParams p = load(cmp_cfg);
      const std::vector<Scheme> schemes{Scheme::Tdma, Scheme::NomaHeuristic, Scheme::NomaSca};
      std::vector<RunResult> runs;
      for (Scheme s : schemes) {
        runs.push_back(run_simulation({s, horizon, p, warmup}, p.seed));
        print_metrics(scheme_name(s), runs.back().steady);
      }
      auto table = open_out(out_dir, "compare.csv");
      write_compare_csv(table, schemes, runs, p, p.seed);
    } else if (*validate) {
      const SystemParams p = load(val_cfg);
      std::cout << params_to_json(p, 2) << '\n' << "config_hash=" << config_hash(p) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
