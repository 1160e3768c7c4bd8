// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "qnoma/bench.hpp"
#include "qnoma/io.hpp"
#include "qnoma/objective.hpp"
#include "qnoma/sim.hpp"
#include "qnoma/sweep.hpp"

using namespace qnoma;
using qnoma::testing::rel_err;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::size_t cells(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles print in shortest round-trip form") {
  RandomStream rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20.0, 20.0));
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(back == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("artifact header carries hash and seed") {
  const SystemParams p = default_params();
  const std::string h = artifact_header("frames", p, 17);
  CHECK(h.rfind("# qnoma kind=frames", 0) == 0);
  CHECK(h.find("config_hash=" + config_hash(p)) != std::string::npos);
  CHECK(h.find("seed=17") != std::string::npos);
  CHECK(h.find("schema=") != std::string::npos);
}

TEST_CASE("frames csv round trips and objectives re-evaluate") {
  const SystemParams p = default_params();
  const RunResult r = run_simulation({Scheme::NomaHeuristic, 60, p, 0.5}, 2);
  std::ostringstream os;
  write_frames_csv(os, r.frames, p, 2);
  const auto text = os.str();
  const auto rows = lines(text);
  REQUIRE(rows.size() == 62);
  CHECK(cells(rows[1]) == frames_csv_columns(p.n_devices).size());
  CHECK(rows[1].rfind("t,Q_0,", 0) == 0);

  std::istringstream in(text);
  const auto back = read_frames_csv(in, p.n_devices);
  REQUIRE(back.size() == r.frames.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    const auto& a = r.frames[k];
    const auto& b = back[k];
    CHECK(b.frame_t == a.frame_t);
    CHECK(b.observation.data_queue_Q == a.observation.data_queue_Q);
    CHECK(b.allocation.power_P == a.allocation.power_P);
    CHECK(b.allocation.rate_r == a.allocation.rate_r);
    CHECK(b.allocation.objective == a.allocation.objective);
    CHECK(b.training_loss == a.training_loss);
    CHECK(rel_err(evaluate_objective(b.allocation, b.observation, p), a.allocation.objective) <= 1e-9);
  }
}

TEST_CASE("frames csv reader rejects malformed input") {
  std::istringstream empty("# nothing\n");
  CHECK_THROWS(read_frames_csv(empty, 2));
  std::istringstream wrong("t,Q_0\n1,2\n");
  CHECK_THROWS(read_frames_csv(wrong, 2));
}

TEST_CASE("summary json holds metrics and the config") {
  SystemParams p = default_params();
  const RunResult r = run_simulation({Scheme::Tdma, 20, p, 0.5}, 3);
  const auto j = nlohmann::json::parse(summary_json(r, Scheme::Tdma, p, 3, 20));
  CHECK(j["scheme"] == "TDMA");
  CHECK(j["seed"] == 3);
  CHECK(j["config_hash"] == config_hash(p));
  CHECK(j["steady"]["frame_count"] == 10);
  CHECK(j["full"]["avg_power"].get<double>() == r.full.avg_power);
  CHECK(config_hash(params_from_json(j["config"].dump())) == config_hash(p));
}

TEST_CASE("sweep and compare tables have one row per run or frame") {
  SweepSpec spec;
  spec.base = default_params();
  spec.swept_field = SweepField::V;
  spec.values = {20.0, 50.0};
  spec.seeds = {1, 2, 3};
  spec.schemes = {Scheme::NomaHeuristic};
  spec.horizon_K = 20;
  const auto rows = run_sweep(spec);
  std::ostringstream os;
  write_sweep_csv(os, rows, spec.swept_field, spec.base);
  auto out = lines(os.str());
  REQUIRE(out.size() == 2 + 6);
  CHECK(out[1].rfind("V,seed,scheme,steady_avg_data_queue", 0) == 0);
  CHECK(cells(out[2]) == cells(out[1]));
  std::ostringstream agg;
  write_sweep_csv(agg, aggregate_seeds(rows), spec.swept_field, spec.base, true);
  out = lines(agg.str());
  REQUIRE(out.size() == 2 + 2);
  CHECK(out[2].find(",mean,") != std::string::npos);

  const std::vector<Scheme> schemes{Scheme::Tdma, Scheme::NomaHeuristic};
  std::vector<RunResult> runs;
  for (Scheme s : schemes) runs.push_back(run_simulation({s, 15, spec.base, 0.5}, 1));
  std::ostringstream cmp;
  write_compare_csv(cmp, schemes, runs, spec.base, 1);
  out = lines(cmp.str());
  REQUIRE(out.size() == 2 + 15);
  CHECK(out[1] ==
        "t,TDMA_mean_Q,TDMA_mean_power,TDMA_weighted_rate,TDMA_objective,NOMA_Heuristic_mean_Q,"
        "NOMA_Heuristic_mean_power,NOMA_Heuristic_weighted_rate,NOMA_Heuristic_objective");
}

TEST_CASE("bench table has one row per device count and four columns") {
  BenchOptions opt;
  opt.repetitions = 2;
  opt.inner_calls = 1;
  const std::vector<std::size_t> n{10, 15, 20, 25, 30, 35};
  const auto rows = run_bench(n, default_params(), opt);
  std::ostringstream os;
  write_bench_csv(os, rows, default_params(), opt.seed);
  const auto out = lines(os.str());
  REQUIRE(out.size() == 2 + 6);
  CHECK(out[1] == "N,TDMA,NOMA_Heuristic,NOMA_SCA");
  for (std::size_t k = 2; k < out.size(); ++k) CHECK(cells(out[k]) == 4);
  for (const auto& r : rows) {
    CHECK(r.greedy.mean_us > 0.0);
    CHECK(r.sca.mean_us > 0.0);
  }
}

}
