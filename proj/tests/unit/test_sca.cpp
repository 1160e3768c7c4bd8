// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "qnoma/io.hpp"
#include "qnoma/noma.hpp"
#include "qnoma/sca.hpp"

using namespace qnoma;
using qnoma::testing::rel_err;

namespace {

PowerSubproblem random_subproblem(std::size_t n, RandomStream& rng) {
  const SystemParams p = with_device_count(default_params(), n);
  return build_subproblem(Decision::all_offload(n), qnoma::testing::random_frame(p, rng), p);
}

std::vector<double> random_feasible_point(const PowerSubproblem& sp, RandomStream& rng) {
  const auto start = uniform_feasible_start(sp);
  std::vector<double> P(sp.size());
  for (std::size_t k = 0; k < sp.size(); ++k) P[k] = rng.uniform() * start[k];
  return P;
}

PowerSubproblem single(double h, double queue, double y) {
  const SystemParams p = with_device_count(default_params(), 1);
  return build_subproblem(Decision::all_offload(1), FrameObservation{1, {h}, {queue}, {y}}, p);
}

}  // namespace

TEST_SUITE("alloc_sca") {

TEST_CASE("zero power has zero objective") {
  RandomStream rng(1);
  const PowerSubproblem sp = random_subproblem(5, rng);
  const std::vector<double> zero(5, 0.0);
  CHECK(dc_objective(zero, sp) == 0.0);
  CHECK(direct_objective(zero, sp) == 0.0);
}

TEST_CASE("single member objective has the interference-free form") {
  const PowerSubproblem sp = single(3e-11, 15.0, 4.0);
  const std::vector<double> P{0.06};
  const auto& m = sp.members[0];
  const double expected =
      sca_alpha(sp, 0) * std::log2(1.0 + 0.06 * m.gain_h / sp.noise_N0) - m.coeff_b * 0.06;
  CHECK(rel_err(dc_objective(P, sp), expected) <= 1e-12);
  CHECK(rel_err(direct_objective(P, sp), expected) <= 1e-12);
}

TEST_CASE("difference-of-logs form equals the SINR form") {
  RandomStream rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const PowerSubproblem sp = random_subproblem(4, rng);
    std::vector<double> P(4);
    for (std::size_t k = 0; k < 4; ++k) P[k] = rng.uniform(0.0, sp.members[k].power_cap_Pmax);
    REQUIRE(rel_err(dc_objective(P, sp), direct_objective(P, sp)) <= 1e-12);
  }
}

TEST_CASE("last member's subtracted term is the noise floor") {
  RandomStream rng(3);
  const PowerSubproblem sp = random_subproblem(4, rng);
  const std::vector<double> P{0.02, 0.05, 0.07, 0.01};
  const LinearizedL lin = linearize_l(P, sp);
  CHECK(lin.values[3] == std::log2(sp.noise_N0));
  for (double g : lin.gradient[3]) CHECK(g == 0.0);
  CHECK(l_values(P, sp)[3] == std::log2(sp.noise_N0));
}

TEST_CASE("tangent gradient matches central differences") {
  RandomStream rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const PowerSubproblem sp = random_subproblem(6, rng);
    std::vector<double> P(6);
    for (std::size_t k = 0; k < 6; ++k) P[k] = rng.uniform(0.1, 0.9) * sp.members[k].power_cap_Pmax;
    const LinearizedL lin = linearize_l(P, sp);
    for (std::size_t j = 0; j < 6; ++j) {
      const double step = 1e-6 * sp.members[j].power_cap_Pmax;
      auto up = P, down = P;
      up[j] += step;
      down[j] -= step;
      const auto lu = l_values(up, sp), ld = l_values(down, sp);
      for (std::size_t k = 0; k < 6; ++k) {
        const double fd = (lu[k] - ld[k]) / (2.0 * step);
        if (j <= k) {
          CHECK(lin.gradient[k][j] == 0.0);
          CHECK(std::abs(fd) <= 1e-6);
        } else {
          CHECK(rel_err(lin.gradient[k][j], fd) <= 1e-5);
        }
      }
    }
  }
}

TEST_CASE("tangent plane bounds the concave term from above") {
  RandomStream rng(5);
  const PowerSubproblem sp = random_subproblem(6, rng);
  const std::vector<double> anchor = random_feasible_point(sp, rng);
  const LinearizedL lin = linearize_l(anchor, sp);
  const auto at_anchor = l_values(anchor, sp);
  for (std::size_t k = 0; k < 6; ++k) CHECK(linearized_l_value(lin, k, anchor) == at_anchor[k]);
  for (int s = 0; s < 100; ++s) {
    std::vector<double> P(6);
    for (std::size_t k = 0; k < 6; ++k) P[k] = rng.uniform(0.0, sp.members[k].power_cap_Pmax);
    const auto l = l_values(P, sp);
    for (std::size_t k = 0; k < 6; ++k) CHECK(linearized_l_value(lin, k, P) >= l[k] - 1e-10);
    CHECK(surrogate_objective(P, lin, sp) <= direct_objective(P, sp) + 1e-9 * std::abs(direct_objective(P, sp)));
  }
}

TEST_CASE("uniform start is strictly feasible") {
  RandomStream rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const PowerSubproblem sp = random_subproblem(10, rng);
    const auto P = uniform_feasible_start(sp);
    CHECK(max_constraint_violation(P, sp) <= 0.0);
    for (std::size_t k = 0; k < sp.size(); ++k) {
      if (sp.members[k].rate_cap_Gamma == 0.0) CHECK(P[k] == 0.0);
    }
  }
}

TEST_CASE("single member without energy backlog hits full power") {
  const PowerSubproblem sp = single(3e-11, 1e4, 0.0);
  const LinearizedL lin = linearize_l(uniform_feasible_start(sp), sp);
  const auto P = solve_convex_subproblem(lin, sp);
  CHECK(P[0] == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("single member optimum equals the closed form") {
  RandomStream rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const PowerSubproblem sp = single(rng.uniform(5e-12, 5e-11), rng.uniform(0.5, 30.0), rng.uniform(0.5, 48.0));
    const GreedySolution g = greedy_power_allocation(sp);
    const LinearizedL lin = linearize_l(uniform_feasible_start(sp), sp);
    const auto P = solve_convex_subproblem(lin, sp);
    CHECK(rel_err(direct_objective(P, sp), direct_objective(g.powers_P, sp)) <= 1e-6);
    const ScaResult res = sca_power_allocation(sp);
    CHECK(rel_err(direct_objective(res.powers_P, sp), direct_objective(g.powers_P, sp)) <= 1e-6);
  }
}

TEST_CASE("two-member subproblem matches a dense grid") {
  RandomStream rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const PowerSubproblem sp = random_subproblem(2, rng);
    const LinearizedL lin = linearize_l(random_feasible_point(sp, rng), sp);
    const auto P = solve_convex_subproblem(lin, sp);
    CHECK(max_constraint_violation(P, sp) <= 1e-8);
    const std::size_t cells = 500;
    const double s0 = sp.members[0].power_cap_Pmax / cells, s1 = sp.members[1].power_cap_Pmax / cells;
    double best = -1e300, variation = 0.0;
    std::vector<double> grid_arg(2, 0.0);
    for (std::size_t a = 0; a <= cells; ++a) {
      for (std::size_t b = 0; b <= cells; ++b) {
        const std::vector<double> Q{s0 * static_cast<double>(a), s1 * static_cast<double>(b)};
        if (max_constraint_violation(Q, sp) > 0.0) continue;
        const double v = surrogate_objective(Q, lin, sp);
        if (v > best) {
          best = v;
          grid_arg = Q;
        }
      }
    }
    for (double d0 : {-s0, 0.0, s0}) {
      for (double d1 : {-s1, 0.0, s1}) {
        std::vector<double> Q{std::clamp(grid_arg[0] + d0, 0.0, sp.members[0].power_cap_Pmax),
                              std::clamp(grid_arg[1] + d1, 0.0, sp.members[1].power_cap_Pmax)};
        variation = std::max(variation, std::abs(surrogate_objective(Q, lin, sp) - best));
      }
    }
    CHECK(surrogate_objective(P, lin, sp) >= best - variation);
  }
}

TEST_CASE("nobody offloading needs no iterations") {
  const ScaResult res = sca_power_allocation(PowerSubproblem{});
  CHECK(res.iterations == 0);
  CHECK(res.powers_P.empty());
}

TEST_CASE("trace is monotone and every iterate feasible") {
  RandomStream rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const PowerSubproblem sp = random_subproblem(10, rng);
    const ScaResult res = sca_power_allocation(sp);
    REQUIRE(!res.trace.empty());
    CHECK(res.trace.front().iteration_k == 0);
    for (std::size_t k = 1; k < res.trace.size(); ++k) {
      CHECK(res.trace[k].true_objective >= res.trace[k - 1].true_objective - 1e-8);
    }
    for (const auto& it : res.trace) CHECK(max_constraint_violation(it.power_P, sp) <= 1e-8);
    CHECK(res.iterations <= 100);
  }
}

TEST_CASE("trace exports one csv row per iterate") {
  RandomStream rng(10);
  const ScaResult res = sca_power_allocation(random_subproblem(4, rng));
  std::ostringstream os;
  write_sca_trace_csv(os, res);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,F,surrogate,step_norm");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == res.trace.size());
}

TEST_CASE("sca allocation is a valid allocation") {
  const SystemParams p = default_params();
  RandomStream rng(11);
  const FrameObservation obs = qnoma::testing::random_frame(p, rng);
  const Decision x = qnoma::testing::random_decision(p.n_devices, rng);
  const Allocation a = sca_allocate(x, obs, p);
  for (std::size_t i = 0; i < p.n_devices; ++i) {
    CHECK((a.power_P[i] >= 0.0 && a.power_P[i] <= p.p_max[i]));
    if (!x.offloads(i)) CHECK(a.power_P[i] == 0.0);
    CHECK(a.rate_r[i] * p.frame_T <= obs.data_queue_Q[i] * (1.0 + 1e-9));
  }
}

}
