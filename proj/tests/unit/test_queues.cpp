// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "qnoma/queues.hpp"
#include "qnoma/sim.hpp"

using namespace qnoma;
using qnoma::testing::rel_err;

namespace {

SystemParams bit_units(std::size_t n) {
  SystemParams p = with_device_count(default_params(), n);
  p.data_unit_bits = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("queues") {

TEST_CASE("local execution rate and power") {
  const SystemParams p = bit_units(1);
  const Decision x = Decision::all_local(1);
  const std::vector<double> f{100.0 * 1e6}, P{0.0}, h{1e-10};
  const RateEnergy re = rate_and_energy(x, f, P, h, p);
  CHECK(re.rate_r[0] == doctest::Approx(1e6).epsilon(1e-15));
  CHECK(re.energy_e[0] == doctest::Approx(1e-26 * 1e24).epsilon(1e-15));
}

TEST_CASE("silent offloader still pays circuit power") {
  SystemParams p = bit_units(1);
  p.p_qlc = {0.03};
  const RateEnergy re = rate_and_energy(Decision::all_offload(1), std::vector<double>{0.0},
                                        std::vector<double>{0.0}, std::vector<double>{1e-10}, p);
  CHECK(re.rate_r[0] == 0.0);
  CHECK(re.energy_e[0] == 0.03);
}

TEST_CASE("two offloaders decode strongest first") {
  const SystemParams p = bit_units(2);
  const std::vector<double> h{2e-10, 5e-11}, P{0.07, 0.04}, f{0.0, 0.0};
  const RateEnergy re = rate_and_energy(Decision::all_offload(2), f, P, h, p);
  const double N0 = p.noise_N0;
  CHECK(rel_err(re.sinr[0], P[0] * h[0] / (N0 + P[1] * h[1])) <= 1e-12);
  CHECK(rel_err(re.sinr[1], P[1] * h[1] / N0) <= 1e-12);
  const double scale = p.payload_eta_q * p.bandwidth_W / p.overhead_vu;
  CHECK(rel_err(re.rate_r[0], scale * std::log2(1.0 + re.sinr[0])) <= 1e-12);
}

TEST_CASE("random mixed frames match the brute-force SIC oracle") {
  const SystemParams p = bit_units(8);
  RandomStream rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const FrameObservation obs = qnoma::testing::random_frame(p, rng);
    const Decision x = qnoma::testing::random_decision(8, rng);
    std::vector<double> f(8, 0.0), P(8, 0.0);
    for (std::size_t i = 0; i < 8; ++i) {
      if (x.offloads(i)) {
        P[i] = rng.uniform(0.0, p.p_max[i]);
      } else {
        f[i] = rng.uniform(0.0, p.f_max[i]);
      }
    }
    const RateEnergy re = rate_and_energy(x, f, P, obs.gains_h, p);
    const auto sinr = qnoma::testing::naive_sinr(x.offload_x, P, obs.gains_h, p.noise_N0);
    for (std::size_t i = 0; i < 8; ++i) REQUIRE(rel_err(re.sinr[i], sinr[i]) <= 1e-12);
  }
}

TEST_CASE("decoding order sorts by gain with index ties") {
  const std::vector<double> h{1.0, 3.0, 2.0, 3.0, 0.5};
  const std::vector<std::uint8_t> x{1, 1, 0, 1, 1};
  CHECK(decoding_order(h, x) == std::vector<std::size_t>{1, 3, 0, 4});
}

TEST_CASE("negative inputs are rejected") {
  const SystemParams p = bit_units(1);
  CHECK_THROWS_AS(rate_and_energy(Decision::all_local(1), std::vector<double>{-1.0}, std::vector<double>{0.0},
                                  std::vector<double>{1e-10}, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(rate_and_energy(Decision::all_offload(1), std::vector<double>{0.0},
                                  std::vector<double>{-0.1}, std::vector<double>{1e-10}, p),
                  std::invalid_argument);
}

TEST_CASE("causality clamp") {
  ClampResult c = clamp_rate_to_queue(5.0, 10.0);
  CHECK(c.rate == 5.0);
  CHECK_FALSE(c.clamped);
  c = clamp_rate_to_queue(10.0 + 1e-15, 10.0);
  CHECK(c.rate == 10.0);
  CHECK(c.clamped);
  CHECK_FALSE(c.warned);
  c = clamp_rate_to_queue(12.0, 10.0);
  CHECK(c.rate == 10.0);
  CHECK(c.warned);
}

TEST_CASE("data queue update") {
  CHECK(step_data_queue(5e6, 2e6, 1e6) == 4e6);
  CHECK(step_data_queue(0.0, 0.0, 3e6) == 3e6);
  CHECK(step_data_queue(5e6, 5e6, 0.0) == 0.0);
  CHECK_THROWS_AS(step_data_queue(1.0, 2.0, 0.0), std::logic_error);
  CHECK_THROWS_AS(step_data_queue(1.0, -0.5, 0.0), std::logic_error);
}

TEST_CASE("virtual energy queue update") {
  CHECK(step_energy_queue(0.0, 0.08, 0.08, 60.0) == 0.0);
  CHECK(step_energy_queue(10.0, 0.1, 0.08, 60.0) == doctest::Approx(11.2).epsilon(1e-14));
  CHECK(step_energy_queue(0.5, 0.0, 0.08, 60.0) == 0.0);
}

TEST_CASE("energy queue drifts at exactly nu times the overshoot") {
  double y = 0.0;
  for (int k = 0; k < 50; ++k) y = step_energy_queue(y, 0.01, 0.08, 60.0);
  CHECK(y == 0.0);
  double expected = 0.0;
  y = 0.0;
  for (int k = 0; k < 50; ++k) {
    y = step_energy_queue(y, 0.1, 0.08, 60.0);
    expected += 60.0 * (0.1 - 0.08);
  }
  CHECK(y == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("queue telescoping over an online run") {
  SchemeConfig cfg;
  cfg.params = default_params();
  Simulator sim(cfg, 3);
  const std::size_t n = cfg.params.n_devices;
  std::vector<double> arrived(n, 0.0), served(n, 0.0);
  for (int k = 0; k < 400; ++k) {
    const FrameRecord r = sim.run_frame();
    for (std::size_t i = 0; i < n; ++i) {
      arrived[i] += r.arrivals_A[i];
      served[i] += r.allocation.rate_r[i] * cfg.params.frame_T;
      REQUIRE(r.observation.data_queue_Q[i] >= 0.0);
      REQUIRE(r.observation.energy_queue_Y[i] >= 0.0);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(rel_err(arrived[i] - served[i], sim.queues().data_Q[i]) <= 1e-9);
  }
}

}
