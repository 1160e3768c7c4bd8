// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qnoma/channel.hpp"
#include "qnoma/params.hpp"
#include "qnoma/random.hpp"

using namespace qnoma;

namespace {

// Reference xoshiro256** with splitmix64 seeding, written from the
// published algorithm independently of the library.
struct ReferenceXoshiro {
  std::array<std::uint64_t, 4> s{};
  explicit ReferenceXoshiro(std::uint64_t seed) {
    for (auto& w : s) {
      seed += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t out = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return out;
  }
};

}  // namespace

TEST_SUITE("env") {

TEST_CASE("splitmix finalizer matches its published first output") {
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("generator follows the reference xoshiro256** sequence") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
    RandomStream r(seed);
    ReferenceXoshiro ref(seed);
    for (int i = 0; i < 1000; ++i) REQUIRE(r.next_u64() == ref.next());
  }
  RandomStream r(0);
  CHECK(r.next_u64() == 0x99ec5f36cb75f2b4ULL);
  CHECK(r.next_u64() == 0xbf6e1f784956452aULL);
  CHECK(r.next_u64() == 0x1a5f849d4933e6e0ULL);
}

TEST_CASE("derived variates are frozen") {
  RandomStream s(42);
  CHECK(s.uniform() == 0.083862971059882163);
  CHECK(s.normal() == -0.41536520949523315);
  CHECK(s.exponential(2.0) == 5.1723629219736846);
}

TEST_CASE("derived streams are reproducible and distinct") {
  RandomStream a = RandomStream::derive(9, 1, 5), b = RandomStream::derive(9, 1, 5);
  RandomStream c = RandomStream::derive(9, 1, 6), d = RandomStream::derive(9, 2, 5);
  const std::uint64_t va = a.next_u64();
  CHECK(va == b.next_u64());
  CHECK(va != c.next_u64());
  CHECK(va != d.next_u64());
}

TEST_CASE("integer draws stay in range and cover it") {
  RandomStream r(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const std::size_t v = r.below(7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  for (int h : hits) CHECK(std::abs(h - 10000) < 500);
  CHECK(r.below(1) == 0);
}

TEST_CASE("devices are equally spaced between the ring radii") {
  const auto d10 = init_distances(10);
  REQUIRE(d10.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(d10[i] == doctest::Approx(120.0 + 15.0 * static_cast<double>(i)));
  CHECK(init_distances(1) == std::vector<double>{120.0});
  CHECK(init_distances(2) == std::vector<double>{120.0, 255.0});
  CHECK_THROWS(init_distances(0));
}

TEST_CASE("random placement stays inside the ring") {
  RandomStream r(4);
  for (double d : random_distances(1000, r)) CHECK((d >= kMinDistance && d <= kMaxDistance));
}

TEST_CASE("mean path loss at the near edge") {
  // 4.11 * (3e8 / (4 pi 915e6 120))^3, evaluated by hand to 1e-11 * 4.2244383.
  const double pl = mean_pathloss(120.0, 915e6, 4.11, 3.0);
  CHECK(pl == doctest::Approx(4.2244383215670308e-11).epsilon(1e-14));
  const double hand = 4.11 * std::pow(3e8 / (4.0 * std::numbers::pi * 915e6 * 120.0), 3.0);
  CHECK(pl == doctest::Approx(hand).epsilon(1e-15));
  const ChannelModel m = ChannelModel::from_params(default_params());
  for (std::size_t i = 1; i < m.mean_pathloss.size(); ++i) CHECK(m.mean_pathloss[i] < m.mean_pathloss[i - 1]);
}

TEST_CASE("line-of-sight limit returns the mean path loss exactly") {
  SystemParams p = default_params();
  p.rician_K = kLineOfSightK;
  const ChannelModel m = ChannelModel::from_params(p);
  RandomStream r(1);
  CHECK(sample_gains(m, r) == m.mean_pathloss);
}

TEST_CASE("fading has unit mean power and mean gain falls with distance") {
  const ChannelModel m = ChannelModel::from_params(default_params());
  RandomStream r(11);
  const std::size_t draws = 100000;
  std::vector<double> sum(m.mean_pathloss.size(), 0.0);
  for (std::size_t k = 0; k < draws; ++k) {
    const auto h = sample_gains(m, r);
    for (std::size_t i = 0; i < h.size(); ++i) {
      REQUIRE(h[i] > 0.0);
      sum[i] += h[i];
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double ratio = sum[i] / static_cast<double>(draws) / m.mean_pathloss[i];
    CHECK((ratio >= 0.99 && ratio <= 1.01));
    if (i > 0) CHECK(sum[i] < sum[i - 1]);
  }
}

TEST_CASE("zero arrival rate gives zero arrivals") {
  RandomStream r(2);
  const std::vector<double> means{0.0, 3.0};
  for (int k = 0; k < 100; ++k) {
    const auto a = sample_arrivals(means, r);
    CHECK(a[0] == 0.0);
    CHECK(a[1] >= 0.0);
  }
}

TEST_CASE("arrival sample mean matches the rate") {
  const SystemParams p = default_params();
  Environment env(p, 5);
  double sum = 0.0;
  const std::size_t frames = 100000;
  for (std::size_t t = 1; t <= frames; ++t) sum += env.arrivals(t)[0];
  const double mean_mbit = sum / static_cast<double>(frames) * p.data_unit_bits / 1e6;
  CHECK((mean_mbit >= 2.97 && mean_mbit <= 3.03));
}

TEST_CASE("environment is a pure function of seed and frame") {
  const SystemParams p = default_params();
  Environment a(p, 77), b(p, 77), c(p, 78);
  CHECK(a.gains(10) == b.gains(10));
  CHECK(a.arrivals(10) == b.arrivals(10));
  CHECK(a.gains(10) != c.gains(10));
  CHECK(a.gains(10) != a.gains(11));
  // Out-of-order queries replay the same values.
  const auto later = a.arrivals(500);
  CHECK(a.arrivals(3) == b.arrivals(3));
  CHECK(later == b.arrivals(500));
}

}
