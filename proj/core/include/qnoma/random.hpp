// Copyright 2026 The qnoma Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace qnoma {

/// xoshiro256** seeded through splitmix64. All derived variates use
/// explicit formulas (53-bit uniforms, Box-Muller normals, inversion
/// exponentials) so sequences do not depend on the standard library's
/// distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0);

  /// Independent stream for (seed, stream id, index), e.g. one per frame.
  static RandomStream derive(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t index = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Unbiased integer in [0, n).
  std::size_t below(std::size_t n) noexcept;
  double normal() noexcept;
  /// Exponential with the given mean; mean 0 yields exactly 0.
  double exponential(double mean) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer, exposed for stream derivation and hashing.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace qnoma
