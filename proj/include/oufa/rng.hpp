#pragma once

/**
 * @file rng.hpp
 * @brief Seeded random sources with a fixed, documented algorithm.
 *
 * Uniform bits come from xoshiro256** (Blackman & Vigna), whose 256-bit
 * state is expanded from a single 64-bit seed with SplitMix64. Gaussian
 * variates use Boost.Random's ziggurat normal_distribution, which is
 * implemented in headers and does not depend on the standard library
 * vendor, so a seed reproduces the same path on every platform.
 */

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

namespace oufa {

/// Identifier recorded in every output that contains simulated values.
inline constexpr std::string_view kRngAlgorithm =
    "xoshiro256**/splitmix64-seed/boost-ziggurat-normal";

/// One SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

/// The SplitMix64 output function alone. A bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Seeded source of i.i.d. N(0,1) variates. Not shareable across threads.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return normal_(engine_); }

  Xoshiro256ss& engine() noexcept { return engine_; }

 private:
  Xoshiro256ss engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace oufa
