#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace brwss {

// All stochastic code draws from this engine. The conversions below are
// written out by hand so that streams are reproducible across standard
// library implementations (std:: distributions are not).
using Rng = std::mt19937_64;

inline constexpr std::string_view kRngName = "mt19937_64";
inline constexpr std::string_view kSeedRule = "splitmix64(master_seed, replica_index)";

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1).
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double exponential(Rng& rng, double rate) {
  return -std::log(uniform_open01(rng)) / rate;
}

// Unbiased integer in [0, n), n >= 1 (Lemire's multiply-and-reject).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  unsigned __int128 product = static_cast<unsigned __int128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(product);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

std::uint64_t splitmix64(std::uint64_t x);

// Seed of replica `index` in an ensemble. Depends only on its arguments, so
// replica streams do not depend on scheduling.
std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace brwss
