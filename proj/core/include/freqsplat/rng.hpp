// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

namespace freqsplat {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed keyed on (global seed, primitive id, view id, iteration); the
// result does not depend on the order in which primitives are processed.
inline constexpr std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t gaussian_id,
                                           std::uint64_t view_id, std::uint64_t iteration) {
  std::uint64_t h = splitmix64(global_seed);
  h = splitmix64(h ^ gaussian_id);
  h = splitmix64(h ^ view_id);
  return splitmix64(h ^ iteration);
}

// Small counter-based generator; satisfies UniformRandomBitGenerator. Cheap
// to construct, which matters when a fresh stream is opened per primitive.
class SplitMixRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMixRng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace freqsplat
