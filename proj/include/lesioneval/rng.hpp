// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace lesioneval {

/// SplitMix64. Used everywhere randomness is needed so that results are
/// bit-identical across platforms and standard-library versions.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t bounded(std::uint64_t n) {
    // rejection sampling keeps the draw unbiased
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Pure derivation of a replicate/case stream from a master seed, so parallel
/// consumers of stream r never touch each other's state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 mix(master ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL));
  mix.next();
  return mix.next();
}

}  // namespace lesioneval
