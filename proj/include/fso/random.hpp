// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 FSO LinkLab authors
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fso {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-(seed, partition) stream: a splitmix64-mixed seed feeds
// mt19937_64; Gaussians come from polar Box-Muller so every platform with a
// conforming mt19937_64 reproduces identical draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(mix_seed(seed, 0)) {}
  RandomStream(std::uint64_t seed, std::uint64_t partition)
      : eng_(mix_seed(seed, partition)) {}

  static RandomStream for_partition(std::uint64_t seed, std::uint64_t partition) {
    return RandomStream(seed, partition);
  }

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Uniform integer in [0, n) by rejection (unbiased).
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return r % n;
  }

 private:
  static std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t partition) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= 0x6a09e667f3bcc909ULL + partition;
    std::uint64_t b = splitmix64(state);
    return a ^ (b + 0x2545f4914f6cdd1dULL * (partition + 1));
  }

  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Worker-thread budget: FSO_LINKLAB_THREADS caps hardware concurrency.
int thread_budget();

}  // namespace fso
