// SPDX-License-Identifier: MIT
//
// Deterministic, platform-independent random stream.
//
// SplitMix64 core with an explicit draw counter. All stochastic decisions in
// the library flow through this type so that a (seed -> output) mapping is
// reproducible bit-for-bit across platforms and compilers. std::mt19937 plus
// <random> distributions are deliberately avoided: the standard does not pin
// down distribution algorithms, so their output is not portable.

#pragma once

#include <cstdint>

namespace fsteer {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  // SplitMix64 step (Steele, Lea, Flood 2014; public-domain reference code).
  std::uint64_t next_u64() {
    ++counter_;
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive and far below 2^53, which
  // holds for every use in this library (mode counts), so the simple
  // floor(u*n) construction is exact and portable.
  std::uint64_t uniform_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

  // Standard normal via Box-Muller. Draws two uniforms per call; no cached
  // spare, so the draw count per call is fixed (determinism is simpler to
  // audit than the halved cost would be worth).
  double normal();

  // Bernoulli event with probability p: consumes exactly one draw.
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t draws() const { return counter_; }

  // Derives an independent child seed (e.g. per-trajectory) from a master
  // seed and an index by scrambling through two SplitMix64 steps.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
};

}  // namespace fsteer
