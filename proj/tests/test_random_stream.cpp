// SPDX-License-Identifier: MIT
//
// The random stream underpins the determinism contract of every stochastic
// result in the library, so its output is pinned to known values: the core
// generator against the published SplitMix64 reference outputs, and the seed
// derivation against frozen values that must never change between releases.

#include <cstdint>
#include <vector>

#include <doctest.h>

#include "fsteer/random_stream.hpp"

using fsteer::RandomStream;

TEST_SUITE_BEGIN("random_stream");

TEST_CASE("core generator matches the SplitMix64 reference outputs") {
  // Reference sequence for seed 0 from the public-domain SplitMix64 code.
  RandomStream r(0);
  CHECK(r.next_u64() == 0xE220A8397B1DCDAFull);
  CHECK(r.next_u64() == 0x6E789E6AA1B965F4ull);
  CHECK(r.next_u64() == 0x06C45D188009454Full);

  RandomStream r1(1);
  CHECK(r1.next_u64() == 10451216379200822465ull);
}

TEST_CASE("identical seeds give identical streams") {
  RandomStream a(987654321), b(987654321);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays in [0,1) and fills the range") {
  RandomStream r(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("uniform(lo, hi) respects its bounds") {
  RandomStream r(8);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(-3.0, 5.0);
    CHECK(u >= -3.0);
    CHECK(u < 5.0);
  }
}

TEST_CASE("uniform_below covers all residues and stays in range") {
  RandomStream r(9);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const std::uint64_t v = r.uniform_below(7);
    REQUIRE(v < 7);
    ++seen[static_cast<int>(v)];
  }
  for (int c : seen) CHECK(c > 7000 / 7 / 2);  // no residue starved
}

TEST_CASE("normal has the right first two moments") {
  RandomStream r(10);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("draw accounting is exact") {
  RandomStream r(11);
  CHECK(r.draws() == 0);
  r.uniform();
  CHECK(r.draws() == 1);
  r.bernoulli(0.5);  // exactly one draw, by contract
  CHECK(r.draws() == 2);
  r.normal();  // Box-Muller: always two draws
  CHECK(r.draws() == 4);
  r.uniform_below(13);
  CHECK(r.draws() == 5);
}

TEST_CASE("bernoulli edge probabilities are deterministic") {
  RandomStream r(12);
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(r.bernoulli(0.0));  // uniform() >= 0 always
    CHECK(r.bernoulli(1.0));        // uniform() < 1 always
  }
}

TEST_CASE("derived seeds are frozen across releases") {
  // Regenerating these constants would silently re-randomize every archived
  // run, so they are pinned.
  CHECK(RandomStream::derive_seed(42, 0) == 5139283748462763858ull);
  CHECK(RandomStream::derive_seed(42, 7) == 4082637488651899829ull);
  CHECK(RandomStream::derive_seed(1, 0) == 4048727598324417001ull);
}

TEST_CASE("derived seeds differ across indices and masters") {
  const std::uint64_t a = RandomStream::derive_seed(5, 0);
  const std::uint64_t b = RandomStream::derive_seed(5, 1);
  const std::uint64_t c = RandomStream::derive_seed(6, 0);
  CHECK(a != b);
  CHECK(a != c);
  CHECK(b != c);
  // And are reproducible.
  CHECK(a == RandomStream::derive_seed(5, 0));
}

TEST_SUITE_END();
