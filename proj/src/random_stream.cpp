// SPDX-License-Identifier: MIT

#include "fsteer/random_stream.hpp"

#include <cmath>

namespace fsteer {

double RandomStream::normal() {
  // Box-Muller, polar-free form. u1 is nudged away from 0 so log() is finite.
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::uint64_t RandomStream::derive_seed(std::uint64_t master,
                                        std::uint64_t index) {
  RandomStream s(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  s.next_u64();
  return s.next_u64();
}

}  // namespace fsteer
