// SPDX-License-Identifier: MIT
//
// Shared lattice indexing: L x L periodic square lattice, two orbitals per
// site. Site (x, y) -> y*L + x; mode = 2*site + mu, mu in {0 (A), 1 (B)}.

#pragma once

namespace fsteer {

inline int site_index(int x, int y, int L) { return y * L + x; }

inline int mode_index(int x, int y, int mu, int L) {
  return 2 * site_index(x, y, L) + mu;
}

// Wrapped displacement in [-L/2, L/2).
inline int wrap_displacement(int d, int L) {
  d %= L;
  if (d < 0) d += L;
  if (d >= (L + 1) / 2) d -= L;
  return d;
}

}  // namespace fsteer
