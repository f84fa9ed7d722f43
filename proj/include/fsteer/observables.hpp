// SPDX-License-Identifier: MIT
//
// Diagnostics evaluated on correlation matrices of the 2-orbital L x L
// lattice (mode index = 2*(y*L + x) + mu).
//
// All entropies are in nats.

#pragma once

#include <vector>

#include "fsteer/gaussian_core.hpp"
#include "fsteer/lattice.hpp"

namespace fsteer {

// Real-space Chern number from the three-wedge trace formula
//   c(G) = 12 pi i [ tr(G P_A G P_B G P_C) - tr(G P_C G P_B G P_A) ]
// with P_X projectors onto three 120-degree wedges (counterclockwise A, B, C,
// half-open angular intervals) of a disk of radius 0.4 L around a center.
// self_average=true averages the estimate over all L² centers.
double chern_real_space(const Matrix& g, int L, bool self_average = true);
double chern_real_space_at(const Matrix& g, int L, int cx, int cy);

// Local Chern-marker field  m(r) = 2 pi i sum_mu [G X G Y G - G Y G X G]_rr
// with X, Y the diagonal unit-cell coordinate operators. Meaningful in the
// bulk only: entries within 2 sites of a coordinate seam (x or y in
// {0, 1, L-2, L-1}) should be excluded by consumers on periodic lattices.
std::vector<double> chern_marker(const Matrix& g, int L);

// Von Neumann entropy of the reduced state on `modes` (nats).
double entanglement_entropy(const Matrix& g, const std::vector<int>& modes);

struct MutualInformationResult {
  double s_a = 0, s_b = 0, s_ab = 0, mi = 0;
};

// Mutual information between two parallel strips of width L/4: columns
// x in [0, L/4) and x in [L/2, 3L/4) (centers L/8 and 5 L/8).
MutualInformationResult mutual_information(const Matrix& g, int L);

std::vector<int> strip_modes(int L, int x_begin, int width);

// Entanglement contour of the region: per-mode diagonal of
//   F = -[Gr ln Gr + (1-Gr) ln(1-Gr)]
// for the restriction Gr of G to `modes`. Sums to the region entropy.
std::vector<double> entanglement_contour(const Matrix& g,
                                         const std::vector<int>& modes);

// Disorder-averaged two-point moment
//   C(r) = (1/(2 L²)) sum_{r', mu, mu', i in {x,y}} |G_{(r',mu),(r'+r e_i,mu')}|²
// for r = 0 .. L/2 (vector of length L/2 + 1).
std::vector<double> correlation_decay(const Matrix& g, int L);

// Chord rescaling used for critical power-law fits on periodic lattices.
double chord_distance(int r, int L);

struct SpectralGapResult {
  double gap = 0;            // min_{λ>1/2} λ - max_{λ<1/2} λ
  double closest_to_half = 0;// min_i |λ_i - 1/2|
};

SpectralGapResult spectral_gap(const Matrix& g);

// Spectral sign-flattening: eigenvalues above 1/2 -> 1, below -> 0.
// Throws std::runtime_error if any eigenvalue is within 1e-9 of 1/2.
Matrix regularize(const Matrix& g);

}  // namespace fsteer
