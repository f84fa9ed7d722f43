// SPDX-License-Identifier: MIT
//
// Two-band Chern insulator on an L x L periodic square lattice with two
// orbitals (A, B) per site:
//
//   n(k) = (sin kx, sin ky, alpha - cos kx - cos ky),
//   H(k) = n(k) . sigma,  band projectors P_±(k) = (1 ± n̂(k).sigma)/2.
//
// Chern number of the lower band: -1 for alpha in (0,2), +1 for alpha in
// (-2,0), 0 for |alpha| > 2; the gap closes at alpha in {0, ±2}.
//
// Real-space layout: site (x, y) -> index y*L + x, mode index = 2*site + mu
// with mu = 0 (A), 1 (B). k-grid: k = 2*pi*(mx, my)/L.
//
// The steering protocol uses one localized mode per (site, orbital, band),
// obtained by Wannier-like superposition of band-projected orbitals:
//   w_{r,nu,n}(R, mu) ∝ sum_k e^{i k.(r-R)} [tau_nu† P_n(k)]_mu,
// L²-normalized, optionally truncated to a (2 n_shell + 1)² site window and
// renormalized. tau_A = (1,1)ᵀ/√2, tau_B = (1,-1)ᵀ/√2.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fsteer/gaussian_core.hpp"
#include "fsteer/lattice.hpp"

namespace fsteer {

Eigen::Vector3d bloch_vector(double kx, double ky, double alpha);

// band = -1 (lower) or +1 (upper). Throws if the gap closes at this k.
Eigen::Matrix2cd band_projector(double kx, double ky, double alpha, int band);

// Gauge-fixed normalized band spinor (largest-projector-column convention).
Eigen::Vector2cd band_spinor(double kx, double ky, double alpha, int band);

// Correlation matrix (2L² x 2L²) of the lower-band-filled ground state.
Matrix ground_state_correlation(int L, double alpha);

// ------------------------------------------------------------- mode building

struct OWMode {
  int cx = 0, cy = 0;   // center site
  int nu = 0;           // 0 = A, 1 = B
  int band = -1;        // -1 lower, +1 upper
  ModeVector mode;      // over the 2L² physical modes
};

struct OWModeSet {
  int L = 0;
  int n_shell = -1;     // -1 = untruncated
  double alpha = 0.0;   // uniform builds; wall builds track both values
  std::optional<double> alpha_right;  // set for domain-wall builds
  std::vector<OWMode> modes;          // indexed by mode_slot()

  // Storage order: site-major (y, then x), then nu in {A,B}, then band in
  // {lower, upper} — the same order the protocol consumes them in.
  int mode_slot(int x, int y, int nu, int band_is_upper) const {
    return ((y * L + x) * 2 + nu) * 2 + band_is_upper;
  }
  const ModeVector& lower(int x, int y, int nu) const {
    return modes[mode_slot(x, y, nu, 0)].mode;
  }
  const ModeVector& upper(int x, int y, int nu) const {
    return modes[mode_slot(x, y, nu, 1)].mode;
  }
};

// Builds the full family of 4L² localized modes (2 orbitals x 2 bands per
// site). n_shell < 0 or 2*n_shell+1 >= L yields untruncated modes.
OWModeSet build_ow_modes(int L, double alpha, int n_shell);

// Domain-wall variant: centers with x < L/2 use alpha_left, the rest
// alpha_right (each mode is built from the model at its own center).
OWModeSet build_ow_modes_wall(int L, double alpha_left, double alpha_right,
                              int n_shell);

// Truncates a single mode to the (2 n_shell + 1)² window around (cx, cy)
// (periodically wrapped) and renormalizes.
ModeVector truncate_mode(const ModeVector& w, int L, int cx, int cy,
                         int n_shell);

// ------------------------------------------------------------- form factors

// Unnormalized |f|² = tau_nu† P_band(k) tau_nu (defined for any continuum k).
double form_factor_abs2_raw(double kx, double ky, double alpha, int nu,
                            int band);

// Grid normalization constant Z so that (1/L²) sum_k |f|² = 1.
double form_factor_norm(int L, double alpha, int nu, int band);

// Normalized form factor at grid point (mx, my), gauge fixed via band_spinor.
Complex form_factor(int L, double alpha, int nu, int band, int mx, int my);

// Zeros of |f| on the Brillouin zone: grid minima refined by Newton descent
// on |f|²; a refined point counts as a zero when |f| < 1e-6 there.
std::vector<std::array<double, 2>> form_factor_zeros(int L, double alpha,
                                                     int nu, int band);

// Numerical rank (singular values > threshold) of the row matrix of all
// band-projected localized modes for the listed orbitals.
int overcomplete_rank(int L, double alpha, const std::vector<int>& nus,
                      int band, double sv_threshold = 1e-8);

// ------------------------------------------------------------------- caching

nlohmann::json ow_modes_to_json(const OWModeSet& set);
OWModeSet ow_modes_from_json(const nlohmann::json& j);

}  // namespace fsteer
