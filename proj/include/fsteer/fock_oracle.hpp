// SPDX-License-Identifier: MIT
//
// Exact Fock-space reference for small fermion systems (n <= ~10 modes).
//
// Basis: computational bitmask states |s>, s in [0, 2^n); bit j of s is the
// occupation of mode j. Jordan-Wigner with the string over modes below j:
//   c_j |s> = (-1)^{popcount(s & (2^j - 1))} [bit_j(s)] |s - 2^j>.
//
// Everything here is deliberately brute-force dense linear algebra: this
// module is the oracle that certifies the O(dim²) correlation-matrix engine,
// so it must stay independent of it.

#pragma once

#include <vector>

#include "fsteer/gaussian_core.hpp"

namespace fsteer::fock {

// Dense 2^n x 2^n matrix of the annihilation operator c_j.
Matrix mode_operator(int n_modes, int j);

// Dense annihilation operator of a composite mode chi = sum_j w_j c_j.
Matrix composite_mode_operator(int n_modes, const Vector& w);

// Number operator chi† chi of a composite mode.
Matrix composite_number_operator(int n_modes, const Vector& w);

// Amplitude vector of the product state with the given occupations.
Vector product_state_vector(int n_modes, const std::vector<int>& occupations);

// Applies exp(-sum_ij M(i,j) c†_i c_j) to psi (dense matrix exponential).
// Anti-Hermitian M yields a unitary; general M yields a Kraus-type operator
// (no normalization is applied).
Vector evolve_gaussian(const Vector& psi, const Matrix& m);

// Dense operator exp(-sum_ij M(i,j) c†_i c_j).
Matrix gaussian_operator(int n_modes, const Matrix& m);

// Two-point function G(i,j) = <psi| c†_i c_j |psi> / <psi|psi>.
Matrix correlation_of(const Vector& psi);

// Projective measurement of the occupation of composite mode w on |psi>:
// returns the Born probability of `outcome` and collapses psi in place
// (normalized). Throws if the requested branch has probability < 1e-12.
double project_occupation(Vector& psi, int n_modes, const Vector& w,
                          int outcome);

// Weak measurement with K_± = exp(± kappa (n_w - 1/2)): applies the chosen
// Kraus operator, normalizes, and returns the outcome weight
// <K†K>/(2 cosh kappa).
double weak_kraus(Vector& psi, int n_modes, const Vector& w, double kappa,
                  int sign);

// A Haar-ish random pure GAUSSIAN state: random product state evolved by
// `layers` random number-conserving Gaussian unitaries. Returns the state and
// (via out-param) the same state's correlation matrix built independently by
// the gaussian_core engine for comparison tests.
Vector random_gaussian_state(int n_modes, RandomStream& rng, int layers,
                             Matrix* g_engine);

// Random anti-Hermitian matrix (Gaussian entries), for unitary generation.
Matrix random_antihermitian(int n_modes, RandomStream& rng, double scale = 1.0);

// Random normalized complex mode vector.
Vector random_mode(int n_modes, RandomStream& rng);

}  // namespace fsteer::fock
