// SPDX-License-Identifier: MIT
//
// Correlation-matrix engine for number-conserving fermionic Gaussian states.
//
// Conventions (fixed project-wide, certified against the Fock oracle):
//   * G(i,j) = <psi†_i psi_j>. A pure Gaussian state satisfies G² = G.
//   * A mode vector w holds coefficients of the annihilation expansion
//     chi = sum_i w_i psi_i, so the occupation of chi is w† G w.
//   * A unitary V acting in Fock space with Heisenberg action
//     V psi_i V^{-1} = sum_j t(i,j) psi_j maps G -> tᵀ G conj(t).
//     apply_unitary takes t ("single-particle transfer matrix").

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fsteer/random_stream.hpp"

namespace fsteer {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// A normalized single-fermion mode with optional sparsity support. When
// `support` is non-empty, amplitudes(i) == 0 for every i not listed and the
// engine exploits that to skip work; an empty support means "dense".
struct ModeVector {
  Vector amplitudes;
  std::vector<int> support;

  int dim() const { return static_cast<int>(amplitudes.size()); }
};

ModeVector make_dense_mode(Vector amplitudes);

struct MeasurementResult {
  int outcome = 0;        // 0 or 1 occupation eigenvalue (weak: sign in {-1,+1})
  double probability = 0; // Born probability of the realized outcome
};

// G for a product state: diag(occupations), occupations in {0,1}.
Matrix product_state(int dim, const std::vector<int>& occupations);

// G -> tᵀ G conj(t) for a full-dimension transfer matrix t.
void apply_unitary(Matrix& g, const Matrix& t);

// Same, for a transfer matrix supported on the index set `idx` (t_small is
// |idx| x |idx|); touches only the corresponding rows/columns of G.
void apply_local_unitary(Matrix& g, const std::vector<int>& idx,
                         const Matrix& t_small);

// <chi† chi> = w† G w (real part; the imaginary residue of a Hermitian form).
double occupation_expectation(const Matrix& g, const ModeVector& w);

// Forced-outcome projective update (used by tests and by the sampler below):
// collapses G onto the eigenspace of n_chi = outcome and returns the Born
// probability the outcome had. Degenerate probabilities (within 1e-12 of 0 or
// 1) make the certain outcome mandatory; requesting the impossible branch
// throws std::invalid_argument.
double measurement_update(Matrix& g, const ModeVector& w, int outcome);

// Samples a projective occupation measurement of mode w using one rng draw,
// then applies measurement_update.
MeasurementResult measure_occupation(Matrix& g, const ModeVector& w,
                                     RandomStream& rng);

// Weak measurement with Kraus operators K_± = exp(± kappa (n_chi - 1/2)),
// outcome weights w_± = <K†_± K_±> / (2 cosh kappa). Outcome is reported as
// ±1. kappa >= 30 reproduces the projective limit to ~1e-8.
double weak_measurement_update(Matrix& g, const ModeVector& w, double kappa,
                               int sign);
MeasurementResult measure_occupation_weak(Matrix& g, const ModeVector& w,
                                          double kappa, RandomStream& rng);

// Fermionic SWAP of two orthonormal modes a, b:
//   exp(i pi/2 (a† - b†)(a - b)),  transfer matrix t = 1 - conj(z) zᵀ with
//   z = w_a - w_b. Exchanges the modes' occupations and coherences.
void fswap(Matrix& g, const ModeVector& wa, const ModeVector& wb);

// max_ij |(G² - G)(i,j)|, the literal purity deviation.
double purity_deviation(const Matrix& g);

// Re(tr G): conserved particle number.
double total_charge(const Matrix& g);

// G <- (G + G†)/2, discarding anti-Hermitian float dust.
void rehermitize(Matrix& g);

// Clamps eigenvalues of a (Hermitian) G into [0,1]; returns how many
// eigenvalues actually moved by more than `tol`.
int clamp_spectrum(Matrix& g, double tol = 1e-12);

}  // namespace fsteer
