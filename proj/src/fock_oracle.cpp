// SPDX-License-Identifier: MIT

#include "fsteer/fock_oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace fsteer::fock {

namespace {

int dimension(int n_modes) {
  if (n_modes < 1 || n_modes > 14)
    throw std::invalid_argument("fock: mode count out of supported range");
  return 1 << n_modes;
}

// Jordan-Wigner sign for annihilating/creating mode j on bitmask s.
double jw_sign(unsigned s, int j) {
  const unsigned below = s & ((1u << j) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

Matrix mode_operator(int n_modes, int j) {
  const int dim = dimension(n_modes);
  if (j < 0 || j >= n_modes)
    throw std::invalid_argument("fock: mode index out of range");
  Matrix c = Matrix::Zero(dim, dim);
  for (unsigned s = 0; s < static_cast<unsigned>(dim); ++s) {
    if (s & (1u << j)) c(s ^ (1u << j), s) = jw_sign(s, j);
  }
  return c;
}

Matrix composite_mode_operator(int n_modes, const Vector& w) {
  const int dim = dimension(n_modes);
  Matrix chi = Matrix::Zero(dim, dim);
  for (int j = 0; j < n_modes; ++j) {
    if (w(j) != 0.0) chi += w(j) * mode_operator(n_modes, j);
  }
  return chi;
}

Matrix composite_number_operator(int n_modes, const Vector& w) {
  Matrix chi = composite_mode_operator(n_modes, w);
  return chi.adjoint() * chi;
}

Vector product_state_vector(int n_modes, const std::vector<int>& occupations) {
  const int dim = dimension(n_modes);
  if (static_cast<int>(occupations.size()) != n_modes)
    throw std::invalid_argument("fock: occupation list size mismatch");
  unsigned s = 0;
  for (int j = 0; j < n_modes; ++j) {
    if (occupations[j] != 0 && occupations[j] != 1)
      throw std::invalid_argument("fock: occupations must be 0 or 1");
    if (occupations[j]) s |= (1u << j);
  }
  Vector psi = Vector::Zero(dim);
  psi(s) = 1.0;
  return psi;
}

Matrix gaussian_operator(int n_modes, const Matrix& m) {
  const int dim = dimension(n_modes);
  if (m.rows() != n_modes || m.cols() != n_modes)
    throw std::invalid_argument("fock: quadratic kernel size mismatch");
  // H_q = sum_ij M(i,j) c†_i c_j assembled state-by-state:
  // c†_i c_j |s> is a single basis state with a JW sign.
  Matrix hq = Matrix::Zero(dim, dim);
  for (unsigned s = 0; s < static_cast<unsigned>(dim); ++s) {
    for (int j = 0; j < n_modes; ++j) {
      if (!(s & (1u << j))) continue;
      const unsigned s1 = s ^ (1u << j);
      const double sgn_j = jw_sign(s, j);
      for (int i = 0; i < n_modes; ++i) {
        if (m(i, j) == 0.0) continue;
        if (s1 & (1u << i)) continue;
        const unsigned s2 = s1 | (1u << i);
        const double sgn_i = jw_sign(s1, i);
        hq(s2, s) += m(i, j) * sgn_i * sgn_j;
      }
    }
  }
  return (-hq).exp();
}

Vector evolve_gaussian(const Vector& psi, const Matrix& m) {
  const int n_modes = static_cast<int>(m.rows());
  const int dim = dimension(n_modes);
  if (psi.size() != dim)
    throw std::invalid_argument("fock: state dimension mismatch");
  return gaussian_operator(n_modes, m) * psi;
}

Matrix correlation_of(const Vector& psi) {
  const int dim = static_cast<int>(psi.size());
  int n_modes = 0;
  while ((1 << n_modes) < dim) ++n_modes;
  if ((1 << n_modes) != dim)
    throw std::invalid_argument("fock: state dimension is not a power of two");
  const double norm2 = psi.squaredNorm();
  if (norm2 <= 0.0) throw std::invalid_argument("fock: null state");
  // G(i,j) = <c_i psi | c_j psi> / <psi|psi>
  std::vector<Vector> phi(n_modes, Vector::Zero(dim));
  for (int j = 0; j < n_modes; ++j) {
    for (unsigned s = 0; s < static_cast<unsigned>(dim); ++s) {
      if (s & (1u << j)) phi[j](s ^ (1u << j)) = jw_sign(s, j) * psi(s);
    }
  }
  Matrix g(n_modes, n_modes);
  for (int i = 0; i < n_modes; ++i)
    for (int j = 0; j < n_modes; ++j) g(i, j) = phi[i].dot(phi[j]) / norm2;
  return g;
}

double project_occupation(Vector& psi, int n_modes, const Vector& w,
                          int outcome) {
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("fock: outcome must be 0 or 1");
  Matrix nw = composite_number_operator(n_modes, w);
  Vector npsi = nw * psi;
  const double norm2 = psi.squaredNorm();
  const double p1 = std::real(psi.dot(npsi)) / norm2;
  const double p = outcome == 1 ? p1 : 1.0 - p1;
  if (p < 1e-12)
    throw std::invalid_argument("fock: requested branch has zero probability");
  Vector collapsed = outcome == 1 ? npsi : Vector(psi - npsi);
  psi = collapsed / collapsed.norm();
  return p;
}

double weak_kraus(Vector& psi, int n_modes, const Vector& w, double kappa,
                  int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("fock: weak outcome sign must be ±1");
  if (w.size() != n_modes || psi.size() != (1 << n_modes))
    throw std::invalid_argument("fock: weak_kraus dimension mismatch");
  const double lambda = sign * kappa;
  // K = exp(lambda (n_w - 1/2)) = e^{-lambda/2} exp(-sum M c†c) with
  // M = -lambda conj(w) wᵀ (so that sum_ij M_ij c†_i c_j = -lambda n_w).
  Matrix m = -lambda * (w.conjugate() * w.transpose());
  Vector kpsi = std::exp(-lambda / 2.0) * evolve_gaussian(psi, m);
  const double weight =
      kpsi.squaredNorm() / psi.squaredNorm() / (2.0 * std::cosh(kappa));
  psi = kpsi / kpsi.norm();
  return weight;
}

Matrix random_antihermitian(int n_modes, RandomStream& rng, double scale) {
  Matrix a(n_modes, n_modes);
  for (int i = 0; i < n_modes; ++i)
    for (int j = 0; j < n_modes; ++j)
      a(i, j) = Complex(rng.normal(), rng.normal());
  return scale * 0.5 * (a - a.adjoint()).eval();
}

Vector random_mode(int n_modes, RandomStream& rng) {
  Vector w(n_modes);
  for (int j = 0; j < n_modes; ++j) w(j) = Complex(rng.normal(), rng.normal());
  return w / w.norm();
}

Vector random_gaussian_state(int n_modes, RandomStream& rng, int layers,
                             Matrix* g_engine) {
  std::vector<int> occ(n_modes, 0);
  for (int j = 0; j < n_modes; ++j) occ[j] = rng.bernoulli(0.5) ? 1 : 0;
  Vector psi = product_state_vector(n_modes, occ);
  Matrix g = product_state(n_modes, occ);
  for (int l = 0; l < layers; ++l) {
    Matrix m = random_antihermitian(n_modes, rng);
    psi = evolve_gaussian(psi, m);
    Matrix t = m.exp();  // transfer matrix of exp(-sum M c†c)
    apply_unitary(g, t);
  }
  if (g_engine) *g_engine = g;
  return psi;
}

}  // namespace fsteer::fock
