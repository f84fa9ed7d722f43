// SPDX-License-Identifier: MIT
//
// The dense Fock-space reference must be correct on its own terms before it
// can certify anything else, so it is pinned to first principles here:
// canonical anticommutation relations, Jordan-Wigner signs, unitarity of
// Gaussian operators, Born probabilities, and Wick factorization.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fsteer/fock_oracle.hpp"
#include "fsteer/gaussian_core.hpp"

using namespace fsteer;
using namespace fsteer::fock;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE_BEGIN("fock_oracle");

TEST_CASE("mode operators satisfy the canonical anticommutation relations") {
  const int n = 3;
  const int dim = 1 << n;
  for (int i = 0; i < n; ++i) {
    const Matrix ci = mode_operator(n, i);
    for (int j = 0; j < n; ++j) {
      const Matrix cj = mode_operator(n, j);
      const Matrix acar = ci * cj.adjoint() + cj.adjoint() * ci;
      const Matrix a0 = ci * cj + cj * ci;
      const double want = i == j ? 1.0 : 0.0;
      CHECK(max_abs(acar - want * Matrix::Identity(dim, dim)) < 1e-15);
      CHECK(max_abs(a0) < 1e-15);
    }
  }
}

TEST_CASE("Jordan-Wigner signs: annihilator action on a basis state") {
  // |s> with s = 0b011 (modes 0 and 1 occupied). c_1 |011> must produce
  // -|001>: one occupied mode (mode 0) sits below mode 1 in the string.
  const int n = 3;
  Vector psi = Vector::Zero(1 << n);
  psi(0b011) = 1.0;
  const Vector out = mode_operator(n, 1) * psi;
  CHECK(std::abs(out(0b001) - Complex(-1.0)) < 1e-15);
  for (int s = 0; s < (1 << n); ++s)
    if (s != 0b001) CHECK(std::abs(out(s)) < 1e-15);
}

TEST_CASE("composite mode operator is the linear combination of modes") {
  const int n = 4;
  RandomStream rng(21);
  const Vector w = random_mode(n, rng);
  Matrix want = Matrix::Zero(1 << n, 1 << n);
  for (int j = 0; j < n; ++j) want += w(j) * mode_operator(n, j);
  CHECK(max_abs(composite_mode_operator(n, w) - want) < 1e-14);
}

TEST_CASE("product states have diagonal correlation matrices") {
  const std::vector<int> occ = {1, 0, 1};
  const Vector psi = product_state_vector(3, occ);
  const Matrix g = correlation_of(psi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double want = (i == j) ? occ[i] : 0.0;
      CHECK(std::abs(g(i, j) - want) < 1e-15);
    }
}

TEST_CASE("anti-Hermitian generators exponentiate to unitaries") {
  const int n = 3;
  RandomStream rng(22);
  const Matrix m = random_antihermitian(n, rng);
  const Matrix u = gaussian_operator(n, m);
  const int dim = 1 << n;
  CHECK(max_abs(u.adjoint() * u - Matrix::Identity(dim, dim)) < 1e-12);
}

TEST_CASE("evolve_gaussian agrees with the dense Gaussian operator") {
  const int n = 3;
  RandomStream rng(23);
  const Matrix m = random_antihermitian(n, rng);
  const Vector psi = product_state_vector(n, {1, 0, 1});
  CHECK((evolve_gaussian(psi, m) - gaussian_operator(n, m) * psi).norm() <
        1e-12);
}

TEST_CASE("random Gaussian states carry the correlation matrix the engine "
          "built alongside") {
  RandomStream rng(24);
  for (int n = 2; n <= 4; ++n) {
    Matrix g_engine;
    const Vector psi = random_gaussian_state(n, rng, 3, &g_engine);
    CHECK(max_abs(correlation_of(psi) - g_engine) < 1e-12);
  }
}

TEST_CASE("four-point functions Wick-factorize on Gaussian states") {
  const int n = 4;
  RandomStream rng(25);
  Matrix g_engine;
  const Vector psi = random_gaussian_state(n, rng, 4, &g_engine);
  const Matrix g = correlation_of(psi);
  const double norm2 = psi.squaredNorm();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Matrix op = mode_operator(n, i).adjoint() *
                            mode_operator(n, j) *
                            mode_operator(n, k).adjoint() * mode_operator(n, l);
          const Complex got = (psi.adjoint() * op * psi)(0) / norm2;
          const Complex want =
              g(i, j) * g(k, l) +
              g(i, l) * ((j == k ? 1.0 : 0.0) - g(k, j));
          CHECK(std::abs(got - want) < 1e-9);
        }
}

TEST_CASE("projective outcome probabilities are Born and sum to one") {
  const int n = 3;
  RandomStream rng(26);
  Matrix g_engine;
  const Vector psi = random_gaussian_state(n, rng, 3, &g_engine);
  const Vector w = random_mode(n, rng);

  Vector psi1 = psi, psi0 = psi;
  const double p1 = project_occupation(psi1, n, w, 1);
  const double p0 = project_occupation(psi0, n, w, 0);
  CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));

  // Collapsed branches are normalized occupation eigenstates of the mode.
  const Matrix nw = composite_number_operator(n, w);
  CHECK(std::abs(psi1.squaredNorm() - 1.0) < 1e-12);
  CHECK(std::abs((psi1.adjoint() * nw * psi1)(0) - Complex(1.0)) < 1e-12);
  CHECK(std::abs((psi0.adjoint() * nw * psi0)(0)) < 1e-12);
}

TEST_CASE("impossible projective branches throw") {
  const int n = 2;
  Vector psi = product_state_vector(n, {0, 0});
  Vector w = Vector::Zero(n);
  w(0) = 1.0;
  CHECK_THROWS_AS(project_occupation(psi, n, w, 1), std::invalid_argument);
}

TEST_CASE("weak outcome weights sum to one and states stay normalized") {
  const int n = 3;
  RandomStream rng(27);
  Matrix g_engine;
  const Vector psi = random_gaussian_state(n, rng, 3, &g_engine);
  const Vector w = random_mode(n, rng);
  const double kappa = 0.8;

  Vector pp = psi, pm = psi;
  const double wp = weak_kraus(pp, n, w, kappa, +1);
  const double wm = weak_kraus(pm, n, w, kappa, -1);
  CHECK(wp + wm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(pp.squaredNorm() - 1.0) < 1e-12);
  CHECK(std::abs(pm.squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("weak measurement approaches the projective limit at large "
          "strength") {
  const int n = 3;
  RandomStream rng(28);
  Matrix g_engine;
  const Vector psi = random_gaussian_state(n, rng, 3, &g_engine);
  const Vector w = random_mode(n, rng);

  // Project onto whichever branch carries weight: a random Gaussian state can
  // be an exact number eigenstate of the sampled mode (e.g. the empty product
  // state), in which case only one branch exists.
  Vector proj = psi;
  int outcome = 1;
  try {
    project_occupation(proj, n, w, outcome);
  } catch (const std::invalid_argument&) {
    outcome = 0;
    proj = psi;
    project_occupation(proj, n, w, outcome);
  }
  Vector weak = psi;
  weak_kraus(weak, n, w, 30.0, outcome == 1 ? +1 : -1);
  // Same ray: compare up to the (here trivial) global phase via overlap.
  CHECK(std::abs(std::abs(weak.dot(proj)) - 1.0) < 1e-8);
}

TEST_SUITE_END();
