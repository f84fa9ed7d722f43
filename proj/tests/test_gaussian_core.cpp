// SPDX-License-Identifier: MIT
//
// Every correlation-matrix update is certified against the dense Fock-space
// reference on 2-4 modes: unitaries, both projective branches, weak Kraus
// updates, and the fermionic SWAP. The randomized sweep at the end replays
// the same checks over many seeds via the battery used by the selftest
// command.

#include <cmath>
#include <stdexcept>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "fsteer/fock_oracle.hpp"
#include "fsteer/gaussian_core.hpp"
#include "fsteer/runner.hpp"

using namespace fsteer;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE_BEGIN("gaussian_core");

TEST_CASE("product states are diagonal occupation matrices") {
  const Matrix g = product_state(4, {1, 0, 0, 1});
  CHECK(g.rows() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double want = (i == j && (i == 0 || i == 3)) ? 1.0 : 0.0;
      CHECK(std::abs(g(i, j) - want) == 0.0);
    }
  CHECK(purity_deviation(g) == 0.0);
  CHECK(total_charge(g) == 2.0);
}

TEST_CASE("apply_unitary reproduces the Fock-space evolution") {
  RandomStream rng(31);
  for (int n = 2; n <= 4; ++n) {
    Matrix g;
    Vector psi = fock::random_gaussian_state(n, rng, 3, &g);
    const Matrix m = fock::random_antihermitian(n, rng);
    // Transfer matrix of the Fock operator exp(-sum M c†c) is t = e^M.
    const Matrix t = m.exp();
    apply_unitary(g, t);
    psi = fock::evolve_gaussian(psi, m);
    CHECK(max_abs(g - fock::correlation_of(psi)) < 1e-12);
  }
}

TEST_CASE("apply_local_unitary equals the embedded full-dimension update") {
  RandomStream rng(32);
  const int n = 4;
  Matrix g;
  fock::random_gaussian_state(n, rng, 3, &g);
  Matrix g2 = g;

  const Matrix m2 = fock::random_antihermitian(2, rng);
  const Matrix t2 = m2.exp();
  const std::vector<int> idx = {1, 3};

  Matrix t_full = Matrix::Identity(n, n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) t_full(idx[a], idx[b]) = t2(a, b);

  apply_local_unitary(g, idx, t2);
  apply_unitary(g2, t_full);
  CHECK(max_abs(g - g2) < 1e-13);
}

TEST_CASE("occupation expectation matches the Fock number operator") {
  RandomStream rng(33);
  const int n = 3;
  Matrix g;
  const Vector psi = fock::random_gaussian_state(n, rng, 3, &g);
  const Vector w = fock::random_mode(n, rng);
  const Matrix nw = fock::composite_number_operator(n, w);
  const double want = std::real((psi.adjoint() * nw * psi)(0));
  CHECK(occupation_expectation(g, make_dense_mode(w)) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("both projective branches match the oracle") {
  RandomStream rng(34);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_below(3));
    Matrix g;
    const Vector psi = fock::random_gaussian_state(n, rng, 3, &g);
    const Vector w = fock::random_mode(n, rng);
    const double p1 = occupation_expectation(g, make_dense_mode(w));
    for (int outcome = 0; outcome <= 1; ++outcome) {
      const double pb = outcome == 1 ? p1 : 1.0 - p1;
      if (pb < 1e-6) continue;  // skip near-impossible branches
      Matrix gb = g;
      Vector psib = psi;
      const double p_engine = measurement_update(gb, make_dense_mode(w),
                                                 outcome);
      const double p_oracle = fock::project_occupation(psib, n, w, outcome);
      CHECK(p_engine == doctest::Approx(p_oracle).epsilon(1e-10));
      CHECK(max_abs(gb - fock::correlation_of(psib)) < 1e-10);
    }
  }
}

TEST_CASE("projective updates are idempotent") {
  RandomStream rng(35);
  const int n = 3;
  Matrix g;
  fock::random_gaussian_state(n, rng, 3, &g);
  const ModeVector w = make_dense_mode(fock::random_mode(n, rng));
  measurement_update(g, w, 1);
  CHECK(occupation_expectation(g, w) == doctest::Approx(1.0).epsilon(1e-12));
  // Re-measuring the same mode is certain and leaves the state fixed.
  Matrix g2 = g;
  const double p = measurement_update(g2, w, 1);
  CHECK(p == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(max_abs(g2 - g) < 1e-10);
}

TEST_CASE("requesting an impossible branch throws") {
  Matrix g = product_state(2, {0, 0});
  Vector w = Vector::Zero(2);
  w(0) = 1.0;
  CHECK_THROWS_AS(measurement_update(g, make_dense_mode(w), 1),
                  std::invalid_argument);
}

TEST_CASE("sampled measurements use one draw and Born statistics") {
  RandomStream rng(36);
  const int n = 3;
  Matrix g0;
  fock::random_gaussian_state(n, rng, 3, &g0);
  const ModeVector w = make_dense_mode(fock::random_mode(n, rng));
  const double p1 = occupation_expectation(g0, w);

  int ones = 0;
  const int shots = 4000;
  for (int i = 0; i < shots; ++i) {
    Matrix g = g0;
    const std::uint64_t before = rng.draws();
    const MeasurementResult r = measure_occupation(g, w, rng);
    CHECK(rng.draws() == before + 1);
    if (r.outcome == 1) {
      ++ones;
      CHECK(r.probability == doctest::Approx(p1).epsilon(1e-12));
    } else {
      CHECK(r.probability == doctest::Approx(1.0 - p1).epsilon(1e-12));
    }
  }
  // Four-sigma band around the Born frequency.
  const double sigma = std::sqrt(p1 * (1.0 - p1) / shots);
  CHECK(std::abs(static_cast<double>(ones) / shots - p1) < 4.0 * sigma + 1e-9);
}

TEST_CASE("weak updates match the oracle Kraus application") {
  RandomStream rng(37);
  const int n = 3;
  for (int rep = 0; rep < 5; ++rep) {
    Matrix g;
    const Vector psi = fock::random_gaussian_state(n, rng, 3, &g);
    const Vector w = fock::random_mode(n, rng);
    const double kappa = rng.uniform(0.2, 3.0);
    for (int sign : {+1, -1}) {
      Matrix gw = g;
      Vector psiw = psi;
      const double weight_engine =
          weak_measurement_update(gw, make_dense_mode(w), kappa, sign);
      const double weight_oracle = fock::weak_kraus(psiw, n, w, kappa, sign);
      CHECK(weight_engine ==
            doctest::Approx(weight_oracle).epsilon(1e-10));
      CHECK(max_abs(gw - fock::correlation_of(psiw)) < 1e-10);
    }
  }
}

TEST_CASE("strong weak measurements converge to the projective update") {
  RandomStream rng(38);
  const int n = 3;
  Matrix g;
  fock::random_gaussian_state(n, rng, 3, &g);
  const ModeVector w = make_dense_mode(fock::random_mode(n, rng));
  Matrix weak = g, proj = g;
  weak_measurement_update(weak, w, 30.0, +1);
  measurement_update(proj, w, 1);
  CHECK(max_abs(weak - proj) < 1e-8);
}

TEST_CASE("fswap exchanges occupations of elementary modes") {
  Matrix g = product_state(3, {1, 0, 0});
  Vector a = Vector::Zero(3), b = Vector::Zero(3);
  a(0) = 1.0;
  b(2) = 1.0;
  fswap(g, make_dense_mode(a), make_dense_mode(b));
  CHECK(std::real(g(0, 0)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::real(g(2, 2)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(purity_deviation(g) < 1e-14);
}

TEST_CASE("fswap matches the Fock-space generator and squares to identity") {
  RandomStream rng(39);
  const int n = 4;
  Matrix g;
  Vector psi = fock::random_gaussian_state(n, rng, 3, &g);
  // Orthonormalize a random pair (Gram-Schmidt).
  const Vector a = fock::random_mode(n, rng);
  Vector b = fock::random_mode(n, rng);
  b -= a.dot(b) * a;
  REQUIRE(b.norm() > 1e-3);
  b /= b.norm();

  Matrix g1 = g;
  fswap(g1, make_dense_mode(a), make_dense_mode(b));

  // Fock side: exp(i pi n_z) with z = (a-b)/sqrt(2), realized through the
  // quadratic evolution with kernel M = -i pi conj(z) z^T.
  const Vector z = (a - b) / std::sqrt(2.0);
  const Matrix m = Complex(0, -3.14159265358979323846) *
                   (z.conjugate() * z.transpose());
  const Vector psi1 = fock::evolve_gaussian(psi, m);
  CHECK(max_abs(g1 - fock::correlation_of(psi1)) < 1e-12);

  Matrix g2 = g1;
  fswap(g2, make_dense_mode(a), make_dense_mode(b));
  CHECK(max_abs(g2 - g) < 1e-12);
}

TEST_CASE("charge is conserved by unitaries, swaps and projections") {
  RandomStream rng(40);
  const int n = 4;
  Matrix g;
  fock::random_gaussian_state(n, rng, 3, &g);
  const double q0 = total_charge(g);

  Matrix t = fock::random_antihermitian(n, rng).exp();
  apply_unitary(g, t);
  CHECK(total_charge(g) == doctest::Approx(q0).epsilon(1e-12));

  Vector a = Vector::Zero(n), b = Vector::Zero(n);
  a(0) = 1.0;
  b(1) = 1.0;
  fswap(g, make_dense_mode(a), make_dense_mode(b));
  CHECK(total_charge(g) == doctest::Approx(q0).epsilon(1e-12));
}

TEST_CASE("hygiene helpers behave on perturbed states") {
  Matrix g = product_state(3, {1, 0, 1});
  g(0, 1) = Complex(1e-3, 2e-3);  // non-Hermitian dust
  rehermitize(g);
  CHECK(max_abs(g - g.adjoint().eval()) == 0.0);

  Matrix esc = product_state(2, {1, 0});
  esc(0, 0) = 1.0 + 1e-6;  // spectrum escaped [0, 1]
  const int moved = clamp_spectrum(esc, 1e-9);
  CHECK(moved == 1);
  CHECK(std::real(esc(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(clamp_spectrum(esc, 1e-9) == 0);  // second pass is a no-op
}

TEST_CASE("randomized oracle battery passes at reduced volume") {
  const OracleBatteryReport report = run_oracle_battery(50, 2024);
  for (const auto& op : report.ops) {
    INFO(op.op, " max error ", op.max_error);
    CHECK(op.max_error < report.tolerance);
    CHECK(op.failing_seeds.empty());
  }
  CHECK(report.pass);
}

TEST_SUITE_END();
