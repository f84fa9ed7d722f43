// SPDX-License-Identifier: MIT
//
// Measurement completeness by symmetry class: the four exact two-outcome
// constructions, the trace-slack witnesses for the five classes that admit
// none, and the structural Majorana embedding covering the remaining class.

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "fsteer/fock_oracle.hpp"
#include "fsteer/povm.hpp"

using namespace fsteer;

TEST_SUITE_BEGIN("povm");

TEST_CASE("exact constructions resolve the identity to round-off") {
  for (SymClass c : {SymClass::A, SymClass::AI, SymClass::BDI, SymClass::D}) {
    for (double a : {0.3, 1.0, 2.2}) {
      const KrausPairConstruction k = povm_check_construction(c, a);
      INFO(class_name(c), " alpha_param ", a);
      CHECK(k.residual < 1e-14);
      CHECK(k.w_plus > 0.0);
      CHECK(k.w_minus > 0.0);
      // Explicit completeness: w+ K+†K+ + w- K-†K- = 1 on the 2-dim Fock
      // space of a single mode.
      const Matrix sum = k.w_plus * k.k_plus.adjoint() * k.k_plus +
                         k.w_minus * k.k_minus.adjoint() * k.k_minus;
      CHECK((sum - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("constructions refuse classes without exact measurements") {
  for (SymClass c : {SymClass::AIII, SymClass::C, SymClass::CI, SymClass::CII,
                     SymClass::DIII, SymClass::AII}) {
    CHECK_THROWS_AS(povm_check_construction(c, 1.0), std::invalid_argument);
  }
}

TEST_CASE("Fock traces of quadratic Kraus operators factorize") {
  // Tr K†K for K = exp(-(m₁ n₁ + m₂ n₂)) is the occupation-product
  // (1+e^{-2m₁})(1+e^{-2m₂}); with the paired exponents ±1/4 this is
  // 2(1+cosh 1/2). The witnesses rely on exactly this product identity.
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.25;
  m(1, 1) = -0.25;
  const Matrix k = fock::gaussian_operator(2, m);
  const double tr = std::real((k.adjoint() * k).trace());
  CHECK(tr == doctest::Approx(2.0 * (1.0 + std::cosh(0.5))).epsilon(1e-12));
}

TEST_CASE("witnesses certify inadmissibility with strict slack") {
  std::uint64_t seed = 400;
  for (SymClass c : {SymClass::AIII, SymClass::C, SymClass::CI, SymClass::CII,
                     SymClass::DIII}) {
    const int n_modes = c == SymClass::CII ? 4 : 2;
    const WitnessReport r = povm_witness_inadmissible(c, n_modes, 8, seed++);
    INFO(class_name(c));
    CHECK(r.pass);
    CHECK(r.n_modes == n_modes);
    CHECK(r.samples_requested == 8);
    CHECK(r.samples_tested + r.samples_skipped == r.samples_requested);
    CHECK(r.samples_tested > 0);
    // Log-singular spectra carry the class pairing...
    CHECK(r.max_pairing_residual < 1e-10);
    // ...the closed-form and dense Fock traces agree...
    CHECK(r.max_formula_mismatch < 1e-10);
    // ...and every nontrivial sample overshoots the identity trace.
    CHECK(r.min_slack > 1e-8);
  }
}

TEST_CASE("witness details expose per-sample spectra and traces") {
  const WitnessReport r =
      povm_witness_inadmissible(SymClass::AIII, 2, 5, 1234);
  REQUIRE(!r.details.empty());
  for (const auto& s : r.details) {
    if (s.trivial) continue;
    CHECK(!s.lambdas.empty());
    CHECK(s.trace_fock ==
          doctest::Approx(s.trace_analytic).epsilon(1e-10));
    CHECK(s.slack > 0.0);
  }
}

TEST_CASE("quaternionic witnesses carry doubly degenerate spectra") {
  const WitnessReport r =
      povm_witness_inadmissible(SymClass::CII, 4, 5, 777);
  CHECK(r.pass);
  bool saw_doublet = false;
  for (const auto& s : r.details) {
    if (s.trivial) continue;
    // Kramers structure: the positive exponents come in equal pairs.
    REQUIRE(s.lambdas.size() == 2);
    CHECK(s.lambdas[0] ==
          doctest::Approx(s.lambdas[1]).epsilon(1e-9));
    saw_doublet = true;
  }
  CHECK(saw_doublet);
}

TEST_CASE("witness rejects unsupported mode counts") {
  CHECK_THROWS_AS(povm_witness_inadmissible(SymClass::AIII, 9, 3, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(povm_witness_inadmissible(SymClass::A, 2, 3, 1),
                  std::invalid_argument);  // admissible class: no witness
}

TEST_CASE("the doubled generator of the quaternionic number-conserving "
          "class lands in the paired Majorana constraint set") {
  const BdgEmbeddingReport r = aii_bdg_embedding(4, 6, 31);
  CHECK(r.pass);
  CHECK(r.n_modes == 4);
  CHECK(r.samples == 6);
  CHECK(r.max_antisymmetry_residual < 1e-12);
  CHECK(r.max_quaternionic_residual < 1e-12);
  CHECK(r.max_fock_residual < 1e-10);
}

TEST_SUITE_END();
