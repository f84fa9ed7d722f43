// SPDX-License-Identifier: MIT
//
// Tenfold-way checks: algebra dimensions, constraint satisfaction and Lie
// closure of sampled generators, group relations of their exponentials, the
// signature dictionary, and the generator-to-averaged-evolution pairing.

#include <cstdint>
#include <map>
#include <stdexcept>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "fsteer/symmetry_class.hpp"

using namespace fsteer;

TEST_SUITE_BEGIN("symmetry_class");

TEST_CASE("class names round-trip") {
  for (SymClass c : all_sym_classes()) {
    CHECK(class_from_name(class_name(c)) == c);
  }
  CHECK_THROWS_AS(class_from_name("Z2"), std::invalid_argument);
  CHECK(all_sym_classes().size() == kNumSymClasses);
}

TEST_CASE("algebra dimensions at matrix size 8 match the classification") {
  const std::map<SymClass, int> want = {
      {SymClass::A, 64},   {SymClass::AIII, 128}, {SymClass::AI, 36},
      {SymClass::BDI, 64}, {SymClass::D, 28},     {SymClass::DIII, 56},
      {SymClass::AII, 28}, {SymClass::CII, 64},   {SymClass::C, 36},
      {SymClass::CI, 72}};
  for (const auto& [c, dim] : want) {
    const TransferMatrixClass algebra(c, 8);
    CHECK_MESSAGE(algebra.real_dimension() == dim, class_name(c));
  }
}

TEST_CASE("sampled generators satisfy their constraints and close under "
          "commutators") {
  RandomStream rng(50);
  for (SymClass c : all_sym_classes()) {
    const TransferMatrixClass algebra(c, 8);
    const Matrix m1 = algebra.sample(rng);
    const Matrix m2 = algebra.sample(rng);
    CHECK_MESSAGE(algebra.constraint_residual(m1) < 1e-12, class_name(c));
    const Matrix comm = m1 * m2 - m2 * m1;
    CHECK_MESSAGE(algebra.constraint_residual(comm) < 1e-12, class_name(c));
  }
}

TEST_CASE("exponentials satisfy the class's group relation") {
  RandomStream rng(51);
  for (SymClass c : all_sym_classes()) {
    const TransferMatrixClass algebra(c, 8);
    const Matrix t = algebra.sample(rng).exp().eval();
    CHECK_MESSAGE(algebra.group_relation_residual(t) < 1e-10, class_name(c));
  }
}

TEST_CASE("signature table matches the standard classification") {
  auto sig = [](int trs, int phs, int chi) {
    return AZSignature{trs, phs, chi};
  };
  CHECK(az_signature(SymClass::A) == sig(0, 0, 0));
  CHECK(az_signature(SymClass::AIII) == sig(0, 0, 1));
  CHECK(az_signature(SymClass::AI) == sig(+1, 0, 0));
  CHECK(az_signature(SymClass::BDI) == sig(+1, +1, 1));
  CHECK(az_signature(SymClass::D) == sig(0, +1, 0));
  CHECK(az_signature(SymClass::DIII) == sig(-1, +1, 1));
  CHECK(az_signature(SymClass::AII) == sig(-1, 0, 0));
  CHECK(az_signature(SymClass::CII) == sig(-1, -1, 1));
  CHECK(az_signature(SymClass::C) == sig(0, -1, 0));
  CHECK(az_signature(SymClass::CI) == sig(+1, -1, 1));
}

TEST_CASE("averaged-evolution pairing is the expected cycle") {
  CHECK(averaged_evolution_partner(SymClass::A) == SymClass::AIII);
  CHECK(averaged_evolution_partner(SymClass::AIII) == SymClass::A);
  CHECK(averaged_evolution_partner(SymClass::AI) == SymClass::CI);
  CHECK(averaged_evolution_partner(SymClass::BDI) == SymClass::AI);
  CHECK(averaged_evolution_partner(SymClass::D) == SymClass::BDI);
  CHECK(averaged_evolution_partner(SymClass::DIII) == SymClass::D);
  CHECK(averaged_evolution_partner(SymClass::AII) == SymClass::DIII);
  CHECK(averaged_evolution_partner(SymClass::CII) == SymClass::AII);
  CHECK(averaged_evolution_partner(SymClass::C) == SymClass::CII);
  CHECK(averaged_evolution_partner(SymClass::CI) == SymClass::C);
  // The pairing is a bijection (each class appears exactly once as image).
  std::map<SymClass, int> hits;
  for (SymClass c : all_sym_classes()) ++hits[averaged_evolution_partner(c)];
  for (SymClass c : all_sym_classes()) CHECK(hits[c] == 1);
}

TEST_CASE("exact-measurement availability singles out four classes") {
  int n_admissible = 0;
  for (SymClass c : all_sym_classes())
    if (admits_exact_povm(c)) ++n_admissible;
  CHECK(n_admissible == 4);
  CHECK(admits_exact_povm(SymClass::A));
  CHECK(admits_exact_povm(SymClass::AI));
  CHECK(admits_exact_povm(SymClass::BDI));
  CHECK(admits_exact_povm(SymClass::D));
  CHECK_FALSE(admits_exact_povm(SymClass::AII));
  CHECK_FALSE(admits_exact_povm(SymClass::AIII));
}

TEST_CASE("symmetry residuals detect held and broken symmetries") {
  // Generators sampled from one class carry the antiunitary signature of
  // their averaged-evolution partner. CI maps to C = (no TRS, PHS², no
  // chiral), giving one held and two broken symmetry types on a generic
  // sample; AIII maps to A, which has no symmetry at all.
  RandomStream rng(52);
  const auto candidates = canonical_unitaries(8);

  const Matrix m_ci = TransferMatrixClass(SymClass::CI, 8).sample(rng);
  bool phs_held = false, trs_held = false, chiral_held = false;
  for (const auto& cand : candidates) {
    if (phs_residual(m_ci, cand.u) < 1e-10 && cand.parity == -1)
      phs_held = true;
    if (trs_residual(m_ci, cand.u) < 1e-10) trs_held = true;
    if (chiral_residual(m_ci, cand.u) < 1e-10) chiral_held = true;
  }
  CHECK(phs_held);
  CHECK_FALSE(trs_held);
  CHECK_FALSE(chiral_held);

  const Matrix m_aiii = TransferMatrixClass(SymClass::AIII, 8).sample(rng);
  for (const auto& cand : candidates) {
    CHECK(trs_residual(m_aiii, cand.u) > 1e-6);
    CHECK(phs_residual(m_aiii, cand.u) > 1e-6);
    CHECK(chiral_residual(m_aiii, cand.u) > 1e-6);
  }
}

TEST_CASE("measured signatures identify each generator class uniquely") {
  // Reduced-volume version of the full verification table: 10 samples per
  // class at dimension 8, exact-arithmetic tolerances.
  for (int idx = 0; idx < kNumSymClasses; ++idx) {
    const SymClass c = all_sym_classes()[idx];
    const CorrespondenceResult r =
        verify_correspondence(c, 10, 1000 + static_cast<std::uint64_t>(idx));
    INFO(class_name(c));
    CHECK(r.matches);
    CHECK_FALSE(r.measured.ambiguous);
    CHECK(r.measured.signature == r.expected);
    CHECK(r.max_constraint_residual < 1e-10);
    CHECK(r.max_closure_residual < 1e-10);
    CHECK(r.max_group_residual < 1e-10);
    CHECK(r.partner == averaged_evolution_partner(c));
    CHECK(r.n_samples == 10);
  }
}

TEST_SUITE_END();
