// SPDX-License-Identifier: MIT
//
// Symmetry classification of measurement transfer matrices.
//
// A weak or projective Gaussian measurement acts on mode operators through a
// transfer matrix t = e^M. Imposing antiunitary/chiral constraints on the
// measurement ensemble confines the generator M to one of ten constraint-
// defined real matrix algebras (labelled by the standard Altland-Zirnbauer
// symbols). This module provides:
//
//   * the ten algebra definitions as real-linear constraint sets,
//   * random sampling of algebra elements via an explicit null-space basis,
//   * residuals for algebra membership, Lie-closure, and the group-level
//     relations satisfied by t = e^M,
//   * measurement of the (TRS, PHS, chiral) symmetry signature of sampled
//     generators against a fixed dictionary of candidate unitaries, and
//   * verification that the measured signature matches the symmetry class of
//     the associated ensemble-averaged (dissipative) evolution.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsteer/gaussian_core.hpp"
#include "fsteer/random_stream.hpp"

namespace fsteer {

enum class SymClass { A, AIII, AI, BDI, D, DIII, AII, CII, C, CI };

inline constexpr int kNumSymClasses = 10;

const std::vector<SymClass>& all_sym_classes();
std::string class_name(SymClass c);
SymClass class_from_name(const std::string& name);

// Antiunitary/chiral signature of a symmetry class: trs/phs in {0,+1,-1}
// (absent / squares to +1 / squares to -1), chiral in {0,1}.
struct AZSignature {
  int trs = 0;
  int phs = 0;
  int chiral = 0;
  bool operator==(const AZSignature&) const = default;
};

AZSignature az_signature(SymClass c);

// Class of the ensemble-averaged evolution generated by transfer matrices
// drawn from the given generator algebra.
SymClass averaged_evolution_partner(SymClass c);

// Classes of the averaged evolution that admit an exactly trace-preserving
// two-outcome Gaussian measurement (constructed in the POVM module).
bool admits_exact_povm(SymClass averaged_class);

// Constraint-defined generator algebra at a fixed matrix dimension.
// Dimension requirements: even for all classes; divisible by 4 for the
// quaternionic classes (C and the candidate unitaries built from sigma_z (x)
// Omega (x) 1).
class TransferMatrixClass {
 public:
  TransferMatrixClass(SymClass c, int dim);

  SymClass sym_class() const { return class_; }
  int dim() const { return dim_; }

  // Real dimension of the algebra (size of the constraint null space).
  int real_dimension() const { return static_cast<int>(basis_.cols()); }

  // Random algebra element: Gaussian coefficients over the null-space basis.
  Matrix sample(RandomStream& rng) const;

  // max-norm of all constraint equations evaluated on M, normalized by
  // max(1, |M|_max).
  double constraint_residual(const Matrix& m) const;

  // Residual of the group-level relation satisfied by t = e^M for this class
  // (pseudo-unitarity, orthogonality, reality, quaternionic reality, ...).
  double group_relation_residual(const Matrix& t) const;

 private:
  SymClass class_;
  int dim_;
  struct Term {
    Matrix left;
    Matrix right;
    int op;  // 0 identity, 1 conjugate, 2 transpose, 3 adjoint
    Complex coeff;
  };
  std::vector<std::vector<Term>> constraints_;
  Eigen::MatrixXd basis_;  // 2*dim^2 x real_dimension, orthonormal columns

  Matrix apply_constraint(const std::vector<Term>& terms,
                          const Matrix& m) const;
  void build_basis();
};

// Named candidate unitaries scanned when measuring a signature.
struct CandidateUnitary {
  std::string name;
  Matrix u;
  int parity;  // +1 or -1 from U U* = +/- 1
};

std::vector<CandidateUnitary> canonical_unitaries(int dim);

// Constraint residuals for the three symmetry types acting on a generator,
// normalized by max(1, |M|_max):
//   TRS:    M = U^dag M* U
//   PHS:    M = -(U^dag M U)^T
//   chiral: M = -(U^dag M* U)^T
double trs_residual(const Matrix& m, const Matrix& u);
double phs_residual(const Matrix& m, const Matrix& u);
double chiral_residual(const Matrix& m, const Matrix& u);

struct MeasuredSignature {
  AZSignature signature;
  bool ambiguous = false;  // conflicting parities among satisfied candidates
  std::string trs_candidate;
  std::string phs_candidate;
  std::string chiral_candidate;
};

// Scans the candidate dictionary against every sample; a symmetry is present
// only if one candidate satisfies it on all samples to tolerance `tol`.
MeasuredSignature measure_signature(const std::vector<Matrix>& samples,
                                    double tol);

struct CorrespondenceResult {
  SymClass generator_class;
  SymClass partner;
  AZSignature expected;
  MeasuredSignature measured;
  bool matches = false;
  double max_constraint_residual = 0;  // samples obey their own algebra
  double max_closure_residual = 0;     // commutators stay in the algebra
  double max_group_residual = 0;       // e^M obeys the group relation
  int n_samples = 0;
};

// Samples `n_samples` generators at dimension 8, measures the signature, and
// compares with the signature of the averaged-evolution class. `matches`
// additionally requires the measured signature to be unique among the ten
// classes and unambiguous.
CorrespondenceResult verify_correspondence(SymClass c, int n_samples,
                                           std::uint64_t seed,
                                           double tol = 1e-10);

}  // namespace fsteer
