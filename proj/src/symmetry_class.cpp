#include "fsteer/symmetry_class.hpp"

#include <algorithm>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace fsteer {

namespace {

enum Op { kId = 0, kConj = 1, kTrans = 2, kAdj = 3 };

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix symplectic_omega() {
  Matrix m(2, 2);
  m << 0, 1, -1, 0;
  return m;
}

Matrix sigma_z_form(int dim) {
  return kron(pauli_z(), Matrix::Identity(dim / 2, dim / 2));
}

Matrix omega_form(int dim) {
  return kron(symplectic_omega(), Matrix::Identity(dim / 2, dim / 2));
}

Matrix sz_omega_form(int dim) {
  return kron(pauli_z(),
              kron(symplectic_omega(), Matrix::Identity(dim / 4, dim / 4)));
}

Matrix id_omega_form(int dim) {
  return kron(Matrix::Identity(2, 2),
              kron(symplectic_omega(), Matrix::Identity(dim / 4, dim / 4)));
}

double max_norm(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

const std::vector<SymClass>& all_sym_classes() {
  static const std::vector<SymClass> classes = {
      SymClass::A,    SymClass::AIII, SymClass::AI, SymClass::BDI,
      SymClass::D,    SymClass::DIII, SymClass::AII, SymClass::CII,
      SymClass::C,    SymClass::CI};
  return classes;
}

std::string class_name(SymClass c) {
  switch (c) {
    case SymClass::A: return "A";
    case SymClass::AIII: return "AIII";
    case SymClass::AI: return "AI";
    case SymClass::BDI: return "BDI";
    case SymClass::D: return "D";
    case SymClass::DIII: return "DIII";
    case SymClass::AII: return "AII";
    case SymClass::CII: return "CII";
    case SymClass::C: return "C";
    case SymClass::CI: return "CI";
  }
  throw std::invalid_argument("class_name: unknown class");
}

SymClass class_from_name(const std::string& name) {
  for (SymClass c : all_sym_classes()) {
    if (class_name(c) == name) return c;
  }
  throw std::invalid_argument("class_from_name: unknown class '" + name + "'");
}

AZSignature az_signature(SymClass c) {
  switch (c) {
    case SymClass::A: return {0, 0, 0};
    case SymClass::AIII: return {0, 0, 1};
    case SymClass::AI: return {+1, 0, 0};
    case SymClass::BDI: return {+1, +1, 1};
    case SymClass::D: return {0, +1, 0};
    case SymClass::DIII: return {-1, +1, 1};
    case SymClass::AII: return {-1, 0, 0};
    case SymClass::CII: return {-1, -1, 1};
    case SymClass::C: return {0, -1, 0};
    case SymClass::CI: return {+1, -1, 1};
  }
  throw std::invalid_argument("az_signature: unknown class");
}

SymClass averaged_evolution_partner(SymClass c) {
  switch (c) {
    case SymClass::A: return SymClass::AIII;
    case SymClass::AIII: return SymClass::A;
    case SymClass::AI: return SymClass::CI;
    case SymClass::BDI: return SymClass::AI;
    case SymClass::D: return SymClass::BDI;
    case SymClass::DIII: return SymClass::D;
    case SymClass::AII: return SymClass::DIII;
    case SymClass::CII: return SymClass::AII;
    case SymClass::C: return SymClass::CII;
    case SymClass::CI: return SymClass::C;
  }
  throw std::invalid_argument("averaged_evolution_partner: unknown class");
}

bool admits_exact_povm(SymClass averaged_class) {
  switch (averaged_class) {
    case SymClass::A:
    case SymClass::AI:
    case SymClass::BDI:
    case SymClass::D:
      return true;
    default:
      return false;
  }
}

TransferMatrixClass::TransferMatrixClass(SymClass c, int dim)
    : class_(c), dim_(dim) {
  if (dim < 2 || dim % 2 != 0) {
    throw std::invalid_argument(
        "TransferMatrixClass: dimension must be even and >= 2");
  }
  const bool needs_quaternionic = (c == SymClass::C);
  if (needs_quaternionic && dim % 4 != 0) {
    throw std::invalid_argument(
        "TransferMatrixClass: class C needs dimension divisible by 4");
  }
  const Matrix id = Matrix::Identity(dim, dim);
  const Matrix sz = sigma_z_form(dim);
  const Matrix om = omega_form(dim);

  auto realness = [&]() {
    return std::vector<Term>{{id, id, kId, Complex(1, 0)},
                             {id, id, kConj, Complex(-1, 0)}};
  };
  auto antisymmetry = [&]() {
    return std::vector<Term>{{id, id, kId, Complex(1, 0)},
                             {id, id, kTrans, Complex(1, 0)}};
  };

  switch (c) {
    case SymClass::A:
      // M Sz + Sz M^dag = 0  (pseudo-antihermitian)
      constraints_.push_back({{id, sz, kId, Complex(1, 0)},
                              {sz, id, kAdj, Complex(1, 0)}});
      break;
    case SymClass::AIII:
      break;  // unconstrained complex matrices
    case SymClass::AI:
      constraints_.push_back(realness());
      // M Om + Om M^T = 0  (real symplectic)
      constraints_.push_back({{id, om, kId, Complex(1, 0)},
                              {om, id, kTrans, Complex(1, 0)}});
      break;
    case SymClass::BDI:
      constraints_.push_back(realness());
      break;
    case SymClass::D:
      constraints_.push_back(realness());
      // M^T Sz + Sz M = 0  (split orthogonal)
      constraints_.push_back({{id, sz, kTrans, Complex(1, 0)},
                              {sz, id, kId, Complex(1, 0)}});
      break;
    case SymClass::DIII:
      constraints_.push_back(antisymmetry());
      break;
    case SymClass::AII:
      constraints_.push_back(antisymmetry());
      // M^dag Om + Om M = 0
      constraints_.push_back({{id, om, kAdj, Complex(1, 0)},
                              {om, id, kId, Complex(1, 0)}});
      break;
    case SymClass::CII:
      // Om^T M* Om = M  (quaternionic reality)
      constraints_.push_back({{om.transpose(), om, kConj, Complex(1, 0)},
                              {id, id, kId, Complex(-1, 0)}});
      break;
    case SymClass::C: {
      const Matrix q = sz_omega_form(dim);
      // M^dag Sz + Sz M = 0 together with q^T M* q = M
      constraints_.push_back({{id, sz, kAdj, Complex(1, 0)},
                              {sz, id, kId, Complex(1, 0)}});
      constraints_.push_back({{q.transpose(), q, kConj, Complex(1, 0)},
                              {id, id, kId, Complex(-1, 0)}});
      break;
    }
    case SymClass::CI:
      // M^T Om + Om M = 0  (complex symplectic)
      constraints_.push_back({{id, om, kTrans, Complex(1, 0)},
                              {om, id, kId, Complex(1, 0)}});
      break;
  }
  build_basis();
}

Matrix TransferMatrixClass::apply_constraint(const std::vector<Term>& terms,
                                             const Matrix& m) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const Term& t : terms) {
    Matrix opm;
    switch (t.op) {
      case kId: opm = m; break;
      case kConj: opm = m.conjugate(); break;
      case kTrans: opm = m.transpose(); break;
      case kAdj: opm = m.adjoint(); break;
      default: throw std::logic_error("apply_constraint: bad op");
    }
    out += t.coeff * t.left * opm * t.right;
  }
  return out;
}

void TransferMatrixClass::build_basis() {
  const int d = dim_;
  const int n_real = 2 * d * d;
  if (constraints_.empty()) {
    basis_ = Eigen::MatrixXd::Identity(n_real, n_real);
    return;
  }
  const int rows = static_cast<int>(constraints_.size()) * n_real;
  Eigen::MatrixXd a(rows, n_real);
  for (int b = 0; b < n_real; ++b) {
    Matrix basis_dir = Matrix::Zero(d, d);
    const int entry = b % (d * d);
    const int i = entry / d;
    const int j = entry % d;
    basis_dir(i, j) = (b < d * d) ? Complex(1, 0) : Complex(0, 1);
    int row0 = 0;
    for (const auto& constraint : constraints_) {
      const Matrix val = apply_constraint(constraint, basis_dir);
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
          a(row0 + p * d + q, b) = val(p, q).real();
          a(row0 + d * d + p * d + q, b) = val(p, q).imag();
        }
      }
      row0 += n_real;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  basis_ = svd.matrixV().rightCols(n_real - rank);
}

Matrix TransferMatrixClass::sample(RandomStream& rng) const {
  const int d = dim_;
  Eigen::VectorXd coeffs(basis_.cols());
  for (int i = 0; i < coeffs.size(); ++i) coeffs(i) = rng.normal();
  const Eigen::VectorXd x = basis_ * coeffs;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      m(i, j) = Complex(x(i * d + j), x(d * d + i * d + j));
    }
  }
  return m;
}

double TransferMatrixClass::constraint_residual(const Matrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) {
    throw std::invalid_argument("constraint_residual: dimension mismatch");
  }
  double worst = 0.0;
  for (const auto& constraint : constraints_) {
    worst = std::max(worst, max_norm(apply_constraint(constraint, m)));
  }
  return worst / std::max(1.0, max_norm(m));
}

double TransferMatrixClass::group_relation_residual(const Matrix& t) const {
  const int d = dim_;
  const Matrix id = Matrix::Identity(d, d);
  const Matrix sz = sigma_z_form(d);
  const Matrix om = omega_form(d);
  const double scale = std::max(1.0, max_norm(t));
  auto norm = [&](const Matrix& m) { return max_norm(m) / scale; };
  switch (class_) {
    case SymClass::A:
      return norm(t.adjoint() * sz * t - sz);
    case SymClass::AIII:
      return 0.0;
    case SymClass::AI:
      return std::max(norm(t - t.conjugate()),
                      norm(t.transpose() * om * t - om));
    case SymClass::BDI:
      return norm(t - t.conjugate());
    case SymClass::D:
      return std::max(norm(t - t.conjugate()),
                      norm(t.transpose() * sz * t - sz));
    case SymClass::DIII:
      return norm(t.transpose() * t - id);
    case SymClass::AII:
      return std::max(norm(t.transpose() * t - id),
                      norm(t.adjoint() * om * t - om));
    case SymClass::CII:
      return norm(om.transpose() * t.conjugate() * om - t);
    case SymClass::C: {
      const Matrix q = sz_omega_form(d);
      return std::max(norm(t.adjoint() * sz * t - sz),
                      norm(q.transpose() * t.conjugate() * q - t));
    }
    case SymClass::CI:
      return norm(t.transpose() * om * t - om);
  }
  throw std::logic_error("group_relation_residual: unknown class");
}

std::vector<CandidateUnitary> canonical_unitaries(int dim) {
  if (dim % 2 != 0) {
    throw std::invalid_argument("canonical_unitaries: dimension must be even");
  }
  std::vector<CandidateUnitary> out;
  out.push_back({"identity", Matrix::Identity(dim, dim), +1});
  out.push_back({"sigma_z", sigma_z_form(dim), +1});
  out.push_back({"omega", omega_form(dim), -1});
  if (dim % 4 == 0) {
    out.push_back({"sz_omega", sz_omega_form(dim), -1});
    out.push_back({"id_omega", id_omega_form(dim), -1});
  }
  for (const auto& cand : out) {
    const Matrix p = cand.u * cand.u.conjugate();
    const Matrix target =
        static_cast<double>(cand.parity) * Matrix::Identity(dim, dim);
    if (max_norm(p - target) > 1e-12) {
      throw std::logic_error("canonical_unitaries: parity check failed for " +
                             cand.name);
    }
  }
  return out;
}

double trs_residual(const Matrix& m, const Matrix& u) {
  const Matrix r = m - u.adjoint() * m.conjugate() * u;
  return max_norm(r) / std::max(1.0, max_norm(m));
}

double phs_residual(const Matrix& m, const Matrix& u) {
  const Matrix r = m + (u.adjoint() * m * u).transpose();
  return max_norm(r) / std::max(1.0, max_norm(m));
}

double chiral_residual(const Matrix& m, const Matrix& u) {
  const Matrix r = m + (u.adjoint() * m.conjugate() * u).transpose();
  return max_norm(r) / std::max(1.0, max_norm(m));
}

MeasuredSignature measure_signature(const std::vector<Matrix>& samples,
                                    double tol) {
  if (samples.empty()) {
    throw std::invalid_argument("measure_signature: no samples");
  }
  const int dim = static_cast<int>(samples.front().rows());
  const auto candidates = canonical_unitaries(dim);

  auto scan = [&](auto residual_fn, std::string* chosen, bool* ambiguous,
                  bool* present, int* parity) {
    *present = false;
    *parity = 0;
    for (const auto& cand : candidates) {
      double worst = 0.0;
      for (const Matrix& m : samples) {
        worst = std::max(worst, residual_fn(m, cand.u));
        if (worst >= tol) break;
      }
      if (worst < tol) {
        if (!*present) {
          *present = true;
          *parity = cand.parity;
          *chosen = cand.name;
        } else if (*parity != cand.parity) {
          *ambiguous = true;
        }
      }
    }
  };

  MeasuredSignature out;
  bool present = false;
  int parity = 0;
  scan(trs_residual, &out.trs_candidate, &out.ambiguous, &present, &parity);
  out.signature.trs = present ? parity : 0;
  scan(phs_residual, &out.phs_candidate, &out.ambiguous, &present, &parity);
  out.signature.phs = present ? parity : 0;
  scan(chiral_residual, &out.chiral_candidate, &out.ambiguous, &present,
       &parity);
  out.signature.chiral = present ? 1 : 0;
  return out;
}

CorrespondenceResult verify_correspondence(SymClass c, int n_samples,
                                           std::uint64_t seed, double tol) {
  if (n_samples < 2) {
    throw std::invalid_argument("verify_correspondence: need >= 2 samples");
  }
  constexpr int kDim = 8;
  TransferMatrixClass algebra(c, kDim);
  RandomStream rng(seed);

  CorrespondenceResult result;
  result.generator_class = c;
  result.partner = averaged_evolution_partner(c);
  result.expected = az_signature(result.partner);
  result.n_samples = n_samples;

  std::vector<Matrix> samples;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    Matrix m = algebra.sample(rng);
    result.max_constraint_residual = std::max(
        result.max_constraint_residual, algebra.constraint_residual(m));
    // Group relation for a moderately scaled exponential of the generator.
    const Matrix scaled = m * (0.5 / std::max(1.0, m.cwiseAbs().maxCoeff()));
    const Matrix t = scaled.exp();
    result.max_group_residual =
        std::max(result.max_group_residual, algebra.group_relation_residual(t));
    samples.push_back(std::move(m));
  }
  for (int i = 0; i < n_samples; ++i) {
    const Matrix& m1 = samples[i];
    const Matrix& m2 = samples[(i + 1) % n_samples];
    const Matrix comm = m1 * m2 - m2 * m1;
    result.max_closure_residual = std::max(result.max_closure_residual,
                                           algebra.constraint_residual(comm));
  }

  result.measured = measure_signature(samples, tol);

  int rows_equal = 0;
  for (SymClass other : all_sym_classes()) {
    if (az_signature(other) == result.measured.signature) ++rows_equal;
  }
  result.matches = (result.measured.signature == result.expected) &&
                   !result.measured.ambiguous && rows_equal == 1 &&
                   result.max_constraint_residual < tol &&
                   result.max_closure_residual < tol &&
                   result.max_group_residual < tol;
  return result;
}

}  // namespace fsteer
