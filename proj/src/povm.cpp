#include "fsteer/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "fsteer/fock_oracle.hpp"

namespace fsteer {

namespace {

constexpr double kLambdaTrivial = 1e-3;
constexpr double kSlackThreshold = 1e-8;
constexpr double kPairingTol = 1e-10;
constexpr double kFormulaTol = 1e-9;

// Majorana matrices with gamma^2 = 1 for `n` complex modes:
// gamma_{2j} = c_j + c_j^dag, gamma_{2j+1} = -i (c_j - c_j^dag).
std::vector<Matrix> majorana_matrices(int n_modes) {
  std::vector<Matrix> gammas;
  gammas.reserve(2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const Matrix c = fock::mode_operator(n_modes, j);
    const Matrix cd = c.adjoint();
    gammas.push_back(c + cd);
    gammas.push_back(Complex(0, -1) * (c - cd));
  }
  return gammas;
}

Matrix majorana_bilinear_hamiltonian(const Matrix& q,
                                     const std::vector<Matrix>& gammas) {
  const int dim = static_cast<int>(gammas.front().rows());
  const int n = static_cast<int>(q.rows());
  Matrix h = Matrix::Zero(dim, dim);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      if (q(mu, nu) == Complex(0, 0)) continue;
      h += 0.5 * q(mu, nu) * gammas[mu] * gammas[nu];
    }
  }
  return h;
}

// Rescale a sampled generator so the Fock exponentials stay well conditioned
// while the spectrum remains comfortably non-unitary.
void tame(Matrix& m) {
  const double mx = m.cwiseAbs().maxCoeff();
  if (mx > 0.5) m *= 0.5 / mx;
}

std::vector<double> sorted_descending(Eigen::VectorXd v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double plus_minus_pairing_residual(const std::vector<double>& lam) {
  const int n = static_cast<int>(lam.size());
  double worst = 0.0;
  for (int k = 0; k < n / 2; ++k) {
    worst = std::max(worst, std::abs(lam[k] + lam[n - 1 - k]));
  }
  return worst;
}

double doublet_residual(const std::vector<double>& lam) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < lam.size(); k += 2) {
    worst = std::max(worst, std::abs(lam[k] - lam[k + 1]));
  }
  return worst;
}

}  // namespace

KrausPairConstruction povm_check_construction(SymClass averaged_class,
                                              double alpha_param) {
  if (!admits_exact_povm(averaged_class)) {
    throw std::invalid_argument(
        "povm_check_construction: class " + class_name(averaged_class) +
        " admits no exact Gaussian measurement construction");
  }
  const double a = alpha_param;
  // Arbitrary fixed phase for the classes whose Kraus operators carry one;
  // the completeness sum is phase-independent.
  const double phi = 0.37;

  KrausPairConstruction out;
  out.averaged_class = averaged_class;
  out.alpha_param = a;

  const auto gammas = majorana_matrices(1);
  const Matrix& g1 = gammas[0];
  const Matrix& g2 = gammas[1];
  const Matrix parity_gen = Complex(0, 1) * g1 * g2;  // = -(2n - 1)

  switch (averaged_class) {
    case SymClass::A: {
      // K(+/-) = exp((+/-a + i phi) n), weights e^{-/+a} / (2 cosh a).
      out.k_plus = fock::gaussian_operator(
          1, Matrix::Constant(1, 1, -Complex(a, phi)));
      out.k_minus = fock::gaussian_operator(
          1, Matrix::Constant(1, 1, -Complex(-a, phi)));
      out.w_plus = std::exp(-a) / (2.0 * std::cosh(a));
      out.w_minus = std::exp(a) / (2.0 * std::cosh(a));
      break;
    }
    case SymClass::AI: {
      // Same as class A with the phase removed (reality constraint).
      out.k_plus =
          fock::gaussian_operator(1, Matrix::Constant(1, 1, Complex(-a, 0)));
      out.k_minus =
          fock::gaussian_operator(1, Matrix::Constant(1, 1, Complex(a, 0)));
      out.w_plus = std::exp(-a) / (2.0 * std::cosh(a));
      out.w_minus = std::exp(a) / (2.0 * std::cosh(a));
      break;
    }
    case SymClass::BDI: {
      // K(lam) = exp(-i lam g1 g2) at lam = +/- a, weights 1/(2 cosh 2a).
      out.k_plus = (-a * parity_gen).exp();
      out.k_minus = (a * parity_gen).exp();
      out.w_plus = 1.0 / (2.0 * std::cosh(2.0 * a));
      out.w_minus = out.w_plus;
      break;
    }
    case SymClass::D: {
      // K(lam, phi) = exp(-i (lam + i phi) g1 g2), weights 1/(2 cosh 2a).
      out.k_plus = (-Complex(a, phi) * parity_gen).exp();
      out.k_minus = (-Complex(-a, phi) * parity_gen).exp();
      out.w_plus = 1.0 / (2.0 * std::cosh(2.0 * a));
      out.w_minus = out.w_plus;
      break;
    }
    default:
      throw std::logic_error("povm_check_construction: unreachable");
  }

  const Matrix total = out.w_plus * out.k_plus.adjoint() * out.k_plus +
                       out.w_minus * out.k_minus.adjoint() * out.k_minus;
  out.residual = (total - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff();
  return out;
}

WitnessReport povm_witness_inadmissible(SymClass averaged_class, int n_modes,
                                        int samples, std::uint64_t seed) {
  const bool diii = (averaged_class == SymClass::DIII);
  SymClass generator_class;
  switch (averaged_class) {
    case SymClass::AIII: generator_class = SymClass::A; break;
    case SymClass::C: generator_class = SymClass::CI; break;
    case SymClass::CI: generator_class = SymClass::AI; break;
    case SymClass::CII: generator_class = SymClass::C; break;
    case SymClass::DIII: generator_class = SymClass::AII; break;
    default:
      throw std::invalid_argument(
          "povm_witness_inadmissible: class " + class_name(averaged_class) +
          " is not one of the witnessed classes");
  }
  if (n_modes < 2 || n_modes > 4 || n_modes % 2 != 0) {
    throw std::invalid_argument(
        "povm_witness_inadmissible: n_modes must be 2 or 4");
  }
  if (averaged_class == SymClass::CII && n_modes % 4 != 0) {
    throw std::invalid_argument(
        "povm_witness_inadmissible: class CII needs n_modes divisible by 4");
  }
  if (samples < 1) {
    throw std::invalid_argument("povm_witness_inadmissible: samples >= 1");
  }

  // DIII Kraus operators are Majorana bilinears on 2*n_modes Majorana modes;
  // the other classes are number conserving on n_modes complex modes.
  const int gen_dim = diii ? 2 * n_modes : n_modes;
  TransferMatrixClass algebra(generator_class, gen_dim);
  RandomStream rng(seed);

  WitnessReport report;
  report.averaged_class = averaged_class;
  report.n_modes = n_modes;
  report.samples_requested = samples;
  report.min_slack = std::numeric_limits<double>::infinity();

  const double fock_dim = std::pow(2.0, n_modes);
  const auto gammas = diii ? majorana_matrices(n_modes) : std::vector<Matrix>();
  Matrix gamma_sq;
  if (diii) {
    // Gamma = sum_i i gamma_{up,i} gamma_{down,i}; the up sector is the first
    // half of the generator index range, matching the quaternionic form.
    const int half = n_modes;  // 2N Majorana modes per spin sector
    const int dim = 1 << n_modes;
    Matrix gamma_op = Matrix::Zero(dim, dim);
    for (int i = 0; i < half; ++i) {
      gamma_op += Complex(0, 1) * gammas[i] * gammas[half + i];
    }
    gamma_sq = gamma_op * gamma_op;
  }

  for (int s = 0; s < samples; ++s) {
    Matrix m = algebra.sample(rng);
    tame(m);

    WitnessSample detail;
    if (!diii) {
      // K = exp(-sum M c^dag c); K^dag K has single-particle transfer
      // B = e^{-M^dag} e^{-M}, and Tr(K^dag K) = prod_a (1 + e^{lambda_a})
      // with lambda_a the log-eigenvalues of B.
      const Matrix t = (-m).exp();
      const Matrix b = t.adjoint() * t;
      Eigen::SelfAdjointEigenSolver<Matrix> es(b);
      std::vector<double> lam =
          sorted_descending(es.eigenvalues().array().log().matrix());
      detail.pairing_residual = plus_minus_pairing_residual(lam);
      if (averaged_class == SymClass::CII) {
        detail.pairing_residual =
            std::max(detail.pairing_residual, doublet_residual(lam));
      }
      double prod = 1.0;
      for (double l : lam) prod *= 1.0 + std::exp(l);
      detail.trace_analytic = prod;
      const Matrix k = fock::gaussian_operator(n_modes, m);
      detail.trace_fock = (k.adjoint() * k).trace().real();
      detail.slack = detail.trace_fock / fock_dim - 1.0;
      detail.lambdas.assign(lam.begin(), lam.begin() + lam.size() / 2);
      detail.trivial = std::abs(lam.front()) <= kLambdaTrivial;
    } else {
      // K = exp(-(1/2) sum M gamma gamma). The transfer matrix on Majorana
      // operators is e^{2M}; its log-singular values form doubly degenerate
      // +/- pairs {+/- lambda_i (x2)}.
      const int n4 = gen_dim;  // 4N Majorana modes, N = n_modes / 2
      const int big_n = n_modes / 2;
      const Matrix t = (2.0 * m).exp();
      Eigen::JacobiSVD<Matrix> svd(t);
      Eigen::VectorXd logs = svd.singularValues().array().log().matrix();
      std::vector<double> lam = sorted_descending(logs);
      detail.pairing_residual = std::max(plus_minus_pairing_residual(lam),
                                         doublet_residual(lam));
      std::vector<double> lam_i;
      for (int i = 0; i < big_n; ++i) lam_i.push_back(lam[2 * i]);
      double prod = 1.0, tanh_sum = 0.0;
      for (double l : lam_i) {
        prod *= std::cosh(l) * std::cosh(l);
        tanh_sum += std::tanh(l) * std::tanh(l);
      }
      detail.trace_analytic = fock_dim * prod;
      detail.trace2_analytic =
          n4 / 2 * fock_dim * prod * (1.0 + tanh_sum / big_n);
      const Matrix h = majorana_bilinear_hamiltonian(m, gammas);
      const Matrix k = (-h).exp();
      const Matrix kk = k.adjoint() * k;
      detail.trace_fock = kk.trace().real();
      detail.trace2_fock = (kk * gamma_sq).trace().real();
      detail.slack = tanh_sum / big_n;
      detail.lambdas = lam_i;
      detail.trivial = std::abs(lam.front()) <= kLambdaTrivial;
    }

    double mismatch = std::abs(detail.trace_fock - detail.trace_analytic) /
                      std::max(1.0, std::abs(detail.trace_analytic));
    if (diii) {
      mismatch = std::max(
          mismatch, std::abs(detail.trace2_fock - detail.trace2_analytic) /
                        std::max(1.0, std::abs(detail.trace2_analytic)));
    }
    report.max_formula_mismatch =
        std::max(report.max_formula_mismatch, mismatch);
    report.max_pairing_residual =
        std::max(report.max_pairing_residual, detail.pairing_residual);
    if (detail.trivial) {
      ++report.samples_skipped;
    } else {
      ++report.samples_tested;
      report.min_slack = std::min(report.min_slack, detail.slack);
    }
    report.details.push_back(std::move(detail));
  }

  report.pass = report.samples_tested >= 1 &&
                report.min_slack > kSlackThreshold &&
                report.max_pairing_residual <= kPairingTol &&
                report.max_formula_mismatch <= kFormulaTol;
  return report;
}

BdgEmbeddingReport aii_bdg_embedding(int n_modes, int samples,
                                     std::uint64_t seed) {
  if (n_modes < 2 || n_modes > 4 || n_modes % 2 != 0) {
    throw std::invalid_argument("aii_bdg_embedding: n_modes must be 2 or 4");
  }
  if (samples < 1) {
    throw std::invalid_argument("aii_bdg_embedding: samples >= 1");
  }
  // Number-conserving generators of the averaged class AII live in the
  // quaternionic algebra (class CII constraint set).
  TransferMatrixClass algebra(SymClass::CII, n_modes);
  RandomStream rng(seed);

  const int n = n_modes;
  const Matrix eye_n = Matrix::Identity(n, n);
  // Majorana ordering (a, j): index a*n + j, a = 0 for gamma_{2j}, a = 1 for
  // gamma_{2j+1}. In this ordering the quaternionic structure of the doubled
  // generator is J = sigma_z (x) Omega (x) 1.
  Matrix omega_c = Matrix::Zero(n, n);
  for (int j = 0; j < n / 2; ++j) {
    omega_c(j, n / 2 + j) = 1.0;
    omega_c(n / 2 + j, j) = -1.0;
  }
  Matrix j_maj = Matrix::Zero(2 * n, 2 * n);
  j_maj.topLeftCorner(n, n) = omega_c;
  j_maj.bottomRightCorner(n, n) = -omega_c;

  const auto gammas = majorana_matrices(n);
  std::vector<Matrix> gamma_ordered(2 * n);
  for (int a = 0; a < 2; ++a) {
    for (int j = 0; j < n; ++j) gamma_ordered[a * n + j] = gammas[2 * j + a];
  }

  BdgEmbeddingReport report;
  report.n_modes = n_modes;
  report.samples = samples;

  for (int s = 0; s < samples; ++s) {
    Matrix m = algebra.sample(rng);
    tame(m);
    // Majorana bilinear form of sum M c^dag c:
    //   (1/2) sum Q gamma gamma + tr(M)/2,
    //   Q = (1/4) [ 1 (x) (M - M^T) + Omega_block (x) i (M + M^T) ].
    const Matrix asym = 0.25 * (m - m.transpose());
    const Matrix sym = Complex(0, 0.25) * (m + m.transpose());
    Matrix q = Matrix::Zero(2 * n, 2 * n);
    q.topLeftCorner(n, n) = asym;
    q.bottomRightCorner(n, n) = asym;
    q.topRightCorner(n, n) = sym;
    q.bottomLeftCorner(n, n) = -sym;

    report.max_antisymmetry_residual =
        std::max(report.max_antisymmetry_residual,
                 (q + q.transpose()).cwiseAbs().maxCoeff());
    report.max_quaternionic_residual = std::max(
        report.max_quaternionic_residual,
        (q - j_maj.transpose() * q.conjugate() * j_maj).cwiseAbs().maxCoeff());

    const Matrix k_number = fock::gaussian_operator(n, m);
    const Matrix h = majorana_bilinear_hamiltonian(q, gamma_ordered);
    const Matrix k_majorana = std::exp(-m.trace() / 2.0) * (-h).exp();
    report.max_fock_residual =
        std::max(report.max_fock_residual,
                 (k_number - k_majorana).cwiseAbs().maxCoeff() /
                     std::max(1.0, k_number.cwiseAbs().maxCoeff()));
  }
  report.pass = report.max_antisymmetry_residual <= 1e-12 &&
                report.max_quaternionic_residual <= 1e-12 &&
                report.max_fock_residual <= 1e-12;
  return report;
}

}  // namespace fsteer
