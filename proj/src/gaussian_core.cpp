// SPDX-License-Identifier: MIT

#include "fsteer/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsteer {

namespace {

constexpr double kDegenerateTol = 1e-12;

// v = G w, exploiting the support of w when declared.
Vector correlate(const Matrix& g, const ModeVector& w) {
  if (w.support.empty()) return g * w.amplitudes;
  Vector v = Vector::Zero(g.rows());
  for (int s : w.support) v.noalias() += g.col(s) * w.amplitudes(s);
  return v;
}

// G += a w w† + b (w vt† + vt w†) + c vt vt†, support-aware in w.
void apply_rank_update(Matrix& g, const ModeVector& w, const Vector& vt,
                       double a, double b, double c) {
  if (c != 0.0) g.noalias() += c * (vt * vt.adjoint());
  if (w.support.empty()) {
    if (b != 0.0)
      g.noalias() += b * (w.amplitudes * vt.adjoint() +
                          vt * w.amplitudes.adjoint());
    if (a != 0.0) g.noalias() += a * (w.amplitudes * w.amplitudes.adjoint());
    return;
  }
  if (b != 0.0) {
    for (int s : w.support) {
      const Complex ws = w.amplitudes(s);
      g.row(s).noalias() += (b * ws) * vt.adjoint();
      g.col(s).noalias() += (b * std::conj(ws)) * vt;
    }
  }
  if (a != 0.0) {
    for (int s : w.support)
      for (int t : w.support)
        g(s, t) += a * w.amplitudes(s) * std::conj(w.amplitudes(t));
  }
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

ModeVector make_dense_mode(Vector amplitudes) {
  ModeVector m;
  m.amplitudes = std::move(amplitudes);
  return m;
}

Matrix product_state(int dim, const std::vector<int>& occupations) {
  if (static_cast<int>(occupations.size()) != dim)
    throw std::invalid_argument("product_state: occupation list size != dim");
  Matrix g = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (occupations[i] != 0 && occupations[i] != 1)
      throw std::invalid_argument("product_state: occupations must be 0 or 1");
    g(i, i) = static_cast<double>(occupations[i]);
  }
  return g;
}

void apply_unitary(Matrix& g, const Matrix& t) {
  if (t.rows() != g.rows() || t.cols() != g.cols())
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  g = t.transpose() * g * t.conjugate();
}

void apply_local_unitary(Matrix& g, const std::vector<int>& idx,
                         const Matrix& t_small) {
  const int m = static_cast<int>(idx.size());
  if (t_small.rows() != m || t_small.cols() != m)
    throw std::invalid_argument("apply_local_unitary: block size mismatch");
  const int n = static_cast<int>(g.rows());
  // Rows: G(idx, :) <- t_smallᵀ G(idx, :)
  Matrix rows(m, n);
  for (int a = 0; a < m; ++a) rows.row(a) = g.row(idx[a]);
  Matrix new_rows = t_small.transpose() * rows;
  for (int a = 0; a < m; ++a) g.row(idx[a]) = new_rows.row(a);
  // Columns: G(:, idx) <- G(:, idx) conj(t_small)
  Matrix cols(n, m);
  for (int a = 0; a < m; ++a) cols.col(a) = g.col(idx[a]);
  Matrix new_cols = cols * t_small.conjugate();
  for (int a = 0; a < m; ++a) g.col(idx[a]) = new_cols.col(a);
}

double occupation_expectation(const Matrix& g, const ModeVector& w) {
  if (w.support.empty())
    return std::real(Complex(w.amplitudes.adjoint() * g * w.amplitudes));
  Complex acc = 0.0;
  for (int s : w.support)
    for (int t : w.support)
      acc += std::conj(w.amplitudes(s)) * g(s, t) * w.amplitudes(t);
  return std::real(acc);
}

double measurement_update(Matrix& g, const ModeVector& w, int outcome) {
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("measurement_update: outcome must be 0 or 1");
  const double p = clamp01(occupation_expectation(g, w));
  if (outcome == 1 && p < kDegenerateTol)
    throw std::invalid_argument(
        "measurement_update: outcome 1 has vanishing probability");
  if (outcome == 0 && 1.0 - p < kDegenerateTol)
    throw std::invalid_argument(
        "measurement_update: outcome 0 has vanishing probability");
  Vector vt = correlate(g, w);  // v = G w
  if (w.support.empty())
    vt.noalias() -= p * w.amplitudes;
  else
    for (int s : w.support) vt(s) -= p * w.amplitudes(s);
  if (outcome == 1)
    apply_rank_update(g, w, vt, 1.0 - p, -1.0, -1.0 / p);
  else
    apply_rank_update(g, w, vt, -p, -1.0, 1.0 / (1.0 - p));
  return outcome == 1 ? p : 1.0 - p;
}

MeasurementResult measure_occupation(Matrix& g, const ModeVector& w,
                                     RandomStream& rng) {
  const double p = clamp01(occupation_expectation(g, w));
  // One draw is consumed unconditionally so that independent engines tracking
  // the same stream stay aligned even across degenerate measurements.
  const double u = rng.uniform();
  int outcome;
  if (p < kDegenerateTol)
    outcome = 0;
  else if (1.0 - p < kDegenerateTol)
    outcome = 1;
  else
    outcome = (u < p) ? 1 : 0;
  MeasurementResult r;
  r.outcome = outcome;
  r.probability = measurement_update(g, w, outcome);
  return r;
}

double weak_measurement_update(Matrix& g, const ModeVector& w, double kappa,
                               int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("weak_measurement_update: sign must be ±1");
  if (!(kappa > 0.0))
    throw std::invalid_argument("weak_measurement_update: kappa must be > 0");
  const double lambda = sign * kappa;
  const double p = clamp01(occupation_expectation(g, w));
  const double eta = std::expm1(2.0 * lambda);  // e^{2λ} - 1
  const double dnm = 1.0 + eta * p;
  // Born weight: <K†K>/(2 cosh kappa) with K = e^{λ(n-1/2)}.
  const double prob = std::exp(-lambda) * dnm / (2.0 * std::cosh(kappa));
  Vector vt = correlate(g, w);
  if (w.support.empty())
    vt.noalias() -= p * w.amplitudes;
  else
    for (int s : w.support) vt(s) -= p * w.amplitudes(s);
  const double a = p * eta * (1.0 - p) / dnm;    // occupation shift
  const double b = std::exp(lambda) / dnm - 1.0; // coherence rescale - 1
  const double c = -eta / dnm;                   // complement correction
  apply_rank_update(g, w, vt, a, b, c);
  return prob;
}

MeasurementResult measure_occupation_weak(Matrix& g, const ModeVector& w,
                                          double kappa, RandomStream& rng) {
  const double p = clamp01(occupation_expectation(g, w));
  const double eta_plus = std::expm1(2.0 * kappa);
  const double prob_plus =
      std::exp(-kappa) * (1.0 + eta_plus * p) / (2.0 * std::cosh(kappa));
  const int sign = rng.uniform() < prob_plus ? 1 : -1;
  MeasurementResult r;
  r.outcome = sign;
  r.probability = weak_measurement_update(g, w, kappa, sign);
  return r;
}

void fswap(Matrix& g, const ModeVector& wa, const ModeVector& wb) {
  if (wa.amplitudes.size() != wb.amplitudes.size())
    throw std::invalid_argument("fswap: mode dimension mismatch");
  // z = w_a - w_b; transfer matrix t = 1 - conj(z) zᵀ gives the Hermitian
  // unitary congruence G -> (1 - z z†) G (1 - z z†).
  ModeVector z;
  z.amplitudes = wa.amplitudes - wb.amplitudes;
  if (!wa.support.empty() && !wb.support.empty()) {
    z.support = wa.support;
    for (int s : wb.support) z.support.push_back(s);
    std::sort(z.support.begin(), z.support.end());
    z.support.erase(std::unique(z.support.begin(), z.support.end()),
                    z.support.end());
  }
  Vector q = correlate(g, z);                 // q = G z
  Complex s_zz = 0.0;
  if (z.support.empty())
    s_zz = z.amplitudes.dot(q);               // z† q
  else
    for (int s : z.support) s_zz += std::conj(z.amplitudes(s)) * q(s);
  // G' = G - z q† - q z† + (z†Gz) z z†
  if (z.support.empty()) {
    g.noalias() -= z.amplitudes * q.adjoint();
    g.noalias() -= q * z.amplitudes.adjoint();
    g.noalias() += s_zz * (z.amplitudes * z.amplitudes.adjoint());
  } else {
    for (int s : z.support) {
      const Complex zs = z.amplitudes(s);
      g.row(s).noalias() -= zs * q.adjoint();
      g.col(s).noalias() -= std::conj(zs) * q;
    }
    for (int s : z.support)
      for (int t : z.support)
        g(s, t) += s_zz * z.amplitudes(s) * std::conj(z.amplitudes(t));
  }
}

double purity_deviation(const Matrix& g) {
  Matrix m = g * g - g;
  return m.cwiseAbs().maxCoeff();
}

double total_charge(const Matrix& g) { return std::real(g.trace()); }

void rehermitize(Matrix& g) { g = 0.5 * (g + g.adjoint()).eval(); }

int clamp_spectrum(Matrix& g, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("clamp_spectrum: eigensolver failed");
  Eigen::VectorXd ev = es.eigenvalues();
  int moved = 0;
  for (int i = 0; i < ev.size(); ++i) {
    const double clamped = clamp01(ev(i));
    if (std::abs(clamped - ev(i)) > tol) ++moved;
    ev(i) = clamped;
  }
  g = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return moved;
}

}  // namespace fsteer
