// SPDX-License-Identifier: MIT

#include "fsteer/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace fsteer {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double binary_entropy(double lambda) {
  double s = 0.0;
  if (lambda > 1e-14 && lambda < 1.0) s -= lambda * std::log(lambda);
  const double mu = 1.0 - lambda;
  if (mu > 1e-14 && mu < 1.0) s -= mu * std::log(mu);
  return s;
}

Matrix submatrix(const Matrix& g, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  Matrix s(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) s(a, b) = g(rows[a], cols[b]);
  return s;
}

}  // namespace

double chern_real_space_at(const Matrix& g, int L, int cx, int cy) {
  const double radius2 = 0.16 * L * L;  // (0.4 L)²
  std::vector<int> wedge[3];
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const int dx = wrap_displacement(x - cx, L);
      const int dy = wrap_displacement(y - cy, L);
      if (dx * dx + dy * dy > radius2) continue;
      double phi = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
      if (phi < 0) phi += 2 * kPi;
      int sector = static_cast<int>(phi / (2 * kPi / 3));
      if (sector > 2) sector = 2;  // phi == 2*pi edge case
      for (int mu = 0; mu < 2; ++mu)
        wedge[sector].push_back(mode_index(x, y, mu, L));
    }
  }
  // tr(G P_A G P_B G P_C) via submatrix products; the reversed ordering is
  // its complex conjugate for Hermitian G, so c = -24 pi Im tr(...).
  const Matrix gab = submatrix(g, wedge[0], wedge[1]);
  const Matrix gbc = submatrix(g, wedge[1], wedge[2]);
  const Matrix gca = submatrix(g, wedge[2], wedge[0]);
  const Matrix m = gab * gbc;  // |A| x |C|
  Complex t = 0.0;
  for (int j = 0; j < m.rows(); ++j) t += (m.row(j) * gca.col(j))(0, 0);
  return -24.0 * kPi * std::imag(t);
}

double chern_real_space(const Matrix& g, int L, bool self_average) {
  if (!self_average) return chern_real_space_at(g, L, L / 2, L / 2);
  double acc = 0.0;
  for (int cy = 0; cy < L; ++cy)
    for (int cx = 0; cx < L; ++cx) acc += chern_real_space_at(g, L, cx, cy);
  return acc / (L * L);
}

std::vector<double> chern_marker(const Matrix& g, int L) {
  const int dim = 2 * L * L;
  if (g.rows() != dim)
    throw std::invalid_argument("chern_marker: matrix/lattice size mismatch");
  Eigen::VectorXd xs(dim), ys(dim);
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x)
      for (int mu = 0; mu < 2; ++mu) {
        xs(mode_index(x, y, mu, L)) = x;
        ys(mode_index(x, y, mu, L)) = y;
      }
  // diag(G X G Y G) and diag(G Y G X G) from two matmuls:
  // P = G X G, Q = Y G   ->  diag1 = rowwise (P ∘ Qᵀ) sums, and symmetrically.
  Matrix gx = g * xs.asDiagonal();
  Matrix p = gx * g;                       // G X G
  Matrix q = ys.asDiagonal() * g;          // Y G
  Matrix gy = g * ys.asDiagonal();
  Matrix p2 = gy * g;                      // G Y G
  Matrix q2 = xs.asDiagonal() * g;         // X G
  std::vector<double> marker(L * L, 0.0);
  for (int i = 0; i < dim; ++i) {
    const Complex d1 = (p.row(i) * q.col(i))(0, 0);  // sum_j P_ij Q_ji
    const Complex d2 = (p2.row(i) * q2.col(i))(0, 0);
    const Complex m = Complex(0, 2 * kPi) * (d1 - d2);
    marker[i / 2] += std::real(m);
  }
  return marker;
}

double entanglement_entropy(const Matrix& g, const std::vector<int>& modes) {
  Matrix gr = submatrix(g, modes, modes);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gr, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("entanglement_entropy: eigensolver failed");
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = std::min(1.0, std::max(0.0, es.eigenvalues()(i)));
    s += binary_entropy(lam);
  }
  return s;
}

std::vector<int> strip_modes(int L, int x_begin, int width) {
  std::vector<int> modes;
  for (int y = 0; y < L; ++y)
    for (int dx = 0; dx < width; ++dx)
      for (int mu = 0; mu < 2; ++mu)
        modes.push_back(mode_index((x_begin + dx) % L, y, mu, L));
  return modes;
}

MutualInformationResult mutual_information(const Matrix& g, int L) {
  if (L % 4 != 0)
    throw std::invalid_argument("mutual_information: L must be divisible by 4");
  const int w = L / 4;
  std::vector<int> a = strip_modes(L, 0, w);
  std::vector<int> b = strip_modes(L, L / 2, w);
  std::vector<int> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  MutualInformationResult r;
  r.s_a = entanglement_entropy(g, a);
  r.s_b = entanglement_entropy(g, b);
  r.s_ab = entanglement_entropy(g, ab);
  r.mi = r.s_a + r.s_b - r.s_ab;
  return r;
}

std::vector<double> entanglement_contour(const Matrix& g,
                                         const std::vector<int>& modes) {
  Matrix gr = submatrix(g, modes, modes);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gr);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("entanglement_contour: eigensolver failed");
  const int n = static_cast<int>(modes.size());
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) {
    const double lam = std::min(1.0, std::max(0.0, es.eigenvalues()(i)));
    h(i) = binary_entropy(lam);
  }
  const Matrix& u = es.eigenvectors();
  std::vector<double> contour(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += std::norm(u(i, a)) * h(a);
    contour[i] = acc;
  }
  return contour;
}

std::vector<double> correlation_decay(const Matrix& g, int L) {
  std::vector<double> c(L / 2 + 1, 0.0);
  for (int r = 0; r <= L / 2; ++r) {
    double acc = 0.0;
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        for (int mu = 0; mu < 2; ++mu)
          for (int mup = 0; mup < 2; ++mup) {
            acc += std::norm(g(mode_index(x, y, mu, L),
                               mode_index((x + r) % L, y, mup, L)));
            acc += std::norm(g(mode_index(x, y, mu, L),
                               mode_index(x, (y + r) % L, mup, L)));
          }
    c[r] = acc / (2.0 * L * L);
  }
  return c;
}

double chord_distance(int r, int L) {
  return (L / kPi) * std::sin(kPi * r / L);
}

SpectralGapResult spectral_gap(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_gap: eigensolver failed");
  SpectralGapResult r;
  double above = 2.0, below = -1.0, closest = 2.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    closest = std::min(closest, std::abs(lam - 0.5));
    if (lam > 0.5)
      above = std::min(above, lam);
    else
      below = std::max(below, lam);
  }
  if (above > 1.5 || below < -0.5)
    throw std::runtime_error(
        "spectral_gap: spectrum lies entirely on one side of 1/2");
  r.gap = above - below;
  r.closest_to_half = closest;
  return r;
}

Matrix regularize(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("regularize: eigensolver failed");
  Eigen::VectorXd flat(es.eigenvalues().size());
  for (int i = 0; i < flat.size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (std::abs(lam - 0.5) <= 1e-9)
      throw std::runtime_error(
          "regularize: eigenvalue too close to 1/2 (vanishing spectral gap)");
    flat(i) = lam > 0.5 ? 1.0 : 0.0;
  }
  return es.eigenvectors() * flat.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace fsteer
