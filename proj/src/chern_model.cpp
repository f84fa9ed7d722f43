// SPDX-License-Identifier: MIT

#include "fsteer/chern_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsteer {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::Vector2cd tau_spinor(int nu) {
  const double s = 1.0 / std::sqrt(2.0);
  if (nu == 0) return Eigen::Vector2cd(s, s);    // A sublattice combination
  if (nu == 1) return Eigen::Vector2cd(s, -s);   // B sublattice combination
  throw std::invalid_argument("orbital index must be 0 (A) or 1 (B)");
}

void check_band(int band) {
  if (band != -1 && band != 1)
    throw std::invalid_argument("band must be -1 (lower) or +1 (upper)");
}

}  // namespace

Eigen::Vector3d bloch_vector(double kx, double ky, double alpha) {
  return {std::sin(kx), std::sin(ky), alpha - std::cos(kx) - std::cos(ky)};
}

Eigen::Matrix2cd band_projector(double kx, double ky, double alpha, int band) {
  check_band(band);
  const Eigen::Vector3d n = bloch_vector(kx, ky, alpha);
  const double norm = n.norm();
  if (norm < 1e-12)
    throw std::runtime_error(
        "band_projector: gap closes at this momentum (alpha in {0, ±2})");
  const Eigen::Vector3d u = n / norm;
  Eigen::Matrix2cd p;
  const double s = static_cast<double>(band);
  p(0, 0) = 0.5 * (1.0 + s * u.z());
  p(1, 1) = 0.5 * (1.0 - s * u.z());
  p(0, 1) = 0.5 * s * Complex(u.x(), -u.y());
  p(1, 0) = 0.5 * s * Complex(u.x(), u.y());
  return p;
}

Eigen::Vector2cd band_spinor(double kx, double ky, double alpha, int band) {
  const Eigen::Matrix2cd p = band_projector(kx, ky, alpha, band);
  // The columns of a rank-1 projector are multiples of the spinor; pick the
  // one with the larger norm (= larger diagonal entry) for a stable gauge.
  const int col = std::real(p(0, 0)) >= std::real(p(1, 1)) ? 0 : 1;
  return p.col(col) / std::sqrt(std::real(p(col, col)));
}

Matrix ground_state_correlation(int L, double alpha) {
  if (L < 2) throw std::invalid_argument("lattice size must be >= 2");
  // G((R,mu),(R',mu')) = (1/L²) sum_k e^{i k.(R'-R)} conj(P_-(k))_{mu mu'}
  // depends on R'-R only; precompute the translation kernel.
  std::vector<Eigen::Matrix2cd> kernel(L * L, Eigen::Matrix2cd::Zero());
  std::vector<Eigen::Matrix2cd> pk(L * L);
  for (int my = 0; my < L; ++my)
    for (int mx = 0; mx < L; ++mx)
      pk[my * L + mx] =
          band_projector(kTwoPi * mx / L, kTwoPi * my / L, alpha, -1)
              .conjugate();
  for (int dy = 0; dy < L; ++dy) {
    for (int dx = 0; dx < L; ++dx) {
      Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
      for (int my = 0; my < L; ++my) {
        for (int mx = 0; mx < L; ++mx) {
          const double phase = kTwoPi * (mx * dx + my * dy) / L;
          acc += Complex(std::cos(phase), std::sin(phase)) * pk[my * L + mx];
        }
      }
      kernel[dy * L + dx] = acc / static_cast<double>(L * L);
    }
  }
  const int dim = 2 * L * L;
  Matrix g(dim, dim);
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x)
      for (int yp = 0; yp < L; ++yp)
        for (int xp = 0; xp < L; ++xp) {
          const auto& blk =
              kernel[((yp - y + L) % L) * L + ((xp - x + L) % L)];
          for (int mu = 0; mu < 2; ++mu)
            for (int mup = 0; mup < 2; ++mup)
              g(mode_index(x, y, mu, L), mode_index(xp, yp, mup, L)) =
                  blk(mu, mup);
        }
  return g;
}

// ------------------------------------------------------------- mode building

namespace {

// Band projector entering the mode construction. At a gap-closing momentum
// (a single grid point when alpha sits exactly at a transition) the two bands
// are degenerate and the projector is replaced by its direction-averaged
// limit 1/2, weighting that point equally in both bands; every other momentum
// uses the exact projector. Keeps the construction defined across the
// transition without biasing the degenerate point toward either band.
Eigen::Matrix2cd projector_or_midpoint(double kx, double ky, double alpha,
                                       int band) {
  if (bloch_vector(kx, ky, alpha).norm() < 1e-12)
    return 0.5 * Eigen::Matrix2cd::Identity();
  return band_projector(kx, ky, alpha, band);
}

// Untruncated base mode centered at the origin:
// base(R, mu) = C sum_k e^{-i k.R} [tau_nu† P_band(k)]_mu, normalized.
Vector base_ow_mode(int L, double alpha, int nu, int band) {
  const Eigen::Vector2cd tau = tau_spinor(nu);
  std::vector<Eigen::Vector2cd> row(L * L);
  for (int my = 0; my < L; ++my)
    for (int mx = 0; mx < L; ++mx) {
      const Eigen::Matrix2cd p =
          projector_or_midpoint(kTwoPi * mx / L, kTwoPi * my / L, alpha, band);
      // [tau† P]_mu as a column vector = Pᵀ conj(tau); tau is real.
      row[my * L + mx] = p.transpose() * tau;
    }
  Vector base = Vector::Zero(2 * L * L);
  for (int ry = 0; ry < L; ++ry)
    for (int rx = 0; rx < L; ++rx) {
      Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
      for (int my = 0; my < L; ++my)
        for (int mx = 0; mx < L; ++mx) {
          const double phase = -kTwoPi * (mx * rx + my * ry) / L;
          acc += Complex(std::cos(phase), std::sin(phase)) * row[my * L + mx];
        }
      base(mode_index(rx, ry, 0, L)) = acc(0);
      base(mode_index(rx, ry, 1, L)) = acc(1);
    }
  base /= base.norm();
  return base;
}

ModeVector translate_mode(const Vector& base, int L, int cx, int cy) {
  ModeVector w;
  w.amplitudes = Vector::Zero(2 * L * L);
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      const int sx = (x - cx + L) % L;
      const int sy = (y - cy + L) % L;
      w.amplitudes(mode_index(x, y, 0, L)) = base(mode_index(sx, sy, 0, L));
      w.amplitudes(mode_index(x, y, 1, L)) = base(mode_index(sx, sy, 1, L));
    }
  return w;
}

OWModeSet build_modes_impl(int L, double alpha_left, double alpha_right,
                           int n_shell, bool wall) {
  OWModeSet set;
  set.L = L;
  set.alpha = alpha_left;
  if (wall) set.alpha_right = alpha_right;
  set.n_shell = (n_shell >= 0 && 2 * n_shell + 1 < L) ? n_shell : -1;
  set.modes.resize(static_cast<std::size_t>(4 * L * L));
  const int n_alphas = wall ? 2 : 1;
  for (int which = 0; which < n_alphas; ++which) {
    const double alpha = which == 0 ? alpha_left : alpha_right;
    for (int nu = 0; nu < 2; ++nu) {
      for (int bu = 0; bu < 2; ++bu) {
        const int band = bu == 0 ? -1 : +1;
        const Vector base = base_ow_mode(L, alpha, nu, band);
        for (int cy = 0; cy < L; ++cy)
          for (int cx = 0; cx < L; ++cx) {
            if (wall && ((cx < L / 2) != (which == 0))) continue;
            OWMode m;
            m.cx = cx;
            m.cy = cy;
            m.nu = nu;
            m.band = band;
            m.mode = translate_mode(base, L, cx, cy);
            if (set.n_shell >= 0)
              m.mode = truncate_mode(m.mode, L, cx, cy, set.n_shell);
            set.modes[set.mode_slot(cx, cy, nu, bu)] = std::move(m);
          }
      }
    }
  }
  return set;
}

}  // namespace

OWModeSet build_ow_modes(int L, double alpha, int n_shell) {
  return build_modes_impl(L, alpha, alpha, n_shell, false);
}

OWModeSet build_ow_modes_wall(int L, double alpha_left, double alpha_right,
                              int n_shell) {
  return build_modes_impl(L, alpha_left, alpha_right, n_shell, true);
}

ModeVector truncate_mode(const ModeVector& w, int L, int cx, int cy,
                         int n_shell) {
  if (n_shell < 0 || 2 * n_shell + 1 >= L) return w;  // window covers lattice
  ModeVector t;
  t.amplitudes = Vector::Zero(w.amplitudes.size());
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      if (std::abs(wrap_displacement(x - cx, L)) > n_shell) continue;
      if (std::abs(wrap_displacement(y - cy, L)) > n_shell) continue;
      for (int mu = 0; mu < 2; ++mu) {
        const int i = mode_index(x, y, mu, L);
        t.amplitudes(i) = w.amplitudes(i);
        t.support.push_back(i);
      }
    }
  std::sort(t.support.begin(), t.support.end());
  const double norm = t.amplitudes.norm();
  if (norm < 1e-14)
    throw std::runtime_error("truncate_mode: window carries no weight");
  t.amplitudes /= norm;
  return t;
}

// ------------------------------------------------------------- form factors

double form_factor_abs2_raw(double kx, double ky, double alpha, int nu,
                            int band) {
  const Eigen::Vector2cd tau = tau_spinor(nu);
  const Eigen::Matrix2cd p = band_projector(kx, ky, alpha, band);
  return std::real(Complex(tau.adjoint() * p * tau));
}

double form_factor_norm(int L, double alpha, int nu, int band) {
  double z = 0.0;
  for (int my = 0; my < L; ++my)
    for (int mx = 0; mx < L; ++mx)
      z += form_factor_abs2_raw(kTwoPi * mx / L, kTwoPi * my / L, alpha, nu,
                                band);
  return z / (L * L);
}

Complex form_factor(int L, double alpha, int nu, int band, int mx, int my) {
  const double kx = kTwoPi * mx / L;
  const double ky = kTwoPi * my / L;
  const Eigen::Vector2cd psi = band_spinor(kx, ky, alpha, band);
  const Eigen::Vector2cd tau = tau_spinor(nu);
  const Complex f = psi.dot(tau);  // <psi|tau>
  return f / std::sqrt(form_factor_norm(L, alpha, nu, band));
}

namespace {

// Newton descent on F(k) = |f|²_raw with finite-difference derivatives.
std::array<double, 2> refine_zero(double kx, double ky, double alpha, int nu,
                                  int band) {
  const double h = 1e-5;
  auto F = [&](double x, double y) {
    return form_factor_abs2_raw(x, y, alpha, nu, band);
  };
  for (int it = 0; it < 60; ++it) {
    const double f0 = F(kx, ky);
    if (f0 < 1e-26) break;
    const double gx = (F(kx + h, ky) - F(kx - h, ky)) / (2 * h);
    const double gy = (F(kx, ky + h) - F(kx, ky - h)) / (2 * h);
    const double hxx = (F(kx + h, ky) - 2 * f0 + F(kx - h, ky)) / (h * h);
    const double hyy = (F(kx, ky + h) - 2 * f0 + F(kx, ky - h)) / (h * h);
    const double hxy = (F(kx + h, ky + h) - F(kx + h, ky - h) -
                        F(kx - h, ky + h) + F(kx - h, ky - h)) /
                       (4 * h * h);
    const double det = hxx * hyy - hxy * hxy;
    double dx, dy;
    if (std::abs(det) > 1e-12 && hxx + hyy > 0) {
      dx = (hyy * gx - hxy * gy) / det;
      dy = (hxx * gy - hxy * gx) / det;
    } else {
      dx = 0.5 * gx;  // plain gradient step fallback
      dy = 0.5 * gy;
    }
    // Damped step: never move more than half a Brillouin-zone cell at once.
    const double cap = 0.5;
    const double len = std::hypot(dx, dy);
    if (len > cap) {
      dx *= cap / len;
      dy *= cap / len;
    }
    kx -= dx;
    ky -= dy;
  }
  return {kx, ky};
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

}  // namespace

std::vector<std::array<double, 2>> form_factor_zeros(int L, double alpha,
                                                     int nu, int band) {
  const double z = form_factor_norm(L, alpha, nu, band);
  std::vector<double> f(L * L);
  for (int my = 0; my < L; ++my)
    for (int mx = 0; mx < L; ++mx)
      f[my * L + mx] = form_factor_abs2_raw(kTwoPi * mx / L, kTwoPi * my / L,
                                            alpha, nu, band);
  std::vector<std::array<double, 2>> zeros;
  for (int my = 0; my < L; ++my) {
    for (int mx = 0; mx < L; ++mx) {
      const double f0 = f[my * L + mx];
      bool is_min = true;
      for (int dy = -1; dy <= 1 && is_min; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (f[((my + dy + L) % L) * L + ((mx + dx + L) % L)] < f0) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;
      auto [kx, ky] =
          refine_zero(kTwoPi * mx / L, kTwoPi * my / L, alpha, nu, band);
      const double fref = form_factor_abs2_raw(kx, ky, alpha, nu, band) / z;
      if (fref >= 1e-12) continue;  // |f| >= 1e-6: not a zero
      kx = wrap_angle(kx);
      ky = wrap_angle(ky);
      bool dup = false;
      for (const auto& q : zeros) {
        double ax = std::abs(wrap_angle(q[0] - kx + 0.5 * kTwoPi) -
                             0.5 * kTwoPi);
        double ay = std::abs(wrap_angle(q[1] - ky + 0.5 * kTwoPi) -
                             0.5 * kTwoPi);
        if (ax < 1e-3 && ay < 1e-3) {
          dup = true;
          break;
        }
      }
      if (!dup) zeros.push_back({kx, ky});
    }
  }
  return zeros;
}

int overcomplete_rank(int L, double alpha, const std::vector<int>& nus,
                      int band, double sv_threshold) {
  // Rows expressed directly in the band's k-space components:
  // row(r; k) = e^{i k.r} [tau† P(k)]-spinor, normalized. Band projection is
  // implicit in the construction.
  const int n_rows = static_cast<int>(nus.size()) * L * L;
  Matrix rows(n_rows, 2 * L * L);
  int row = 0;
  for (int nu : nus) {
    std::vector<Eigen::Vector2cd> comp(L * L);
    double norm2 = 0.0;
    for (int my = 0; my < L; ++my)
      for (int mx = 0; mx < L; ++mx) {
        const Eigen::Matrix2cd p =
            band_projector(kTwoPi * mx / L, kTwoPi * my / L, alpha, band);
        comp[my * L + mx] = p.transpose() * tau_spinor(nu);
        norm2 += comp[my * L + mx].squaredNorm();
      }
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (int ry = 0; ry < L; ++ry)
      for (int rx = 0; rx < L; ++rx, ++row)
        for (int my = 0; my < L; ++my)
          for (int mx = 0; mx < L; ++mx) {
            const double phase = kTwoPi * (mx * rx + my * ry) / L;
            const Complex ph(std::cos(phase), std::sin(phase));
            rows(row, 2 * (my * L + mx) + 0) =
                inv_norm * ph * comp[my * L + mx](0);
            rows(row, 2 * (my * L + mx) + 1) =
                inv_norm * ph * comp[my * L + mx](1);
          }
  }
  Eigen::BDCSVD<Matrix> svd(rows);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > sv_threshold) ++rank;
  return rank;
}

// ------------------------------------------------------------------- caching

nlohmann::json ow_modes_to_json(const OWModeSet& set) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["kind"] = "localized_mode_set";
  j["L"] = set.L;
  j["n_shell"] = set.n_shell;
  j["alpha"] = set.alpha;
  if (set.alpha_right) j["alpha_right"] = *set.alpha_right;
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : set.modes) {
    nlohmann::json jm;
    jm["center"] = {m.cx, m.cy};
    jm["orbital"] = m.nu == 0 ? "A" : "B";
    jm["band"] = m.band == -1 ? "-" : "+";
    nlohmann::json amps = nlohmann::json::array();
    auto add = [&](int i) {
      const Complex a = m.mode.amplitudes(i);
      const int site = i / 2;
      amps.push_back({site % set.L, site / set.L, i % 2, a.real(), a.imag()});
    };
    if (m.mode.support.empty()) {
      for (int i = 0; i < m.mode.dim(); ++i)
        if (std::abs(m.mode.amplitudes(i)) > 1e-15) add(i);
    } else {
      for (int i : m.mode.support) add(i);
    }
    jm["amplitudes"] = std::move(amps);
    modes.push_back(std::move(jm));
  }
  j["modes"] = std::move(modes);
  return j;
}

OWModeSet ow_modes_from_json(const nlohmann::json& j) {
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw std::invalid_argument("mode-set cache: unsupported schema_version");
  OWModeSet set;
  set.L = j.at("L").get<int>();
  set.n_shell = j.at("n_shell").get<int>();
  set.alpha = j.at("alpha").get<double>();
  if (j.contains("alpha_right"))
    set.alpha_right = j["alpha_right"].get<double>();
  set.modes.resize(static_cast<std::size_t>(4 * set.L * set.L));
  for (const auto& jm : j.at("modes")) {
    OWMode m;
    m.cx = jm.at("center")[0].get<int>();
    m.cy = jm.at("center")[1].get<int>();
    m.nu = jm.at("orbital").get<std::string>() == "A" ? 0 : 1;
    m.band = jm.at("band").get<std::string>() == "-" ? -1 : +1;
    m.mode.amplitudes = Vector::Zero(2 * set.L * set.L);
    const bool truncated = set.n_shell >= 0;
    for (const auto& a : jm.at("amplitudes")) {
      const int i = mode_index(a[0].get<int>(), a[1].get<int>(),
                               a[2].get<int>(), set.L);
      m.mode.amplitudes(i) = Complex(a[3].get<double>(), a[4].get<double>());
      if (truncated) m.mode.support.push_back(i);
    }
    std::sort(m.mode.support.begin(), m.mode.support.end());
    set.modes[set.mode_slot(m.cx, m.cy, m.nu, m.band == -1 ? 0 : 1)] =
        std::move(m);
  }
  return set;
}

}  // namespace fsteer
