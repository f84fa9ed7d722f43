// SPDX-License-Identifier: MIT

#include "fsteer/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fsteer {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDegenerateTol = 1e-12;

// Transfer matrix of exp(i θ (c†_i c_j + h.c.)): e^{-i θ σˣ}.
Matrix hop_gate(double theta) {
  Matrix t(2, 2);
  const double c = std::cos(theta), s = std::sin(theta);
  t(0, 0) = c;
  t(1, 1) = c;
  t(0, 1) = Complex(0, -s);
  t(1, 0) = Complex(0, -s);
  return t;
}

}  // namespace

SteeringEngine::SteeringEngine(const OWModeSet& modes,
                               const ProtocolParams& params, std::uint64_t seed,
                               Backend backend)
    : modes_(modes), params_(params), backend_(backend), rng_(seed) {
  if (modes_.L != params_.L)
    throw std::invalid_argument("SteeringEngine: mode set / params L mismatch");
  if (params_.noise_sigma < 0.0 || params_.noise_sigma > 1.0)
    throw std::invalid_argument("SteeringEngine: noise sigma must be in [0,1]");
  dim_half_ = 2 * params_.L * params_.L;
  if (params_.charge < 0) params_.charge = dim_half_;  // half filling
  if (params_.charge > 2 * dim_half_)
    throw std::invalid_argument("SteeringEngine: charge exceeds mode count");
  init_random_charge();
}

void SteeringEngine::init_random_charge() {
  const int total = 2 * dim_half_;
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  // Partial Fisher-Yates: the first Q entries are a uniform Q-subset.
  for (int i = 0; i < params_.charge; ++i) {
    const int j =
        i + static_cast<int>(rng_.uniform_below(
                static_cast<std::uint64_t>(total - i)));
    std::swap(order[i], order[j]);
  }
  std::vector<int> occ(total, 0);
  for (int i = 0; i < params_.charge; ++i) occ[order[i]] = 1;
  if (backend_ == Backend::kBlock) {
    std::vector<int> occ_p(occ.begin(), occ.begin() + dim_half_);
    std::vector<int> occ_a(occ.begin() + dim_half_, occ.end());
    gp_ = product_state(dim_half_, occ_p);
    ga_ = product_state(dim_half_, occ_a);
  } else {
    gfull_ = product_state(total, occ);
  }
  cycle_ = 0;
  initial_charge_ = total_charge_both_layers();
  max_charge_drift_ = 0;
  max_purity_dev_ = 0;
  fswap_count_ = 0;
  clamp_events_ = 0;
}

void SteeringEngine::init_state(const Matrix& g_physical,
                                const std::vector<int>& ancilla_occupations) {
  if (g_physical.rows() != dim_half_ || g_physical.cols() != dim_half_)
    throw std::invalid_argument(
        "SteeringEngine: physical state must be 2L^2 x 2L^2");
  if (static_cast<int>(ancilla_occupations.size()) != dim_half_)
    throw std::invalid_argument(
        "SteeringEngine: need one reservoir occupation per ancillary mode");
  if (backend_ == Backend::kBlock) {
    gp_ = g_physical;
    ga_ = product_state(dim_half_, ancilla_occupations);
  } else {
    gfull_ = Matrix::Zero(2 * dim_half_, 2 * dim_half_);
    gfull_.topLeftCorner(dim_half_, dim_half_) = g_physical;
    gfull_.bottomRightCorner(dim_half_, dim_half_) =
        product_state(dim_half_, ancilla_occupations);
  }
  cycle_ = 0;
  initial_charge_ = total_charge_both_layers();
  max_charge_drift_ = 0;
  max_purity_dev_ = 0;
  fswap_count_ = 0;
  clamp_events_ = 0;
}

const Matrix& SteeringEngine::physical() const {
  if (backend_ == Backend::kBlock) return gp_;
  // The full backend exposes its physical block through full_correlation();
  // returning a reference requires block storage.
  throw std::logic_error(
      "SteeringEngine::physical: use full_correlation() on the full backend");
}

Matrix SteeringEngine::full_correlation() const {
  if (backend_ == Backend::kFull) return gfull_;
  Matrix g = Matrix::Zero(2 * dim_half_, 2 * dim_half_);
  g.topLeftCorner(dim_half_, dim_half_) = gp_;
  g.bottomRightCorner(dim_half_, dim_half_) = ga_;
  return g;
}

double SteeringEngine::total_charge_both_layers() const {
  if (backend_ == Backend::kBlock)
    return total_charge(gp_) + total_charge(ga_);
  return total_charge(gfull_);
}

void SteeringEngine::measure_and_feedforward_one(int x, int y, int nu) {
  const int d_local = anc_local(x, y, nu);
  for (int pass = 0; pass < 2; ++pass) {
    // pass 0: lower band, undesired outcome 0 triggers the swap;
    // pass 1: upper band, undesired outcome 1 triggers the swap.
    const ModeVector& w =
        pass == 0 ? modes_.lower(x, y, nu) : modes_.upper(x, y, nu);
    const int bad_outcome = pass == 0 ? 0 : 1;
    if (backend_ == Backend::kBlock) {
      const MeasurementResult r = measure_occupation(gp_, w, rng_);
      if (r.outcome == bad_outcome) {
        const double n_d = std::real(ga_(d_local, d_local));
        const double delta = n_d - static_cast<double>(r.outcome);
        if (w.support.empty()) {
          gp_.noalias() += delta * (w.amplitudes * w.amplitudes.adjoint());
        } else {
          for (int s : w.support)
            for (int t : w.support)
              gp_(s, t) +=
                  delta * w.amplitudes(s) * std::conj(w.amplitudes(t));
        }
        ga_.row(d_local).setZero();
        ga_.col(d_local).setZero();
        ga_(d_local, d_local) = static_cast<double>(r.outcome);
        ++fswap_count_;
      }
    } else {
      // Embed the physical-layer mode into the bilayer index space.
      ModeVector we;
      we.amplitudes = Vector::Zero(2 * dim_half_);
      we.amplitudes.head(dim_half_) = w.amplitudes;
      we.support = w.support;  // physical indices coincide in the bilayer
      const MeasurementResult r = measure_occupation(gfull_, we, rng_);
      if (r.outcome == bad_outcome) {
        ModeVector d;
        d.amplitudes = Vector::Zero(2 * dim_half_);
        d.amplitudes(dim_half_ + d_local) = 1.0;
        d.support = {dim_half_ + d_local};
        fswap(gfull_, we, d);
        ++fswap_count_;
      }
    }
  }
}

void SteeringEngine::step_measure_feedforward() {
  const int L = params_.L;
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x)
      for (int nu = 0; nu < 2; ++nu) measure_and_feedforward_one(x, y, nu);
}

void SteeringEngine::ancilla_redistribute() {
  const int L = params_.L;
  const int offset = backend_ == Backend::kFull ? dim_half_ : 0;
  Matrix& g = backend_ == Backend::kFull ? gfull_ : ga_;
  // +x bonds, then +y bonds: one angle per bond, applied to both orbitals.
  for (int dir = 0; dir < 2; ++dir) {
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        const double theta = rng_.uniform(0.0, kTwoPi);
        const Matrix t = hop_gate(theta);
        const int xn = dir == 0 ? (x + 1) % L : x;
        const int yn = dir == 0 ? y : (y + 1) % L;
        for (int nu = 0; nu < 2; ++nu) {
          apply_local_unitary(
              g, {offset + anc_local(x, y, nu), offset + anc_local(xn, yn, nu)},
              t);
        }
      }
  }
  // On-site orbital mixers.
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      const double theta = rng_.uniform(0.0, kTwoPi);
      apply_local_unitary(
          g, {offset + anc_local(x, y, 0), offset + anc_local(x, y, 1)},
          hop_gate(theta));
    }
  terminal_ancilla_measurements();
}

void SteeringEngine::terminal_ancilla_measurements() {
  const int L = params_.L;
  if (backend_ == Backend::kFull) {
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        for (int nu = 0; nu < 2; ++nu) {
          ModeVector d;
          d.amplitudes = Vector::Zero(2 * dim_half_);
          d.amplitudes(dim_half_ + anc_local(x, y, nu)) = 1.0;
          d.support = {dim_half_ + anc_local(x, y, nu)};
          measure_occupation(gfull_, d, rng_);
        }
    return;
  }
  // Block backend: elementary-mode collapses with a shrinking active set.
  // Measured modes end up with exactly zero row/column, so later collapses
  // never touch them again; restricting updates to the still-active modes is
  // exact and turns the pass into O(dim³/3) instead of O(dim³).
  std::vector<int> active(dim_half_);
  std::iota(active.begin(), active.end(), 0);
  Vector vt(dim_half_);
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x)
      for (int nu = 0; nu < 2; ++nu) {
        const int m = anc_local(x, y, nu);
        const double p =
            std::min(1.0, std::max(0.0, std::real(ga_(m, m))));
        const double u = rng_.uniform();  // always exactly one draw
        int outcome;
        if (p < kDegenerateTol)
          outcome = 0;
        else if (1.0 - p < kDegenerateTol)
          outcome = 1;
        else
          outcome = (u < p) ? 1 : 0;
        // Collapse: complement picks up c vt vt† with vt_i = G(i, m), i ≠ m.
        // The chosen branch always has probability >= the degeneracy floor.
        const double c = outcome == 1 ? -1.0 / std::max(p, kDegenerateTol)
                                      : 1.0 / std::max(1.0 - p, kDegenerateTol);
        for (int i : active) vt(i) = i == m ? Complex(0.0) : ga_(i, m);
        for (int i : active) {
          if (vt(i) == 0.0) continue;
          const Complex ci = c * vt(i);
          for (int j : active) ga_(i, j) += ci * std::conj(vt(j));
        }
        ga_.row(m).setZero();
        ga_.col(m).setZero();
        ga_(m, m) = static_cast<double>(outcome);
        active.erase(std::find(active.begin(), active.end(), m));
      }
}

void SteeringEngine::apply_noise() {
  const double sigma = params_.noise_sigma;
  if (sigma <= 0.0) return;
  const int L = params_.L;
  Eigen::VectorXcd phase(dim_half_);
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x)
      for (int mu = 0; mu < 2; ++mu) {
        const double theta = rng_.uniform(0.0, sigma);
        const double phi = 2.0 * kTwoPi * theta;  // 4π θ
        phase(mode_index(x, y, mu, L)) = Complex(std::cos(phi), -std::sin(phi));
      }
  Matrix& g = backend_ == Backend::kFull ? gfull_ : gp_;
  const int off = 0;  // physical modes only
  for (int i = 0; i < dim_half_; ++i)
    for (int j = 0; j < dim_half_; ++j)
      g(off + i, off + j) *= phase(i) * std::conj(phase(j));
}

void SteeringEngine::end_of_cycle_hygiene() {
  if (backend_ == Backend::kBlock)
    rehermitize(gp_);
  else
    rehermitize(gfull_);
  // Spectral purity proxy on the physical layer.
  Matrix phys = backend_ == Backend::kBlock
                    ? gp_
                    : gfull_.topLeftCorner(dim_half_, dim_half_).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(phys, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("steering: eigensolver failed in hygiene pass");
  double dev = 0.0, lo = 0.0, hi = 1.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    dev = std::max(dev, std::abs(lam * (1.0 - lam)));
    lo = std::min(lo, lam);
    hi = std::max(hi, lam);
  }
  max_purity_dev_ = std::max(max_purity_dev_, dev);
  if (lo < -1e-10 || hi > 1.0 + 1e-10) {
    if (backend_ == Backend::kBlock)
      clamp_events_ += clamp_spectrum(gp_) > 0 ? 1 : 0;
    else
      clamp_events_ += clamp_spectrum(gfull_) > 0 ? 1 : 0;
  }
  max_charge_drift_ = std::max(
      max_charge_drift_, std::abs(total_charge_both_layers() - initial_charge_));
}

void SteeringEngine::run_cycle() {
  step_measure_feedforward();
  ancilla_redistribute();
  apply_noise();
  end_of_cycle_hygiene();
  ++cycle_;
}

}  // namespace fsteer
