// SPDX-License-Identifier: MIT
//
// Mean-field (dual-Lindbladian) dynamics of the steered ensemble in momentum
// space. In the translation-invariant setting the ensemble-averaged
// correlations close on three fields per momentum k:
//
//   g₊(k) upper-band occupation, g₋(k) lower-band occupation,
//   α(k) inter-band coherence,
//
// evolving under (grid-normalized form factors, reservoir filling n̄_a):
//
//   dg₊/dt = -2 γ₊(k) g₊(k) + (1+n̄_a) Σ_ν |f_{ν,+}(k)|² ⟨|f_{ν,+}|² g₊⟩
//   dg₋/dt = γ₋(k) (n̄_a - 2 g₋(k)) + (2-n̄_a) Σ_ν |f_{ν,-}(k)|² ⟨|f_{ν,-}|² g₋⟩
//   dα/dt  = -(γ₊(k) + γ₋(k)) α(k)
//
// with γ_n(k) = Σ_ν |f_{ν,n}(k)|² and ⟨·⟩ = (1/L²) Σ_k. The unique steady
// state is the filled lower band: g₋ ≡ 1, g₊ ≡ 0, α ≡ 0. The band averages
// obey exponential convergence bounds with rates (1-n̄_a) δ₊ and n̄_a δ₋,
// δ_n = min_k γ_n(k).

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fsteer/gaussian_core.hpp"

namespace fsteer {

struct LindbladParams {
  int L = 24;          // momentum grid L x L
  double alpha = 1.0;  // model parameter
  double n_bar_a = 0.5;// reservoir filling in (0, 1)
  double t_max = -1.0; // <=0: run for 10 / min(rate)
  double dt = -1.0;    // <=0: 0.01 / max_k max_n γ_n(k)
  int record_every = 10;
};

struct BandState {
  Eigen::VectorXd g_plus;   // L² upper-band occupations
  Eigen::VectorXd g_minus;  // L² lower-band occupations
  Eigen::VectorXcd coh;     // L² inter-band coherences
};

struct LindbladSample {
  double t = 0;
  double gbar_plus = 0;       // band-averaged upper occupation
  double gbar_minus = 0;      // band-averaged lower occupation
  double max_coh = 0;         // max_k |α(k)|
};

struct LindbladTrace {
  std::vector<LindbladSample> samples;
  double dt = 0;
  double delta_plus = 0;   // min_k γ₊(k)
  double delta_minus = 0;  // min_k γ₋(k)
};

class LindbladIntegrator {
 public:
  LindbladIntegrator(const LindbladParams& params);

  int grid_points() const { return n_; }
  double gamma_plus(int idx) const { return gamma_plus_(idx); }
  double gamma_minus(int idx) const { return gamma_minus_(idx); }
  double delta_plus() const { return gamma_plus_.minCoeff(); }
  double delta_minus() const { return gamma_minus_.minCoeff(); }

  BandState uniform_state(double g_plus, double g_minus,
                          Complex coherence) const;
  BandState random_state(RandomStream& rng) const;  // occupations in [0,1]

  void rhs(const BandState& s, BandState& ds) const;

  // Fixed-step RK4 integration; records every `record_every` steps.
  LindbladTrace integrate(BandState state, LindbladParams params) const;

  // Evolves and returns the final state (same stepping as integrate).
  BandState evolve(BandState state, double t_total, double dt) const;

 private:
  int L_;
  int n_;
  double n_bar_a_;
  Eigen::VectorXd f2_[2][2];  // |f|² [nu][band 0=lower,1=upper], grid-normed
  Eigen::VectorXd gamma_plus_, gamma_minus_;
};

// Protocol convergence-time scale: 1/T = min over bands n and momenta k of
// γ_n(k) computed with grid-normalized form factors.
double convergence_time(int L, double alpha);

}  // namespace fsteer
