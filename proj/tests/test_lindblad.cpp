// SPDX-License-Identifier: MIT
//
// Ensemble-averaged (dissipative) dynamics: steady state, exact coherence
// decay, the analytic band-average bounds, and the convergence-time scale
// with its exact rate identity.

#include <cmath>
#include <complex>
#include <stdexcept>

#include <doctest.h>

#include "fsteer/lindblad.hpp"
#include "fsteer/runner.hpp"

using namespace fsteer;

TEST_SUITE_BEGIN("lindblad");

TEST_CASE("the filled lower band is the stationary state") {
  LindbladParams p;
  p.L = 8;
  p.alpha = 1.0;
  const LindbladIntegrator li(p);
  const BandState steady = li.uniform_state(0.0, 1.0, Complex(0, 0));
  BandState ds = steady;
  li.rhs(steady, ds);
  CHECK(ds.g_plus.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(ds.g_minus.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(ds.coh.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("normalized rates obey the exact sum rule") {
  // The two trial orbitals are an orthonormal basis, so summing the
  // band-projected weights over orbitals resolves the full trace at every
  // momentum: gamma_n(k) = 2 identically once grid-normalized, for any
  // gapped coupling and any grid.
  for (double alpha : {1.0, 1.9, 3.0, 10.0}) {
    for (int L : {8, 10}) {
      LindbladParams p;
      p.L = L;
      p.alpha = alpha;
      const LindbladIntegrator li(p);
      for (int i = 0; i < li.grid_points(); ++i) {
        CHECK(li.gamma_plus(i) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(li.gamma_minus(i) == doctest::Approx(2.0).epsilon(1e-12));
      }
      CHECK(convergence_time(L, alpha) ==
            doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("coherences decay at the exact per-momentum rate") {
  LindbladParams p;
  p.L = 8;
  p.alpha = 1.3;
  const LindbladIntegrator li(p);
  const BandState s0 = li.uniform_state(0.3, 0.6, Complex(0.15, 0.1));
  const double t = 0.7, dt = 1e-3;
  const BandState s1 = li.evolve(s0, t, dt);
  for (int i = 0; i < li.grid_points(); ++i) {
    const double rate = li.gamma_plus(i) + li.gamma_minus(i);
    const Complex want = s0.coh(i) * std::exp(-rate * t);
    CHECK(std::abs(s1.coh(i) - want) < 1e-8);  // measured: 7e-14 (RK4)
  }
}

TEST_CASE("random initial states converge under the analytic bounds") {
  LindbladSection sec;
  sec.L = 8;
  sec.alpha = 1.0;
  sec.n_bar_a = 0.5;
  sec.convergence_sizes = {8, 12};
  const LindbladRunOutput out = run_lindblad(sec, 42);
  // Band averages end under the decade target implied by the default span.
  CHECK(out.final_gbar_plus < 1e-3);
  CHECK(out.final_dev_minus < 1e-3);
  CHECK(out.final_max_coh < 1e-6);
  // The exponential bounds hold pointwise with margin (slack is signed:
  // negative means satisfied).
  CHECK(out.bound_slack_plus < 1e-9);
  CHECK(out.bound_slack_minus < 1e-9);
  // Size independence of the timescale.
  REQUIRE(out.t_conv_by_size.size() == 2);
  CHECK(out.t_conv_by_size[0].second ==
        doctest::Approx(out.t_conv_by_size[1].second).epsilon(1e-9));
}

TEST_CASE("band averages are monotone toward the target") {
  LindbladParams p;
  p.L = 8;
  p.alpha = 1.5;
  const LindbladIntegrator li(p);
  RandomStream rng(7);
  LindbladParams run = p;
  run.t_max = 3.0;
  run.record_every = 50;
  const LindbladTrace trace = li.integrate(li.random_state(rng), run);
  REQUIRE(trace.samples.size() > 3);
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    CHECK(trace.samples[i].gbar_plus <= trace.samples[i - 1].gbar_plus + 1e-12);
    CHECK(trace.samples[i].gbar_minus >=
          trace.samples[i - 1].gbar_minus - 1e-12);
  }
  CHECK(trace.delta_plus == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(trace.delta_minus == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gapless couplings are rejected") {
  LindbladParams p;
  p.L = 8;
  p.alpha = 2.0;  // gap closes at k = 0
  CHECK_THROWS_AS(LindbladIntegrator{p}, std::runtime_error);
}

TEST_CASE("degenerate reservoir fillings require an explicit time span") {
  // At filling 0 or 1 one of the two bound rates vanishes, so the automatic
  // ten-e-folds span is undefined.
  LindbladParams p;
  p.L = 8;
  p.alpha = 1.0;
  p.n_bar_a = 0.0;
  const LindbladIntegrator li(p);
  RandomStream rng(3);
  CHECK_THROWS_AS(li.integrate(li.random_state(rng), p),
                  std::invalid_argument);
  LindbladParams explicit_span = p;
  explicit_span.t_max = 1.0;
  CHECK_NOTHROW(li.integrate(li.random_state(rng), explicit_span));
}

TEST_SUITE_END();
