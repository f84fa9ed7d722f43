#include "fsteer/lindblad.hpp"

#include <cmath>
#include <stdexcept>

#include "fsteer/chern_model.hpp"
#include "fsteer/lattice.hpp"

namespace fsteer {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

LindbladIntegrator::LindbladIntegrator(const LindbladParams& params)
    : L_(params.L), n_(params.L * params.L), n_bar_a_(params.n_bar_a) {
  if (L_ < 2) throw std::invalid_argument("lindblad: L must be >= 2");
  if (n_bar_a_ < 0.0 || n_bar_a_ > 1.0) {
    throw std::invalid_argument("lindblad: n_bar_a must lie in [0, 1]");
  }
  for (int nu = 0; nu < 2; ++nu) {
    for (int band = 0; band < 2; ++band) {
      f2_[nu][band].resize(n_);
    }
  }
  // Raw |τ_ν† P_n(k) τ_ν| on the grid, then normalize each (ν, n) family so
  // its grid average equals one.
  for (int nu = 0; nu < 2; ++nu) {
    for (int band = 0; band < 2; ++band) {
      const int band_sign = (band == 0) ? -1 : +1;
      double total = 0.0;
      for (int m = 0; m < L_; ++m) {
        for (int nn = 0; nn < L_; ++nn) {
          const double kx = 2.0 * kPi * m / L_;
          const double ky = 2.0 * kPi * nn / L_;
          const double raw =
              form_factor_abs2_raw(kx, ky, params.alpha, nu, band_sign);
          f2_[nu][band](m * L_ + nn) = raw;
          total += raw;
        }
      }
      const double z = total / n_;
      if (z <= 0.0) {
        throw std::runtime_error("lindblad: degenerate form-factor family");
      }
      f2_[nu][band] /= z;
    }
  }
  gamma_plus_ = f2_[0][1] + f2_[1][1];
  gamma_minus_ = f2_[0][0] + f2_[1][0];
}

BandState LindbladIntegrator::uniform_state(double g_plus, double g_minus,
                                            Complex coherence) const {
  BandState s;
  s.g_plus = Eigen::VectorXd::Constant(n_, g_plus);
  s.g_minus = Eigen::VectorXd::Constant(n_, g_minus);
  s.coh = Eigen::VectorXcd::Constant(n_, coherence);
  return s;
}

BandState LindbladIntegrator::random_state(RandomStream& rng) const {
  BandState s;
  s.g_plus.resize(n_);
  s.g_minus.resize(n_);
  s.coh.resize(n_);
  for (int i = 0; i < n_; ++i) {
    s.g_plus(i) = rng.uniform();
    s.g_minus(i) = rng.uniform();
    // |α|² ≤ g₋(1-g₊) type constraints are not needed for the bound checks;
    // keep coherences modest so the state is physically sensible.
    const double mag = 0.25 * rng.uniform();
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    s.coh(i) = Complex(mag * std::cos(phase), mag * std::sin(phase));
  }
  return s;
}

void LindbladIntegrator::rhs(const BandState& s, BandState& ds) const {
  // Per-family overlap integrals ⟨|f|² g⟩ over the grid.
  double int_plus[2];
  double int_minus[2];
  for (int nu = 0; nu < 2; ++nu) {
    int_plus[nu] = f2_[nu][1].dot(s.g_plus) / n_;
    int_minus[nu] = f2_[nu][0].dot(s.g_minus) / n_;
  }
  ds.g_plus = -2.0 * gamma_plus_.cwiseProduct(s.g_plus);
  ds.g_minus = gamma_minus_.cwiseProduct(
      Eigen::VectorXd::Constant(n_, n_bar_a_) - 2.0 * s.g_minus);
  for (int nu = 0; nu < 2; ++nu) {
    ds.g_plus += (1.0 + n_bar_a_) * int_plus[nu] * f2_[nu][1];
    ds.g_minus += (2.0 - n_bar_a_) * int_minus[nu] * f2_[nu][0];
  }
  ds.coh = -(gamma_plus_ + gamma_minus_)
                .cast<Complex>()
                .cwiseProduct(s.coh);
}

namespace {

void axpy(BandState& y, double a, const BandState& x) {
  y.g_plus += a * x.g_plus;
  y.g_minus += a * x.g_minus;
  y.coh += a * x.coh;
}

}  // namespace

BandState LindbladIntegrator::evolve(BandState state, double t_total,
                                     double dt) const {
  if (dt <= 0.0) throw std::invalid_argument("lindblad: dt must be positive");
  const int steps = static_cast<int>(std::ceil(t_total / dt));
  BandState k1, k2, k3, k4, tmp;
  for (int step = 0; step < steps; ++step) {
    rhs(state, k1);
    tmp = state;
    axpy(tmp, 0.5 * dt, k1);
    rhs(tmp, k2);
    tmp = state;
    axpy(tmp, 0.5 * dt, k2);
    rhs(tmp, k3);
    tmp = state;
    axpy(tmp, dt, k3);
    rhs(tmp, k4);
    axpy(state, dt / 6.0, k1);
    axpy(state, dt / 3.0, k2);
    axpy(state, dt / 3.0, k3);
    axpy(state, dt / 6.0, k4);
  }
  return state;
}

LindbladTrace LindbladIntegrator::integrate(BandState state,
                                            LindbladParams params) const {
  const double gamma_max =
      std::max(gamma_plus_.maxCoeff(), gamma_minus_.maxCoeff());
  double dt = params.dt;
  if (dt <= 0.0) dt = 0.01 / gamma_max;
  double t_max = params.t_max;
  if (t_max <= 0.0) {
    const double rate = std::min((1.0 - n_bar_a_) * delta_plus(),
                                 n_bar_a_ * delta_minus());
    if (rate <= 0.0)
      throw std::invalid_argument(
          "lindblad: t_max must be set explicitly when n_bar_a is 0 or 1 "
          "(one bound rate vanishes)");
    t_max = 10.0 / rate;
  }
  const int record_every = std::max(params.record_every, 1);

  LindbladTrace trace;
  trace.dt = dt;
  trace.delta_plus = delta_plus();
  trace.delta_minus = delta_minus();

  const int steps = static_cast<int>(std::ceil(t_max / dt));
  BandState k1, k2, k3, k4, tmp;
  auto record = [&](double t) {
    LindbladSample s;
    s.t = t;
    s.gbar_plus = state.g_plus.mean();
    s.gbar_minus = state.g_minus.mean();
    s.max_coh = state.coh.cwiseAbs().maxCoeff();
    trace.samples.push_back(s);
  };
  record(0.0);
  for (int step = 0; step < steps; ++step) {
    rhs(state, k1);
    tmp = state;
    axpy(tmp, 0.5 * dt, k1);
    rhs(tmp, k2);
    tmp = state;
    axpy(tmp, 0.5 * dt, k2);
    rhs(tmp, k3);
    tmp = state;
    axpy(tmp, dt, k3);
    rhs(tmp, k4);
    axpy(state, dt / 6.0, k1);
    axpy(state, dt / 3.0, k2);
    axpy(state, dt / 3.0, k3);
    axpy(state, dt / 6.0, k4);
    if ((step + 1) % record_every == 0 || step + 1 == steps) {
      record((step + 1) * dt);
    }
  }
  return trace;
}

double convergence_time(int L, double alpha) {
  LindbladParams p;
  p.L = L;
  p.alpha = alpha;
  LindbladIntegrator integrator(p);
  const double rate =
      std::min(integrator.delta_plus(), integrator.delta_minus());
  if (rate <= 0.0) {
    throw std::runtime_error(
        "convergence_time: vanishing relaxation rate (gapless form factors)");
  }
  return 1.0 / rate;
}

}  // namespace fsteer
