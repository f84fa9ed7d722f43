#include "fsteer/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "fsteer/chern_model.hpp"
#include "fsteer/fock_oracle.hpp"
#include "fsteer/observables.hpp"
#include "fsteer/protocol.hpp"

namespace fsteer {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FERMION_STEER_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

std::vector<int> recorded_cycles(int cycles, int stride) {
  std::vector<int> out;
  for (int c = 1; c <= cycles; ++c)
    if (c % stride == 0 || c == cycles) out.push_back(c);
  return out;
}

// Everything one trajectory contributes to the ensemble, in record order.
struct TrajContribution {
  std::vector<double> chern, mi, purity, drift;
  std::vector<std::vector<double>> corr;
  std::vector<std::vector<double>> marker;
  std::vector<Matrix> gp_records;  // populated only when contours are wanted
  Matrix gp_final;
  long fswaps = 0;
  int clamps = 0;
  std::uint64_t seed = 0;
};

TrajContribution run_one_trajectory(const OWModeSet& modes,
                                    const EnsembleSpec& spec,
                                    const std::vector<int>& records,
                                    std::uint64_t seed) {
  ProtocolParams pp;
  pp.L = spec.L;
  pp.charge = spec.charge;
  pp.noise_sigma = spec.noise_sigma;
  SteeringEngine eng(modes, pp, seed);
  eng.init_random_charge();

  TrajContribution out;
  out.seed = seed;
  std::size_t next = 0;
  const auto& obs = spec.observables;
  for (int c = 1; c <= spec.cycles; ++c) {
    eng.run_cycle();
    if (next < records.size() && records[next] == c) {
      const Matrix& gp = eng.physical();
      if (obs.chern) out.chern.push_back(chern_real_space(gp, spec.L));
      if (obs.mutual_information)
        out.mi.push_back(mutual_information(gp, spec.L).mi);
      if (obs.correlations) out.corr.push_back(correlation_decay(gp, spec.L));
      if (obs.marker) out.marker.push_back(chern_marker(gp, spec.L));
      if (obs.contour) out.gp_records.push_back(gp);
      out.purity.push_back(eng.max_purity_deviation());
      out.drift.push_back(eng.max_charge_drift());
      ++next;
    }
  }
  out.gp_final = eng.physical();
  out.fswaps = eng.fswap_count();
  out.clamps = eng.clamp_events();
  return out;
}

struct Accumulator {
  int n = 0;
  int n_records = 0;
  std::vector<double> chern_sum, chern_sq, mi_sum, purity_max, drift_max;
  std::vector<std::vector<double>> corr_sum;
  std::vector<std::vector<double>> marker_sum;
  std::vector<Matrix> gp_sum;
  Matrix gp_final_sum;
  std::vector<double> chern_final;
  long fswaps = 0;
  int clamps = 0;
  std::vector<std::uint64_t> seeds;

  explicit Accumulator(int n_records_) : n_records(n_records_) {
    purity_max.assign(n_records, 0.0);
    drift_max.assign(n_records, 0.0);
  }

  static void add_vec(std::vector<double>& into, const std::vector<double>& v) {
    if (into.empty()) into.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) into[i] += v[i];
  }

  void merge(const TrajContribution& t) {
    if (chern_sum.empty() && !t.chern.empty()) {
      chern_sum.assign(t.chern.size(), 0.0);
      chern_sq.assign(t.chern.size(), 0.0);
    }
    for (std::size_t i = 0; i < t.chern.size(); ++i) {
      chern_sum[i] += t.chern[i];
      chern_sq[i] += t.chern[i] * t.chern[i];
    }
    add_vec(mi_sum, t.mi);
    for (int i = 0; i < n_records; ++i) {
      purity_max[i] = std::max(purity_max[i], t.purity[i]);
      drift_max[i] = std::max(drift_max[i], t.drift[i]);
    }
    if (corr_sum.empty() && !t.corr.empty())
      corr_sum.assign(t.corr.size(), {});
    for (std::size_t i = 0; i < t.corr.size(); ++i)
      add_vec(corr_sum[i], t.corr[i]);
    if (marker_sum.empty() && !t.marker.empty())
      marker_sum.assign(t.marker.size(), {});
    for (std::size_t i = 0; i < t.marker.size(); ++i)
      add_vec(marker_sum[i], t.marker[i]);
    if (!t.gp_records.empty()) {
      if (gp_sum.empty())
        gp_sum.assign(t.gp_records.size(),
                      Matrix::Zero(t.gp_final.rows(), t.gp_final.cols()));
      for (std::size_t i = 0; i < t.gp_records.size(); ++i)
        gp_sum[i] += t.gp_records[i];
    }
    if (gp_final_sum.size() == 0)
      gp_final_sum = Matrix::Zero(t.gp_final.rows(), t.gp_final.cols());
    gp_final_sum += t.gp_final;
    if (!t.chern.empty()) chern_final.push_back(t.chern.back());
    fswaps += t.fswaps;
    clamps += t.clamps;
    seeds.push_back(t.seed);
    ++n;
  }
};

}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  const OWModeSet modes =
      spec.alpha_right
          ? build_ow_modes_wall(spec.L, spec.alpha, *spec.alpha_right,
                                spec.n_shell)
          : build_ow_modes(spec.L, spec.alpha, spec.n_shell);
  const std::vector<int> records =
      recorded_cycles(spec.cycles, spec.observables.stride);
  const int total = spec.trajectories;
  const int n_workers = std::max(1, std::min(spec.threads, total));

  Accumulator acc(static_cast<int>(records.size()));
  std::atomic<int> next_index{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::map<int, TrajContribution> pending;
  int next_merge = 0;
  std::string error_message;
  int error_index = -1;
  std::uint64_t error_seed = 0;

  auto worker = [&]() {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      const int i = next_index.fetch_add(1, std::memory_order_relaxed);
      if (i >= total) return;
      const std::uint64_t seed = RandomStream::derive_seed(spec.seed, i);
      try {
        TrajContribution contrib =
            run_one_trajectory(modes, spec, records, seed);
        std::lock_guard<std::mutex> lock(mu);
        pending.emplace(i, std::move(contrib));
        while (!pending.empty() && pending.begin()->first == next_merge) {
          acc.merge(pending.begin()->second);
          pending.erase(pending.begin());
          ++next_merge;
          if (spec.progress) spec.progress(next_merge, total);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (error_index < 0) {
          error_message = e.what();
          error_index = i;
          error_seed = seed;
        }
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  if (error_index >= 0)
    throw EnsembleAbort("trajectory " + std::to_string(error_index) +
                            " (seed " + std::to_string(error_seed) +
                            ") failed: " + error_message,
                        next_merge, error_index, error_seed);

  EnsembleResult res;
  res.L = spec.L;
  res.trajectories = acc.n;
  res.recorded_cycles = records;
  res.trajectory_seeds = std::move(acc.seeds);
  const double n = static_cast<double>(acc.n);

  res.cycles.resize(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    CycleStats& cs = res.cycles[r];
    cs.cycle = records[r];
    if (!acc.chern_sum.empty()) {
      cs.chern_mean = acc.chern_sum[r] / n;
      if (acc.n > 1) {
        double var = (acc.chern_sq[r] - n * cs.chern_mean * cs.chern_mean) /
                     (n - 1.0);
        cs.chern_sem = std::sqrt(std::max(0.0, var) / n);
      }
    }
    if (!acc.mi_sum.empty()) cs.mi_mean = acc.mi_sum[r] / n;
    cs.purity_max = acc.purity_max[r];
    cs.charge_drift_max = acc.drift_max[r];
    if (!acc.corr_sum.empty()) {
      cs.corr_mean = acc.corr_sum[r];
      for (double& v : cs.corr_mean) v /= n;
    }
    if (!acc.marker_sum.empty()) {
      cs.marker_mean = acc.marker_sum[r];
      for (double& v : cs.marker_mean) v /= n;
    }
    if (!acc.gp_sum.empty()) {
      Matrix gbar = acc.gp_sum[r] / n;
      std::vector<int> all(gbar.rows());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      // Fold the per-mode contour (2 orbitals per site) into a site map.
      const std::vector<double> per_mode = entanglement_contour(gbar, all);
      cs.contour_gbar.assign(per_mode.size() / 2, 0.0);
      for (std::size_t s = 0; s < cs.contour_gbar.size(); ++s)
        cs.contour_gbar[s] = per_mode[2 * s] + per_mode[2 * s + 1];
    }
  }

  res.chern_final = std::move(acc.chern_final);
  if (!res.chern_final.empty()) {
    res.chern_final_mean = res.cycles.back().chern_mean;
    res.chern_final_sem = res.cycles.back().chern_sem;
  }
  if (!acc.mi_sum.empty()) res.mi_final_mean = res.cycles.back().mi_mean;
  if (!res.cycles.empty()) res.corr_final_mean = res.cycles.back().corr_mean;

  res.gbar_final = acc.gp_final_sum / n;
  res.chern_gbar = chern_real_space(res.gbar_final, spec.L);
  SpectralGapResult sg = spectral_gap(res.gbar_final);
  res.spectral_gap_gbar = sg.gap;
  res.gbar_closest_to_half = sg.closest_to_half;
  try {
    Matrix flat = regularize(res.gbar_final);
    res.chern_gbar_regularized = chern_real_space(flat, spec.L);
    res.regularized_valid = true;
  } catch (const std::runtime_error&) {
    res.chern_gbar_regularized = std::numeric_limits<double>::quiet_NaN();
    res.regularized_valid = false;
  }
  res.corr_gbar = correlation_decay(res.gbar_final, spec.L);

  res.purity_max =
      *std::max_element(acc.purity_max.begin(), acc.purity_max.end());
  res.charge_drift_max =
      *std::max_element(acc.drift_max.begin(), acc.drift_max.end());
  res.fswap_total = acc.fswaps;
  res.clamp_events = acc.clamps;
  return res;
}

EnsembleSpec ensemble_spec_from(const RunConfig& cfg, int threads) {
  EnsembleSpec spec;
  spec.L = cfg.protocol.L;
  spec.alpha = cfg.protocol.alpha;
  spec.alpha_right = cfg.protocol.alpha_right;
  spec.n_shell = cfg.protocol.n_shell;
  spec.cycles = cfg.protocol.cycles;
  spec.trajectories = cfg.protocol.trajectories;
  spec.charge = cfg.protocol.charge;
  spec.noise_sigma = cfg.protocol.noise_sigma;
  spec.seed = cfg.seed;
  spec.threads = threads;
  spec.observables = cfg.observables;
  return spec;
}

namespace {

std::vector<SweepPoint> run_sweep(const RunConfig& cfg, int threads,
                                  const std::vector<double>& values,
                                  bool is_noise_axis) {
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    EnsembleSpec spec = ensemble_spec_from(cfg, threads);
    if (is_noise_axis)
      spec.noise_sigma = values[i];
    else
      spec.alpha = values[i];
    spec.seed = RandomStream::derive_seed(cfg.seed, static_cast<int>(i));
    SweepPoint pt;
    pt.value = values[i];
    pt.result = run_ensemble(spec);
    points.push_back(std::move(pt));
  }
  return points;
}

}  // namespace

std::vector<SweepPoint> run_alpha_sweep(const RunConfig& cfg, int threads) {
  return run_sweep(cfg, threads, cfg.sweep.alpha_values, false);
}

std::vector<SweepPoint> run_noise_sweep(const RunConfig& cfg, int threads) {
  return run_sweep(cfg, threads, cfg.sweep.sigma_values, true);
}

LindbladRunOutput run_lindblad(const LindbladSection& sec,
                               std::uint64_t seed) {
  LindbladParams p;
  p.L = sec.L;
  p.alpha = sec.alpha;
  p.n_bar_a = sec.n_bar_a;
  p.t_max = sec.t_max;
  p.dt = sec.dt;
  p.record_every = sec.record_every;

  LindbladIntegrator li(p);
  RandomStream rng(seed);
  BandState state = li.random_state(rng);

  LindbladRunOutput out;
  out.trace = li.integrate(state, p);
  out.t_conv = convergence_time(sec.L, sec.alpha);
  for (int sz : sec.convergence_sizes)
    out.t_conv_by_size.emplace_back(sz, convergence_time(sz, sec.alpha));

  const auto& first = out.trace.samples.front();
  const double rate_plus = (1.0 - sec.n_bar_a) * out.trace.delta_plus;
  const double rate_minus = sec.n_bar_a * out.trace.delta_minus;
  double slack_p = -std::numeric_limits<double>::infinity();
  double slack_m = slack_p;
  for (const LindbladSample& s : out.trace.samples) {
    slack_p = std::max(slack_p, s.gbar_plus - first.gbar_plus *
                                                  std::exp(-rate_plus * s.t));
    slack_m = std::max(slack_m,
                       std::abs(s.gbar_minus - 1.0) -
                           std::abs(first.gbar_minus - 1.0) *
                               std::exp(-rate_minus * s.t));
  }
  out.bound_slack_plus = slack_p;
  out.bound_slack_minus = slack_m;
  const auto& last = out.trace.samples.back();
  out.final_gbar_plus = last.gbar_plus;
  out.final_dev_minus = std::abs(last.gbar_minus - 1.0);
  out.final_max_coh = last.max_coh;
  return out;
}

std::vector<CorrespondenceResult> run_symmetry_table(int samples,
                                                     std::uint64_t seed) {
  std::vector<CorrespondenceResult> rows;
  int idx = 0;
  for (SymClass c : all_sym_classes())
    rows.push_back(
        verify_correspondence(c, samples, RandomStream::derive_seed(seed, idx++)));
  return rows;
}

std::vector<PovmRow> run_povm_matrix(int samples, std::uint64_t seed) {
  std::vector<PovmRow> rows;
  int idx = 0;
  for (SymClass c : all_sym_classes()) {
    PovmRow row;
    row.averaged = c;
    const std::uint64_t row_seed = RandomStream::derive_seed(seed, idx++);
    if (admits_exact_povm(c)) {
      row.check = "construction";
      double worst = 0.0;
      const double alphas[] = {0.25, 0.7, 1.3};
      for (double a : alphas) {
        KrausPairConstruction k = povm_check_construction(c, a);
        worst = std::max(worst, k.residual);
      }
      row.construction_residual = worst;
      row.samples = 3;
      row.pass = worst < 1e-12;
    } else if (c == SymClass::AII) {
      row.check = "bdg-embedding";
      BdgEmbeddingReport rep = aii_bdg_embedding(4, samples, row_seed);
      row.max_structural_residual =
          std::max({rep.max_antisymmetry_residual, rep.max_quaternionic_residual,
                    rep.max_fock_residual});
      row.samples = rep.samples;
      row.pass = rep.pass;
    } else {
      row.check = "witness";
      const int n_modes = (c == SymClass::CII) ? 4 : 2;
      WitnessReport rep = povm_witness_inadmissible(c, n_modes, samples, row_seed);
      row.min_slack = rep.min_slack;
      row.max_mismatch =
          std::max(rep.max_pairing_residual, rep.max_formula_mismatch);
      row.samples = rep.samples_tested;
      row.pass = rep.pass;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

constexpr double kOracleTol = 1e-10;

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// One randomized instance per op; returns the worst engine-vs-oracle error.
double oracle_case_unitary(std::uint64_t seed) {
  RandomStream rng(seed);
  const int n = 2 + static_cast<int>(rng.uniform_below(3));
  Matrix g;
  Vector psi = fock::random_gaussian_state(n, rng, 2, &g);
  double err = max_abs_diff(g, fock::correlation_of(psi));
  const Matrix m = fock::random_antihermitian(n, rng);
  psi = fock::evolve_gaussian(psi, m);
  const Matrix t = m.exp();
  apply_unitary(g, t);
  return std::max(err, max_abs_diff(g, fock::correlation_of(psi)));
}

double oracle_case_projective(std::uint64_t seed) {
  RandomStream rng(seed);
  const int n = 2 + static_cast<int>(rng.uniform_below(3));
  Matrix g;
  const Vector psi = fock::random_gaussian_state(n, rng, 2, &g);
  const Vector w = fock::random_mode(n, rng);
  const ModeVector mode = make_dense_mode(w);
  const double p1 = occupation_expectation(g, mode);
  double err = 0.0;
  for (int outcome : {0, 1}) {
    const double p_branch = outcome == 1 ? p1 : 1.0 - p1;
    if (p_branch < 1e-6) continue;  // skip branches the oracle cannot normalize
    Matrix gc = g;
    Vector pc = psi;
    const double p_eng = measurement_update(gc, mode, outcome);
    const double p_orc = fock::project_occupation(pc, n, w, outcome);
    err = std::max(err, std::abs(p_eng - p_orc));
    err = std::max(err, max_abs_diff(gc, fock::correlation_of(pc)));
  }
  return err;
}

double oracle_case_weak(std::uint64_t seed) {
  RandomStream rng(seed);
  const int n = 2 + static_cast<int>(rng.uniform_below(3));
  Matrix g;
  const Vector psi = fock::random_gaussian_state(n, rng, 2, &g);
  const Vector w = fock::random_mode(n, rng);
  const ModeVector mode = make_dense_mode(w);
  const double kappa = 0.2 + 2.8 * rng.uniform();
  double err = 0.0;
  for (int sign : {-1, 1}) {
    Matrix gc = g;
    Vector pc = psi;
    const double w_eng = weak_measurement_update(gc, mode, kappa, sign);
    const double w_orc = fock::weak_kraus(pc, n, w, kappa, sign);
    err = std::max(err, std::abs(w_eng - w_orc));
    err = std::max(err, max_abs_diff(gc, fock::correlation_of(pc)));
  }
  return err;
}

double oracle_case_fswap(std::uint64_t seed) {
  RandomStream rng(seed);
  const int n = 2 + static_cast<int>(rng.uniform_below(3));
  Matrix g;
  Vector psi = fock::random_gaussian_state(n, rng, 2, &g);
  Vector a = fock::random_mode(n, rng);
  Vector b;
  for (;;) {
    b = fock::random_mode(n, rng);
    b -= a * (a.adjoint() * b)(0, 0);
    if (b.norm() > 1e-3) break;
  }
  b /= b.norm();
  Matrix gc = g;
  fswap(gc, make_dense_mode(a), make_dense_mode(b));
  const Vector z = (a - b) / std::sqrt(2.0);
  const Matrix m = Complex(0.0, -M_PI) * (z.conjugate() * z.transpose());
  psi = fock::evolve_gaussian(psi, m);
  return max_abs_diff(gc, fock::correlation_of(psi));
}

}  // namespace

OracleBatteryReport run_oracle_battery(int cases_per_op, std::uint64_t seed) {
  OracleBatteryReport rep;
  rep.tolerance = kOracleTol;
  struct Op {
    const char* name;
    double (*fn)(std::uint64_t);
  };
  const Op ops[] = {{"apply_unitary", oracle_case_unitary},
                    {"measure_occupation", oracle_case_projective},
                    {"measure_occupation_weak", oracle_case_weak},
                    {"fswap", oracle_case_fswap}};
  bool all_ok = true;
  int op_index = 0;
  for (const Op& op : ops) {
    OracleOpReport r;
    r.op = op.name;
    r.cases = cases_per_op;
    const std::uint64_t op_seed = RandomStream::derive_seed(seed, op_index++);
    for (int i = 0; i < cases_per_op; ++i) {
      const std::uint64_t case_seed = RandomStream::derive_seed(op_seed, i);
      const double err = op.fn(case_seed);
      r.max_error = std::max(r.max_error, err);
      if (err > kOracleTol && r.failing_seeds.size() < 20)
        r.failing_seeds.push_back(case_seed);
    }
    if (!r.failing_seeds.empty()) all_ok = false;
    rep.ops.push_back(std::move(r));
  }
  rep.pass = all_ok;
  return rep;
}

}  // namespace fsteer
