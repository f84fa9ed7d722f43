// Experiment orchestration: trajectory ensembles over worker threads with
// canonical (trajectory-index-ordered) reduction, parameter sweeps, the
// occupation-density ODE run, the symmetry-class table, the POVM check
// matrix, and the randomized engine-vs-oracle equivalence battery.
//
// Determinism contract: every result is a pure function of its spec
// (including the master seed) and is independent of the worker count —
// per-trajectory seeds are derived from (master, index) and all floating-
// point reductions happen in trajectory-index order on a single thread.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsteer/config.hpp"
#include "fsteer/gaussian_core.hpp"
#include "fsteer/lindblad.hpp"
#include "fsteer/povm.hpp"
#include "fsteer/symmetry_class.hpp"

namespace fsteer {

// Thread-count resolution: explicit request > FERMION_STEER_THREADS env
// variable > hardware concurrency (at least 1).
int resolve_threads(int requested);

// ---------------------------------------------------------------------------
// Steering ensembles

struct EnsembleSpec {
  int L = 12;
  double alpha = 1.5;
  std::optional<double> alpha_right;  // domain wall when set
  int n_shell = 2;                    // -1 = untruncated
  int cycles = 12;
  int trajectories = 100;
  int charge = -1;                    // -1 = 2L²
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  int threads = 1;
  ObservablesSection observables;
  // Called after each trajectory is merged (done count, total), merge order.
  std::function<void(int, int)> progress;
};

// Ensemble statistics for one recorded cycle.
struct CycleStats {
  int cycle = 0;
  double chern_mean = 0.0;
  double chern_sem = 0.0;
  double mi_mean = 0.0;
  double purity_max = 0.0;        // max over trajectories, running to here
  double charge_drift_max = 0.0;
  std::vector<double> corr_mean;  // mean over trajectories of C_G(r)
  std::vector<double> marker_mean;   // L² field (observables.marker)
  std::vector<double> contour_gbar;  // L² field (observables.contour)
};

struct EnsembleResult {
  int L = 0;
  int trajectories = 0;
  std::vector<int> recorded_cycles;
  std::vector<CycleStats> cycles;

  // Final-cycle, trajectory-resolved quantities.
  std::vector<double> chern_final;       // one entry per trajectory
  double chern_final_mean = 0.0;
  double chern_final_sem = 0.0;
  double mi_final_mean = 0.0;
  std::vector<double> corr_final_mean;   // mean over trajectories of C_G(r)

  // Ensemble-averaged-state quantities (from Ḡ at the final cycle).
  Matrix gbar_final;
  double chern_gbar = 0.0;
  double chern_gbar_regularized = 0.0;   // NaN when regularization impossible
  bool regularized_valid = false;
  double spectral_gap_gbar = 0.0;
  double gbar_closest_to_half = 0.0;
  std::vector<double> corr_gbar;         // C_{Ḡ}(r)

  // Run-hygiene summaries (max over trajectories, whole run).
  double purity_max = 0.0;
  double charge_drift_max = 0.0;
  long fswap_total = 0;
  int clamp_events = 0;
  std::vector<std::uint64_t> trajectory_seeds;
};

// Thrown when a trajectory fails; carries enough context to write a manifest
// of the work completed before the failure.
struct EnsembleAbort : std::runtime_error {
  EnsembleAbort(const std::string& msg, int completed_, int failed_index_,
                std::uint64_t failed_seed_)
      : std::runtime_error(msg),
        completed(completed_),
        failed_index(failed_index_),
        failed_seed(failed_seed_) {}
  int completed = 0;
  int failed_index = -1;
  std::uint64_t failed_seed = 0;
};

EnsembleResult run_ensemble(const EnsembleSpec& spec);

// Spec for the configured kind; sweeps override one axis per point and give
// each point an independent derived master seed.
EnsembleSpec ensemble_spec_from(const RunConfig& cfg, int threads);

struct SweepPoint {
  double value = 0.0;  // alpha or sigma
  EnsembleResult result;
};

std::vector<SweepPoint> run_alpha_sweep(const RunConfig& cfg, int threads);
std::vector<SweepPoint> run_noise_sweep(const RunConfig& cfg, int threads);

// ---------------------------------------------------------------------------
// Occupation-density ODE run

struct LindbladRunOutput {
  LindbladTrace trace;
  double t_conv = 0.0;  // at lindblad.L
  std::vector<std::pair<int, double>> t_conv_by_size;
  // Worst signed violation of the analytic decay bounds over all samples
  // (negative = satisfied with margin).
  double bound_slack_plus = 0.0;
  double bound_slack_minus = 0.0;
  double final_gbar_plus = 0.0;
  double final_dev_minus = 0.0;  // |gbar_minus - 1|
  double final_max_coh = 0.0;
};

LindbladRunOutput run_lindblad(const LindbladSection& sec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Verification batteries

std::vector<CorrespondenceResult> run_symmetry_table(int samples,
                                                     std::uint64_t seed);

// One row per averaged (measurement-averaged) class: an exact two-outcome
// construction where one exists, an inadmissibility witness where provably
// none exists, and the structural quadratic-Majorana embedding for the class
// whose obstruction is continuous rather than trace-based.
struct PovmRow {
  SymClass averaged = SymClass::A;
  std::string check;  // "construction" | "witness" | "bdg-embedding"
  bool pass = false;
  double construction_residual = 0.0;  // construction rows
  double min_slack = 0.0;              // witness rows
  double max_mismatch = 0.0;           // witness: Fock-vs-analytic formulas
  double max_structural_residual = 0.0;  // embedding row
  int samples = 0;
};

std::vector<PovmRow> run_povm_matrix(int samples, std::uint64_t seed);

// Randomized equivalence battery: every engine update replayed against the
// dense Fock-space oracle on 2-4 modes.
struct OracleOpReport {
  std::string op;
  int cases = 0;
  double max_error = 0.0;
  std::vector<std::uint64_t> failing_seeds;  // reproduction seeds
};

struct OracleBatteryReport {
  double tolerance = 1e-10;
  std::vector<OracleOpReport> ops;
  bool pass = false;
};

OracleBatteryReport run_oracle_battery(int cases_per_op, std::uint64_t seed);

}  // namespace fsteer
