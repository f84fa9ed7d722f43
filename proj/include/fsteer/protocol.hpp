// SPDX-License-Identifier: MIT
//
// Adaptive measurement-and-feedforward steering on a bilayer of 4L² modes:
// a physical layer (indices [0, 2L²)) hosting the target state and an
// ancillary layer (indices [2L², 4L²)) acting as a particle reservoir.
//
// One cycle:
//   Step 1 (measure + feedforward), sites row-major, orbital A then B:
//     measure the lower-band localized mode; on outcome 0, fermionic-SWAP it
//     with the site's reservoir mode; then measure the upper-band mode; on
//     outcome 1, fSWAP with the same reservoir mode.
//   Step 2 (reservoir redistribution): random two-mode hopping gates
//     exp(i θ (d†_i d_j + h.c.)) on +x bonds then +y bonds (one θ per bond,
//     shared by both orbitals) and on-site A<->B mixers (independent θ'),
//     all θ ~ U[0, 2π); then projectively measure every reservoir mode.
//   Step 3 (optional dephasing noise): independent phases
//     exp(4π i θ (n - 1/2)), θ ~ U[0, σ), on every physical mode.
//
// Physical-ancillary cross-correlations vanish identically throughout (the
// fSWAP always acts on a decoupled pair: a just-measured eigenmode and a
// definite reservoir mode), so the production backend stores the two diagonal
// blocks separately; a full-4L²-matrix reference backend consuming the
// identical random stream exists for equivalence tests.

#pragma once

#include <cstdint>
#include <optional>

#include "fsteer/chern_model.hpp"
#include "fsteer/gaussian_core.hpp"
#include "fsteer/lattice.hpp"

namespace fsteer {

struct ProtocolParams {
  int L = 12;
  int charge = -1;          // total particle number Q; -1 selects 2L²
  double noise_sigma = 0.0; // dephasing width σ in [0, 1]; 0 disables step 3
};

class SteeringEngine {
 public:
  enum class Backend { kBlock, kFull };

  // `modes` must outlive the engine (one mode set is shared per ensemble).
  SteeringEngine(const OWModeSet& modes, const ProtocolParams& params,
                 std::uint64_t seed, Backend backend = Backend::kBlock);

  // Q particles placed uniformly at random over all 4L² modes.
  void init_random_charge();

  // Starts from an explicit physical-layer correlation matrix and a
  // product-state reservoir (fixed-point tests, resumed runs). Resets cycle
  // and hygiene counters; the configured charge is superseded by the state.
  void init_state(const Matrix& g_physical,
                  const std::vector<int>& ancilla_occupations);

  // Individual protocol phases (exposed for tests) and the full cycle.
  void step_measure_feedforward();
  void ancilla_redistribute();
  void apply_noise();
  void run_cycle();

  int cycle() const { return cycle_; }
  int lattice_size() const { return params_.L; }

  // Physical-layer correlation matrix (2L² x 2L²).
  const Matrix& physical() const;
  // Assembled 4L² bilayer matrix (cross blocks zero for the block backend).
  Matrix full_correlation() const;

  double total_charge_both_layers() const;
  double initial_charge() const { return initial_charge_; }
  double max_charge_drift() const { return max_charge_drift_; }
  // Spectral purity bound max_i |λ_i(1-λ_i)| of the physical layer, tracked
  // each cycle (upper-bounds the entrywise deviation of G² - G).
  double max_purity_deviation() const { return max_purity_dev_; }
  long fswap_count() const { return fswap_count_; }
  int clamp_events() const { return clamp_events_; }

  std::uint64_t rng_draws() const { return rng_.draws(); }

 private:
  void measure_and_feedforward_one(int x, int y, int nu);
  void terminal_ancilla_measurements();
  void end_of_cycle_hygiene();

  int anc_local(int x, int y, int nu) const {
    return mode_index(x, y, nu, params_.L);
  }

  const OWModeSet& modes_;
  ProtocolParams params_;
  Backend backend_;
  RandomStream rng_;
  int dim_half_;  // 2L²

  // Block backend state: the two diagonal blocks.
  Matrix gp_, ga_;
  // Full backend state.
  Matrix gfull_;

  int cycle_ = 0;
  double initial_charge_ = 0;
  double max_charge_drift_ = 0;
  double max_purity_dev_ = 0;
  long fswap_count_ = 0;
  int clamp_events_ = 0;
};

}  // namespace fsteer
