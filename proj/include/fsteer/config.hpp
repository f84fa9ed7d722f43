// Run configuration: a single JSON document that selects an experiment kind
// and carries all numeric parameters. Parsing is strict — unknown fields are
// rejected by name, defaults are materialized, and the canonical echo of the
// materialized config is hashed (FNV-1a 64) so reports can state exactly what
// produced them.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fsteer {

// Bumped on any backward-incompatible change to config or report layout.
// Readers reject documents whose schema_version is newer than this.
inline constexpr int kSchemaVersion = 1;

enum class RunKind {
  kSteer,
  kAlphaSweep,
  kNoiseSweep,
  kDomainWall,
  kLindblad,
  kSymmetry,
  kPovm,
  kSelftest,
};

const char* run_kind_name(RunKind kind);
RunKind run_kind_from_name(const std::string& name);

// Steering-circuit parameters (used by steer, alpha-sweep, noise-sweep and
// domain-wall kinds; sweeps override alpha or noise_sigma per point).
struct ProtocolSection {
  int L = 12;
  double alpha = 1.5;
  std::optional<double> alpha_right;  // set => domain wall at x = L/2 and x = 0
  int n_shell = 2;                    // -1 = untruncated localized modes
  int cycles = 12;
  int trajectories = 100;
  int charge = -1;                    // total particle number; -1 = 2L²
  double noise_sigma = 0.0;           // dephasing width in [0, 1]
};

struct SweepSection {
  std::vector<double> alpha_values;  // required for kind alpha-sweep
  std::vector<double> sigma_values;  // required for kind noise-sweep
};

struct LindbladSection {
  int L = 24;
  double alpha = 1.0;
  double n_bar_a = 0.5;   // ancilla occupation in [0, 1]
  double t_max = -1.0;    // <= 0 selects ten e-folds of the slowest bound rate
  double dt = -1.0;       // <= 0 selects 0.01 / max rate
  int record_every = 10;  // sample stride in integration steps
  std::vector<int> convergence_sizes = {24, 48};  // grids for the T_conv table
};

struct ChecksSection {
  int symmetry_samples = 100;  // random generators per symmetry class
  int povm_samples = 50;       // witness samples per inadmissible class
  int oracle_cases = 200;      // randomized cases per oracle-battery operation
};

struct ObservablesSection {
  int stride = 1;  // record observables every `stride` cycles (and the last)
  bool chern = true;
  bool mutual_information = true;
  bool correlations = true;  // per-trajectory C_G(r), averaged over ensemble
  bool marker = false;       // local Chern-marker field (ensemble mean)
  bool contour = false;      // mixedness contour of the ensemble-averaged state
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  RunKind kind = RunKind::kSteer;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 0;  // 0 = resolve from env/hardware at run time
  ProtocolSection protocol;
  SweepSection sweep;
  LindbladSection lindblad;
  ChecksSection checks;
  ObservablesSection observables;
  std::optional<std::string> compare_to;  // report to diff against (fixture)
};

// Strict parse: throws std::invalid_argument naming the offending field.
RunConfig parse_run_config(const nlohmann::json& doc);
// Reads and parses a config file; parse errors carry the path and location.
RunConfig load_run_config(const std::string& path);

// Canonical materialized echo (all fields present, keys sorted by nlohmann).
nlohmann::json run_config_to_json(const RunConfig& cfg);

// FNV-1a 64-bit hash of the canonical compact serialization, as 16 hex digits.
std::string config_hash_hex(const RunConfig& cfg);
std::uint64_t fnv1a64(const std::string& bytes);

// Machine-readable field-by-field schema (printed by --emit-schema).
nlohmann::json config_schema();

}  // namespace fsteer
