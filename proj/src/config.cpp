#include "fsteer/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fsteer {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

std::string joined(const std::string& scope, const std::string& key) {
  return scope.empty() ? key : scope + "." + key;
}

// Rejects any key of `obj` not in `allowed`, naming the offending field.
void check_keys(const json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail("\"" + scope + "\" must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key()))
      fail("unknown field \"" + joined(scope, it.key()) + "\"");
  }
}

int get_int(const json& obj, const std::string& scope, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    fail("\"" + joined(scope, key) + "\" must be an integer");
  return v.get<int>();
}

std::uint64_t get_u64(const json& obj, const std::string& scope,
                      const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    fail("\"" + joined(scope, key) + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

double get_double(const json& obj, const std::string& scope, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail("\"" + joined(scope, key) + "\" must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail("\"" + joined(scope, key) + "\" must be finite");
  return d;
}

bool get_bool(const json& obj, const std::string& scope, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail("\"" + joined(scope, key) + "\" must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& scope,
                       const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail("\"" + joined(scope, key) + "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> get_double_list(const json& obj, const std::string& scope,
                                    const char* key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) fail("\"" + joined(scope, key) + "\" must be an array");
  for (const json& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>()))
      fail("\"" + joined(scope, key) + "\" entries must be finite numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> get_int_list(const json& obj, const std::string& scope,
                              const char* key, std::vector<int> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) fail("\"" + joined(scope, key) + "\" must be an array");
  std::vector<int> out;
  for (const json& e : v) {
    if (!e.is_number_integer())
      fail("\"" + joined(scope, key) + "\" entries must be integers");
    out.push_back(e.get<int>());
  }
  return out;
}

ProtocolSection parse_protocol(const json& obj) {
  ProtocolSection p;
  check_keys(obj, "protocol",
             {"L", "alpha", "alpha_right", "n_shell", "cycles", "trajectories",
              "charge", "noise_sigma"});
  p.L = get_int(obj, "protocol", "L", p.L);
  if (p.L < 4 || p.L % 2 != 0)
    fail("\"protocol.L\" must be an even integer >= 4");
  p.alpha = get_double(obj, "protocol", "alpha", p.alpha);
  if (obj.contains("alpha_right") && !obj.at("alpha_right").is_null())
    p.alpha_right = get_double(obj, "protocol", "alpha_right", 0.0);
  p.n_shell = get_int(obj, "protocol", "n_shell", p.n_shell);
  if (p.n_shell < -1) fail("\"protocol.n_shell\" must be >= -1");
  p.cycles = get_int(obj, "protocol", "cycles", p.cycles);
  if (p.cycles < 1) fail("\"protocol.cycles\" must be >= 1");
  p.trajectories = get_int(obj, "protocol", "trajectories", p.trajectories);
  if (p.trajectories < 1) fail("\"protocol.trajectories\" must be >= 1");
  p.charge = get_int(obj, "protocol", "charge", p.charge);
  int n_modes = 4 * p.L * p.L;
  if (p.charge != -1 && (p.charge < 0 || p.charge >= n_modes))
    fail("\"protocol.charge\" must be -1 (default 2L^2) or in [0, 4L^2); a "
         "completely filled register (Q = 4L^2 = " +
         std::to_string(n_modes) + ") leaves no dynamics to steer");
  p.noise_sigma = get_double(obj, "protocol", "noise_sigma", p.noise_sigma);
  if (p.noise_sigma < 0.0 || p.noise_sigma > 1.0)
    fail("\"protocol.noise_sigma\" must lie in [0, 1]");
  return p;
}

SweepSection parse_sweep(const json& obj) {
  SweepSection s;
  check_keys(obj, "sweep", {"alpha_values", "sigma_values"});
  s.alpha_values = get_double_list(obj, "sweep", "alpha_values");
  s.sigma_values = get_double_list(obj, "sweep", "sigma_values");
  for (double sg : s.sigma_values)
    if (sg < 0.0 || sg > 1.0)
      fail("\"sweep.sigma_values\" entries must lie in [0, 1]");
  return s;
}

LindbladSection parse_lindblad(const json& obj) {
  LindbladSection l;
  check_keys(obj, "lindblad",
             {"L", "alpha", "n_bar_a", "t_max", "dt", "record_every",
              "convergence_sizes"});
  l.L = get_int(obj, "lindblad", "L", l.L);
  if (l.L < 2) fail("\"lindblad.L\" must be >= 2");
  l.alpha = get_double(obj, "lindblad", "alpha", l.alpha);
  for (double gapless : {0.0, 2.0, -2.0})
    if (std::abs(l.alpha - gapless) < 1e-12)
      fail("\"lindblad.alpha\" is gapless (alpha in {0, +2, -2}); rates are "
           "only defined for gapped alpha");
  l.n_bar_a = get_double(obj, "lindblad", "n_bar_a", l.n_bar_a);
  if (l.n_bar_a < 0.0 || l.n_bar_a > 1.0)
    fail("\"lindblad.n_bar_a\" must lie in [0, 1]");
  l.t_max = get_double(obj, "lindblad", "t_max", l.t_max);
  l.dt = get_double(obj, "lindblad", "dt", l.dt);
  l.record_every = get_int(obj, "lindblad", "record_every", l.record_every);
  if (l.record_every < 1) fail("\"lindblad.record_every\" must be >= 1");
  l.convergence_sizes =
      get_int_list(obj, "lindblad", "convergence_sizes", l.convergence_sizes);
  for (int sz : l.convergence_sizes)
    if (sz < 2) fail("\"lindblad.convergence_sizes\" entries must be >= 2");
  if ((l.n_bar_a == 0.0 || l.n_bar_a == 1.0) && l.t_max <= 0.0)
    fail("\"lindblad.t_max\" must be set explicitly when n_bar_a is 0 or 1 "
         "(one relaxation channel has no bound rate)");
  return l;
}

ChecksSection parse_checks(const json& obj) {
  ChecksSection c;
  check_keys(obj, "checks",
             {"symmetry_samples", "povm_samples", "oracle_cases"});
  c.symmetry_samples =
      get_int(obj, "checks", "symmetry_samples", c.symmetry_samples);
  c.povm_samples = get_int(obj, "checks", "povm_samples", c.povm_samples);
  c.oracle_cases = get_int(obj, "checks", "oracle_cases", c.oracle_cases);
  if (c.symmetry_samples < 1 || c.povm_samples < 1 || c.oracle_cases < 1)
    fail("\"checks\" sample counts must be >= 1");
  return c;
}

ObservablesSection parse_observables(const json& obj) {
  ObservablesSection o;
  check_keys(obj, "observables",
             {"stride", "chern", "mutual_information", "correlations",
              "marker", "contour"});
  o.stride = get_int(obj, "observables", "stride", o.stride);
  if (o.stride < 1) fail("\"observables.stride\" must be >= 1");
  o.chern = get_bool(obj, "observables", "chern", o.chern);
  o.mutual_information =
      get_bool(obj, "observables", "mutual_information", o.mutual_information);
  o.correlations = get_bool(obj, "observables", "correlations", o.correlations);
  o.marker = get_bool(obj, "observables", "marker", o.marker);
  o.contour = get_bool(obj, "observables", "contour", o.contour);
  return o;
}

}  // namespace

const char* run_kind_name(RunKind kind) {
  switch (kind) {
    case RunKind::kSteer: return "steer";
    case RunKind::kAlphaSweep: return "alpha-sweep";
    case RunKind::kNoiseSweep: return "noise-sweep";
    case RunKind::kDomainWall: return "domain-wall";
    case RunKind::kLindblad: return "lindblad";
    case RunKind::kSymmetry: return "symmetry";
    case RunKind::kPovm: return "povm";
    case RunKind::kSelftest: return "oracle-selftest";
  }
  throw std::logic_error("run_kind_name: bad enum value");
}

RunKind run_kind_from_name(const std::string& name) {
  for (RunKind k : {RunKind::kSteer, RunKind::kAlphaSweep, RunKind::kNoiseSweep,
                    RunKind::kDomainWall, RunKind::kLindblad, RunKind::kSymmetry,
                    RunKind::kPovm, RunKind::kSelftest}) {
    if (name == run_kind_name(k)) return k;
  }
  fail("\"kind\" must be one of steer, alpha-sweep, noise-sweep, domain-wall, "
       "lindblad, symmetry, povm, oracle-selftest (got \"" + name + "\")");
}

RunConfig parse_run_config(const nlohmann::json& doc) {
  RunConfig cfg;
  check_keys(doc, "",
             {"schema_version", "kind", "seed", "out_dir", "threads",
              "protocol", "sweep", "lindblad", "checks", "observables",
              "compare_to"});
  cfg.schema_version =
      get_int(doc, "", "schema_version", cfg.schema_version);
  if (cfg.schema_version < 1)
    fail("\"schema_version\" must be >= 1");
  if (cfg.schema_version > kSchemaVersion)
    fail("\"schema_version\" " + std::to_string(cfg.schema_version) +
         " is newer than the supported version " +
         std::to_string(kSchemaVersion));
  if (!doc.contains("kind")) fail("required field \"kind\" is missing");
  cfg.kind = run_kind_from_name(get_string(doc, "", "kind", ""));
  cfg.seed = get_u64(doc, "", "seed", cfg.seed);
  cfg.out_dir = get_string(doc, "", "out_dir", cfg.out_dir);
  if (cfg.out_dir.empty()) fail("\"out_dir\" must be non-empty");
  cfg.threads = get_int(doc, "", "threads", cfg.threads);
  if (cfg.threads < 0) fail("\"threads\" must be >= 0 (0 = auto)");
  if (doc.contains("protocol")) cfg.protocol = parse_protocol(doc.at("protocol"));
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"));
  if (doc.contains("lindblad")) cfg.lindblad = parse_lindblad(doc.at("lindblad"));
  if (doc.contains("checks")) cfg.checks = parse_checks(doc.at("checks"));
  if (doc.contains("observables"))
    cfg.observables = parse_observables(doc.at("observables"));
  if (doc.contains("compare_to") && !doc.at("compare_to").is_null()) {
    cfg.compare_to = get_string(doc, "", "compare_to", "");
    if (cfg.compare_to->empty()) fail("\"compare_to\" must be non-empty");
  }

  const bool ensemble_kind =
      cfg.kind == RunKind::kSteer || cfg.kind == RunKind::kAlphaSweep ||
      cfg.kind == RunKind::kNoiseSweep || cfg.kind == RunKind::kDomainWall;
  if (ensemble_kind && cfg.observables.mutual_information &&
      cfg.protocol.L % 4 != 0)
    fail("\"protocol.L\" must be divisible by 4 when "
         "\"observables.mutual_information\" is enabled (strip width L/4)");

  // Kind-specific requirements.
  if (cfg.kind == RunKind::kAlphaSweep && cfg.sweep.alpha_values.empty())
    fail("kind alpha-sweep requires a non-empty \"sweep.alpha_values\"");
  if (cfg.kind == RunKind::kNoiseSweep && cfg.sweep.sigma_values.empty())
    fail("kind noise-sweep requires a non-empty \"sweep.sigma_values\"");
  if (cfg.kind == RunKind::kDomainWall && !cfg.protocol.alpha_right)
    fail("kind domain-wall requires \"protocol.alpha_right\"");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open \"" + path + "\"");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
  return parse_run_config(doc);
}

// Canonical echo: only inputs that determine the numbers. Execution-side
// settings (out_dir, threads, compare_to) are excluded so the same physics
// config hashes identically regardless of where or how wide it ran.
nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = cfg.schema_version;
  j["kind"] = run_kind_name(cfg.kind);
  j["seed"] = cfg.seed;
  nlohmann::json p;
  p["L"] = cfg.protocol.L;
  p["alpha"] = cfg.protocol.alpha;
  p["alpha_right"] = cfg.protocol.alpha_right
                         ? nlohmann::json(*cfg.protocol.alpha_right)
                         : nlohmann::json(nullptr);
  p["n_shell"] = cfg.protocol.n_shell;
  p["cycles"] = cfg.protocol.cycles;
  p["trajectories"] = cfg.protocol.trajectories;
  p["charge"] = cfg.protocol.charge;
  p["noise_sigma"] = cfg.protocol.noise_sigma;
  j["protocol"] = std::move(p);
  nlohmann::json s;
  s["alpha_values"] = cfg.sweep.alpha_values;
  s["sigma_values"] = cfg.sweep.sigma_values;
  j["sweep"] = std::move(s);
  nlohmann::json l;
  l["L"] = cfg.lindblad.L;
  l["alpha"] = cfg.lindblad.alpha;
  l["n_bar_a"] = cfg.lindblad.n_bar_a;
  l["t_max"] = cfg.lindblad.t_max;
  l["dt"] = cfg.lindblad.dt;
  l["record_every"] = cfg.lindblad.record_every;
  l["convergence_sizes"] = cfg.lindblad.convergence_sizes;
  j["lindblad"] = std::move(l);
  nlohmann::json c;
  c["symmetry_samples"] = cfg.checks.symmetry_samples;
  c["povm_samples"] = cfg.checks.povm_samples;
  c["oracle_cases"] = cfg.checks.oracle_cases;
  j["checks"] = std::move(c);
  nlohmann::json o;
  o["stride"] = cfg.observables.stride;
  o["chern"] = cfg.observables.chern;
  o["mutual_information"] = cfg.observables.mutual_information;
  o["correlations"] = cfg.observables.correlations;
  o["marker"] = cfg.observables.marker;
  o["contour"] = cfg.observables.contour;
  j["observables"] = std::move(o);
  return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
  std::uint64_t h = fnv1a64(run_config_to_json(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

nlohmann::json config_schema() {
  auto field = [](const char* type, nlohmann::json dflt, const char* doc) {
    nlohmann::json f;
    f["type"] = type;
    f["default"] = std::move(dflt);
    f["doc"] = doc;
    return f;
  };
  nlohmann::json s;
  s["schema_version"] =
      field("integer", kSchemaVersion,
            "document version; readers reject values newer than they support");
  s["kind"] = field(
      "string", "steer",
      "experiment kind: steer | alpha-sweep | noise-sweep | domain-wall | "
      "lindblad | symmetry | povm | oracle-selftest (required)");
  s["seed"] = field("integer", 1, "master RNG seed (unsigned 64-bit)");
  s["out_dir"] = field("string", "out", "artifact directory (created)");
  s["threads"] =
      field("integer", 0,
            "worker threads; 0 = FERMION_STEER_THREADS env or hardware");
  s["protocol.L"] = field("integer", 12, "lattice side (even, >= 4)");
  s["protocol.alpha"] = field("number", 1.5, "band-structure tuning parameter");
  s["protocol.alpha_right"] =
      field("number|null", nullptr,
            "if set, sites with x >= L/2 target this alpha (domain wall)");
  s["protocol.n_shell"] =
      field("integer", 2, "localized-mode truncation radius; -1 = untruncated");
  s["protocol.cycles"] = field("integer", 12, "protocol cycles per trajectory");
  s["protocol.trajectories"] = field("integer", 100, "ensemble size");
  s["protocol.charge"] =
      field("integer", -1,
            "initial total particle number in [0, 4L^2); -1 = 2L^2");
  s["protocol.noise_sigma"] =
      field("number", 0.0, "coherent-dephasing width in [0, 1]; 0 = off");
  s["sweep.alpha_values"] =
      field("array[number]", nlohmann::json::array(),
            "alpha grid (required for kind alpha-sweep)");
  s["sweep.sigma_values"] =
      field("array[number]", nlohmann::json::array(),
            "noise grid in [0, 1] (required for kind noise-sweep)");
  s["lindblad.L"] = field("integer", 24, "momentum-grid side");
  s["lindblad.alpha"] = field("number", 1.0, "tuning parameter (gapped)");
  s["lindblad.n_bar_a"] = field("number", 0.5, "ancilla occupation in [0, 1]");
  s["lindblad.t_max"] =
      field("number", -1.0,
            "integration horizon; <= 0 selects ten e-folds of the slowest "
            "analytic bound rate");
  s["lindblad.dt"] =
      field("number", -1.0, "RK4 step; <= 0 selects 0.01 / max rate");
  s["lindblad.record_every"] =
      field("integer", 10, "record a sample every this many steps");
  s["lindblad.convergence_sizes"] =
      field("array[integer]", nlohmann::json::array({24, 48}),
            "grid sides for the analytic convergence-time table");
  s["checks.symmetry_samples"] =
      field("integer", 100, "random generators per symmetry class");
  s["checks.povm_samples"] =
      field("integer", 50, "witness samples per inadmissible class");
  s["checks.oracle_cases"] =
      field("integer", 200, "randomized cases per oracle-battery operation");
  s["observables.stride"] =
      field("integer", 1, "record observables every this many cycles");
  s["observables.chern"] =
      field("boolean", true, "real-space Chern number (self-averaged)");
  s["observables.mutual_information"] =
      field("boolean", true, "mutual information between opposite strips");
  s["observables.correlations"] =
      field("boolean", true, "squared two-point correlation decay C_G(r)");
  s["observables.marker"] =
      field("boolean", false, "local Chern-marker field (ensemble mean)");
  s["observables.contour"] =
      field("boolean", false,
            "mixedness contour of the ensemble-averaged correlation matrix");
  s["compare_to"] =
      field("string|null", nullptr,
            "path of a previous report to diff against (regression fixture)");
  return s;
}

}  // namespace fsteer
