// SPDX-License-Identifier: MIT
//
// Python bindings for the correlation-matrix engine and the experiment
// runner. Matrices cross the boundary as NumPy complex arrays; run
// configurations and reports cross as JSON strings, so the Python surface
// sees exactly the documented artifact formats.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fsteer/chern_model.hpp"
#include "fsteer/config.hpp"
#include "fsteer/gaussian_core.hpp"
#include "fsteer/lindblad.hpp"
#include "fsteer/observables.hpp"
#include "fsteer/report.hpp"
#include "fsteer/runner.hpp"

namespace py = pybind11;
using namespace fsteer;
using nlohmann::json;

namespace {

ModeVector mode_of(const Vector& w) { return make_dense_mode(w); }

}  // namespace

PYBIND11_MODULE(fsteer_py, m) {
  m.doc() =
      "Free-fermion steering toward Chern insulators: Gaussian-state engine, "
      "lattice-model observables, and the deterministic experiment runner.";

  // ------------------------------------------------------------ randomness
  py::class_<RandomStream>(m, "RandomStream",
                           "Counter-based deterministic random stream.")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", py::overload_cast<>(&RandomStream::uniform),
           "Uniform draw in [0, 1).")
      .def("draws", &RandomStream::draws, "Number of raw draws consumed.")
      .def_static("derive_seed", &RandomStream::derive_seed, py::arg("master"),
                  py::arg("index"),
                  "Per-trajectory seed used by the ensemble runner.");

  // --------------------------------------------------------- Gaussian core
  m.def("product_state", &product_state, py::arg("dim"),
        py::arg("occupations"),
        "Correlation matrix of a Fock product state, G = diag(occupations).");
  m.def(
      "apply_unitary",
      [](Matrix g, const Matrix& t) {
        apply_unitary(g, t);
        return g;
      },
      py::arg("g"), py::arg("t"),
      "Returns t^T G conj(t) for a single-particle transfer matrix t.");
  m.def(
      "occupation_expectation",
      [](const Matrix& g, const Vector& w) {
        return occupation_expectation(g, mode_of(w));
      },
      py::arg("g"), py::arg("w"), "Occupation of the composite mode: w† G w.");
  m.def(
      "measurement_update",
      [](Matrix g, const Vector& w, int outcome) {
        const double p = measurement_update(g, mode_of(w), outcome);
        return py::make_tuple(g, p);
      },
      py::arg("g"), py::arg("w"), py::arg("outcome"),
      "Forced projective occupation measurement: returns (collapsed G, Born "
      "probability of the requested outcome).");
  m.def(
      "measure_occupation",
      [](Matrix g, const Vector& w, RandomStream& rng) {
        const MeasurementResult r = measure_occupation(g, mode_of(w), rng);
        return py::make_tuple(g, r.outcome, r.probability);
      },
      py::arg("g"), py::arg("w"), py::arg("rng"),
      "Sampled projective measurement: (collapsed G, outcome, probability).");
  m.def(
      "weak_measurement_update",
      [](Matrix g, const Vector& w, double kappa, int sign) {
        const double weight = weak_measurement_update(g, mode_of(w), kappa, sign);
        return py::make_tuple(g, weight);
      },
      py::arg("g"), py::arg("w"), py::arg("kappa"), py::arg("sign"),
      "Weak Kraus update K_sign = exp(sign*kappa*(n-1/2)): (G', weight).");
  m.def(
      "fswap",
      [](Matrix g, const Vector& a, const Vector& b) {
        fswap(g, mode_of(a), mode_of(b));
        return g;
      },
      py::arg("g"), py::arg("a"), py::arg("b"),
      "Fermionic SWAP of two orthonormal modes.");
  m.def("purity_deviation", &purity_deviation, py::arg("g"),
        "max |G^2 - G| entrywise.");
  m.def("total_charge", &total_charge, py::arg("g"), "Re tr G.");

  // ------------------------------------------------------- model and fields
  m.def("ground_state_correlation", &ground_state_correlation, py::arg("L"),
        py::arg("alpha"),
        "Half-filled lower-band correlation matrix on the L x L two-orbital "
        "lattice (throws for gapless alpha in {0, +2, -2}).");
  m.def("chern_real_space", &chern_real_space, py::arg("g"), py::arg("L"),
        py::arg("self_average") = true,
        "Real-space Chern number from the three-wedge trace formula.");
  m.def("chern_marker", &chern_marker, py::arg("g"), py::arg("L"),
        "Local Chern-marker field as a row-major L*L list.");
  m.def("correlation_decay", &correlation_decay, py::arg("g"), py::arg("L"),
        "Disorder-averaged squared two-point moment C(r), r = 0..L/2.");
  m.def(
      "mutual_information",
      [](const Matrix& g, int L) {
        const MutualInformationResult r = mutual_information(g, L);
        py::dict d;
        d["s_a"] = r.s_a;
        d["s_b"] = r.s_b;
        d["s_ab"] = r.s_ab;
        d["mi"] = r.mi;
        return d;
      },
      py::arg("g"), py::arg("L"),
      "Mutual information between opposite width-L/4 strips (nats).");
  m.def("convergence_time", &convergence_time, py::arg("L"), py::arg("alpha"),
        "Analytic relaxation-time bound 1/min((1-n̄)δ₊, n̄δ₋) at n̄ = 1/2.");

  // ----------------------------------------------------------- orchestration
  m.def(
      "parse_config",
      [](const std::string& config_json) {
        const RunConfig cfg = parse_run_config(json::parse(config_json));
        return run_config_to_json(cfg).dump(2);
      },
      py::arg("config_json"),
      "Validates a config document and returns the canonical materialized "
      "echo (all defaults filled in).");
  m.def(
      "config_hash",
      [](const std::string& config_json) {
        return config_hash_hex(parse_run_config(json::parse(config_json)));
      },
      py::arg("config_json"),
      "16-hex-digit FNV-1a hash of the canonical config serialization.");
  m.def(
      "config_schema", [] { return config_schema().dump(2); },
      "Machine-readable field-by-field config schema.");
  m.def(
      "run_ensemble",
      [](const std::string& config_json, int threads) {
        const RunConfig cfg = parse_run_config(json::parse(config_json));
        if (cfg.kind != RunKind::kSteer && cfg.kind != RunKind::kDomainWall)
          throw std::invalid_argument(
              "run_ensemble: config kind must be steer or domain-wall");
        EnsembleSpec spec = ensemble_spec_from(
            cfg, resolve_threads(threads > 0 ? threads : cfg.threads));
        const EnsembleResult res = ::fsteer::run_ensemble(spec);
        return steer_report(cfg, res).dump(2);
      },
      py::arg("config_json"), py::arg("threads") = 0,
      "Runs a steer/domain-wall trajectory ensemble and returns the report "
      "JSON (deterministic in (config, seed), independent of threads).");
  m.def(
      "oracle_selftest",
      [](int cases_per_op, std::uint64_t seed) {
        const OracleBatteryReport rep = run_oracle_battery(cases_per_op, seed);
        py::dict d;
        d["pass"] = rep.pass;
        d["tolerance"] = rep.tolerance;
        py::dict ops;
        for (const OracleOpReport& op : rep.ops)
          ops[op.op.c_str()] = op.max_error;
        d["max_error"] = ops;
        return d;
      },
      py::arg("cases_per_op") = 50, py::arg("seed") = 1,
      "Randomized engine-vs-Fock-oracle equivalence battery on 2-4 modes.");
}
