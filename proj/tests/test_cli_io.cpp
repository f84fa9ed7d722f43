// SPDX-License-Identifier: MIT
//
// Configuration, serialization and orchestration: strict parsing with named
// rejections, the canonical echo/hash that excludes execution-side settings,
// report round-trips with schema gating, numeric fixture comparison, and the
// worker-count independence of ensemble results.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "fsteer/config.hpp"
#include "fsteer/report.hpp"
#include "fsteer/runner.hpp"

using namespace fsteer;
using nlohmann::json;
using doctest::Contains;

namespace {

json minimal(const std::string& kind) { return json{{"kind", kind}}; }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE_BEGIN("cli_io");

TEST_CASE("run kind names round-trip") {
  for (RunKind k :
       {RunKind::kSteer, RunKind::kAlphaSweep, RunKind::kNoiseSweep,
        RunKind::kDomainWall, RunKind::kLindblad, RunKind::kSymmetry,
        RunKind::kPovm, RunKind::kSelftest}) {
    CHECK(run_kind_from_name(run_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(run_kind_from_name("warp"), std::invalid_argument);
}

TEST_CASE("a minimal document materializes all defaults") {
  const RunConfig cfg = parse_run_config(minimal("steer"));
  CHECK(cfg.kind == RunKind::kSteer);
  CHECK(cfg.schema_version == kSchemaVersion);
  CHECK(cfg.seed == 1);
  CHECK(cfg.protocol.L == 12);
  CHECK(cfg.protocol.alpha == 1.5);
  CHECK(cfg.protocol.n_shell == 2);
  CHECK(cfg.protocol.trajectories == 100);
  CHECK(cfg.protocol.charge == -1);
  CHECK_FALSE(cfg.protocol.alpha_right.has_value());
  CHECK(cfg.lindblad.n_bar_a == 0.5);
  CHECK(cfg.observables.stride == 1);
  CHECK(cfg.observables.chern);
  CHECK_FALSE(cfg.observables.marker);
}

TEST_CASE("unknown fields are rejected by their full dotted name") {
  json doc = minimal("steer");
  doc["protocol"]["shells"] = 3;
  CHECK_THROWS_WITH_AS(parse_run_config(doc),
                       Contains("unknown field \"protocol.shells\""),
                       std::invalid_argument);
  json top = minimal("steer");
  top["colour"] = "red";
  CHECK_THROWS_WITH_AS(parse_run_config(top),
                       Contains("unknown field \"colour\""),
                       std::invalid_argument);
}

TEST_CASE("the kind field is required and validated") {
  CHECK_THROWS_WITH_AS(parse_run_config(json::object()),
                       Contains("required field \"kind\" is missing"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_run_config(minimal("quench")),
                       Contains("\"kind\" must be one of"),
                       std::invalid_argument);
}

TEST_CASE("newer schema versions are refused") {
  json doc = minimal("steer");
  doc["schema_version"] = kSchemaVersion + 1;
  CHECK_THROWS_WITH_AS(parse_run_config(doc), Contains("newer"),
                       std::invalid_argument);
}

TEST_CASE("numeric validation names the offending field") {
  json odd = minimal("steer");
  odd["protocol"]["L"] = 7;
  CHECK_THROWS_WITH_AS(parse_run_config(odd),
                       Contains("\"protocol.L\" must be an even integer >= 4"),
                       std::invalid_argument);

  json charge = minimal("steer");
  charge["protocol"]["charge"] = 4 * 12 * 12;  // one past the last mode
  CHECK_THROWS_WITH_AS(parse_run_config(charge),
                       Contains("\"protocol.charge\""),
                       std::invalid_argument);

  json sigma = minimal("steer");
  sigma["protocol"]["noise_sigma"] = 1.2;
  CHECK_THROWS_WITH_AS(parse_run_config(sigma),
                       Contains("\"protocol.noise_sigma\""),
                       std::invalid_argument);

  json type_err = minimal("steer");
  type_err["protocol"]["cycles"] = "ten";
  CHECK_THROWS_WITH_AS(parse_run_config(type_err),
                       Contains("\"protocol.cycles\" must be an integer"),
                       std::invalid_argument);

  json mi = minimal("steer");
  mi["protocol"]["L"] = 10;  // not divisible by 4, MI strips undefined
  CHECK_THROWS_WITH_AS(parse_run_config(mi),
                       Contains("divisible by 4"), std::invalid_argument);
  mi["observables"]["mutual_information"] = false;  // now acceptable
  CHECK_NOTHROW(parse_run_config(mi));
}

TEST_CASE("theory-run validation rejects undefined setups") {
  json gapless = minimal("lindblad");
  gapless["lindblad"]["alpha"] = 2.0;
  CHECK_THROWS_WITH_AS(parse_run_config(gapless),
                       Contains("\"lindblad.alpha\" is gapless"),
                       std::invalid_argument);

  json filling = minimal("lindblad");
  filling["lindblad"]["n_bar_a"] = 1.0;
  CHECK_THROWS_WITH_AS(parse_run_config(filling),
                       Contains("\"lindblad.t_max\" must be set explicitly"),
                       std::invalid_argument);
  filling["lindblad"]["t_max"] = 2.5;
  CHECK_NOTHROW(parse_run_config(filling));
}

TEST_CASE("sweep and wall kinds require their axes") {
  CHECK_THROWS_WITH_AS(parse_run_config(minimal("alpha-sweep")),
                       Contains("requires a non-empty \"sweep.alpha_values\""),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_run_config(minimal("noise-sweep")),
                       Contains("requires a non-empty \"sweep.sigma_values\""),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_run_config(minimal("domain-wall")),
                       Contains("requires \"protocol.alpha_right\""),
                       std::invalid_argument);

  json ok = minimal("alpha-sweep");
  ok["sweep"]["alpha_values"] = {1.5, 2.5};
  CHECK_NOTHROW(parse_run_config(ok));
}

TEST_CASE("execution-side settings do not change the canonical form") {
  json a = minimal("steer");
  json b = minimal("steer");
  b["out_dir"] = "elsewhere/deep";
  b["threads"] = 13;
  b["compare_to"] = "fixture.json";
  const RunConfig ca = parse_run_config(a);
  const RunConfig cb = parse_run_config(b);
  CHECK(run_config_to_json(ca) == run_config_to_json(cb));
  CHECK(config_hash_hex(ca) == config_hash_hex(cb));
  // Physics fields do change it.
  json c = minimal("steer");
  c["seed"] = 2;
  CHECK(config_hash_hex(parse_run_config(c)) != config_hash_hex(ca));
}

TEST_CASE("the canonical hash of the default run is frozen") {
  // Guards the stability of the canonical serialization: if this moves,
  // every archived report hash silently changes meaning.
  const RunConfig cfg = parse_run_config(minimal("steer"));
  CHECK(config_hash_hex(cfg) == "17507f3b72291c14");
}

TEST_CASE("the byte hash matches the published test vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("abc") == 0xe71fa2190541574bull);
}

TEST_CASE("the emitted schema documents every section") {
  const json schema = config_schema();
  CHECK(schema.contains("kind"));
  CHECK(schema.contains("protocol.L"));
  CHECK(schema.contains("protocol.noise_sigma"));
  CHECK(schema.contains("lindblad.n_bar_a"));
  CHECK(schema.contains("checks.oracle_cases"));
  CHECK(schema.contains("observables.contour"));
  for (const auto& [key, val] : schema.items()) {
    INFO(key);
    CHECK(val.contains("type"));
    CHECK(val.contains("doc"));
  }
}

TEST_CASE("doubles are printed with full round-trip precision") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "nan");
  const double parsed = std::strtod(format_double(1.0 / 3.0).c_str(), nullptr);
  CHECK(parsed == 1.0 / 3.0);
}

TEST_CASE("field tables reject mismatched sizes") {
  CHECK_THROWS_WITH_AS(field_csv({1.0, 2.0, 3.0}, 2),
                       "field_csv: field size != L*L", std::invalid_argument);
  const std::string csv = field_csv({1.0, 2.0, 3.0, 4.0}, 2);
  CHECK(csv == "1,2\n3,4\n");
}

TEST_CASE("report comparison tolerates round-off but flags real drift") {
  json a = {{"x", 1.0}, {"nested", {{"y", json::array({1.0, 2.0})}}}};
  json b = a;
  CHECK(compare_reports(a, b).empty());

  b["nested"]["y"][1] = 2.0 + 1e-12;  // within tolerance
  CHECK(compare_reports(a, b, 1e-9).empty());

  b["nested"]["y"][1] = 2.5;  // real drift, named by path
  const auto diffs = compare_reports(a, b, 1e-9);
  REQUIRE(!diffs.empty());
  CHECK(diffs[0].find("nested") != std::string::npos);

  json missing = {{"x", 1.0}};
  CHECK(!compare_reports(a, missing).empty());
}

TEST_CASE("report files round-trip and reject newer layouts") {
  const auto path = temp_file("fsteer_test_report.json");
  json doc = {{"schema_version", kSchemaVersion}, {"payload", 7}};
  write_json_file(path.string(), doc);
  CHECK(load_report_file(path.string())["payload"] == 7);

  json newer = {{"schema_version", kSchemaVersion + 1}};
  write_json_file(path.string(), newer);
  CHECK_THROWS_WITH_AS(load_report_file(path.string()), Contains("newer"),
                       std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("thread resolution prefers explicit, then environment") {
  CHECK(resolve_threads(3) == 3);
  ::setenv("FERMION_STEER_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  ::unsetenv("FERMION_STEER_THREADS");
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("ensemble results are independent of the worker count") {
  EnsembleSpec spec;
  spec.L = 4;
  spec.alpha = 1.5;
  spec.n_shell = -1;
  spec.cycles = 2;
  spec.trajectories = 3;
  spec.seed = 2718;
  spec.observables.stride = 1;
  spec.observables.marker = true;
  spec.observables.contour = true;

  spec.threads = 1;
  const EnsembleResult serial = run_ensemble(spec);
  spec.threads = 3;
  const EnsembleResult parallel = run_ensemble(spec);

  // Byte-identical serialized results: the reduction order is canonical.
  CHECK(ensemble_to_json(serial).dump() == ensemble_to_json(parallel).dump());

  // Per-trajectory seeds follow the documented derivation chain.
  REQUIRE(serial.trajectory_seeds.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(serial.trajectory_seeds[i] ==
          RandomStream::derive_seed(2718, static_cast<std::uint64_t>(i)));
}

TEST_CASE("ensemble specs inherit the configured protocol") {
  json doc = minimal("steer");
  doc["protocol"]["L"] = 8;
  doc["protocol"]["alpha"] = 2.5;
  doc["protocol"]["trajectories"] = 4;
  doc["seed"] = 99;
  const RunConfig cfg = parse_run_config(doc);
  const EnsembleSpec spec = ensemble_spec_from(cfg, 2);
  CHECK(spec.L == 8);
  CHECK(spec.alpha == 2.5);
  CHECK(spec.trajectories == 4);
  CHECK(spec.seed == 99);
  CHECK(spec.threads == 2);
}

TEST_SUITE_END();
