// fermion-steer: adaptive steering of free fermions toward Chern insulators,
// with sweep/noise/domain-wall experiments, the occupation-density ODE,
// the symmetry-class table, the POVM admissibility matrix, and a randomized
// engine-vs-oracle selftest. One subcommand per experiment kind; every run
// consumes a JSON config and writes deterministic artifacts to --out.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsteer/config.hpp"
#include "fsteer/report.hpp"
#include "fsteer/runner.hpp"

namespace {

using fsteer::RunConfig;
using fsteer::RunKind;
using nlohmann::json;

std::string pad2(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

void write_field_csvs(const std::string& dir, const fsteer::EnsembleResult& r) {
  for (const fsteer::CycleStats& c : r.cycles) {
    if (!c.marker_mean.empty())
      fsteer::write_text_file(dir + "/marker_cycle_" + pad2(c.cycle) + ".csv",
                              fsteer::field_csv(c.marker_mean, r.L));
    if (!c.contour_gbar.empty())
      fsteer::write_text_file(dir + "/contour_cycle_" + pad2(c.cycle) + ".csv",
                              fsteer::field_csv(c.contour_gbar, r.L));
  }
}

void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const json& extra) {
  json m;
  m["schema_version"] = fsteer::kSchemaVersion;
  m["kind"] = fsteer::run_kind_name(cfg.kind);
  m["config_hash"] = fsteer::config_hash_hex(cfg);
  m["status"] = "failed";
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  fsteer::write_json_file(dir + "/manifest.json", m);
}

fsteer::EnsembleSpec spec_with_progress(const RunConfig& cfg, int threads,
                                        const std::string& label) {
  fsteer::EnsembleSpec spec = fsteer::ensemble_spec_from(cfg, threads);
  spec.progress = [label](int done, int total) {
    std::fprintf(stderr, "[%s] trajectory %d/%d\n", label.c_str(), done, total);
  };
  return spec;
}

// Returns the process exit code.
int dispatch(const RunConfig& cfg, int threads, const std::string& out_dir) {
  json report;
  bool pass = true;

  switch (cfg.kind) {
    case RunKind::kSteer:
    case RunKind::kDomainWall: {
      const std::string label = fsteer::run_kind_name(cfg.kind);
      fsteer::EnsembleSpec spec = spec_with_progress(cfg, threads, label);
      fsteer::EnsembleResult res;
      try {
        res = fsteer::run_ensemble(spec);
      } catch (const fsteer::EnsembleAbort& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        json extra;
        extra["error"] = e.what();
        extra["completed_trajectories"] = e.completed;
        extra["failed_trajectory"] = e.failed_index;
        extra["failed_seed"] = e.failed_seed;
        write_manifest(out_dir, cfg, extra);
        return 1;
      }
      report = fsteer::steer_report(cfg, res);
      fsteer::write_json_file(out_dir + "/report.json", report);
      fsteer::write_text_file(out_dir + "/per_cycle.csv",
                              fsteer::per_cycle_csv(res));
      write_field_csvs(out_dir, res);
      break;
    }

    case RunKind::kAlphaSweep:
    case RunKind::kNoiseSweep: {
      const bool noise = cfg.kind == RunKind::kNoiseSweep;
      const std::string axis = noise ? "sigma" : "alpha";
      const std::vector<double>& values =
          noise ? cfg.sweep.sigma_values : cfg.sweep.alpha_values;
      std::vector<fsteer::SweepPoint> points;
      for (std::size_t i = 0; i < values.size(); ++i) {
        fsteer::EnsembleSpec spec = spec_with_progress(
            cfg, threads, axis + "=" + fsteer::format_double(values[i]));
        if (noise)
          spec.noise_sigma = values[i];
        else
          spec.alpha = values[i];
        spec.seed =
            fsteer::RandomStream::derive_seed(cfg.seed, static_cast<int>(i));
        fsteer::SweepPoint pt;
        pt.value = values[i];
        try {
          pt.result = fsteer::run_ensemble(spec);
        } catch (const fsteer::EnsembleAbort& e) {
          std::fprintf(stderr, "error: %s\n", e.what());
          json extra;
          extra["error"] = e.what();
          extra["completed_points"] = static_cast<int>(points.size());
          extra["failed_point"] = values[i];
          extra["completed_trajectories_in_point"] = e.completed;
          extra["failed_trajectory"] = e.failed_index;
          extra["failed_seed"] = e.failed_seed;
          write_manifest(out_dir, cfg, extra);
          if (!points.empty()) {
            fsteer::write_json_file(
                out_dir + "/report_partial.json",
                fsteer::sweep_report(cfg, axis, points));
          }
          return 1;
        }
        points.push_back(std::move(pt));
      }
      report = fsteer::sweep_report(cfg, axis, points);
      fsteer::write_json_file(out_dir + "/report.json", report);
      fsteer::write_text_file(out_dir + "/sweep.csv",
                              fsteer::sweep_csv(axis, points));
      for (std::size_t i = 0; i < points.size(); ++i)
        fsteer::write_text_file(
            out_dir + "/per_cycle_" + pad2(static_cast<int>(i)) + ".csv",
            fsteer::per_cycle_csv(points[i].result));
      break;
    }

    case RunKind::kLindblad: {
      fsteer::LindbladRunOutput out = fsteer::run_lindblad(cfg.lindblad, cfg.seed);
      report = fsteer::lindblad_report(cfg, out);
      fsteer::write_json_file(out_dir + "/report.json", report);
      fsteer::write_text_file(out_dir + "/trace.csv",
                              fsteer::lindblad_csv(out.trace));
      break;
    }

    case RunKind::kSymmetry: {
      auto rows =
          fsteer::run_symmetry_table(cfg.checks.symmetry_samples, cfg.seed);
      report = fsteer::symmetry_report(cfg, rows);
      fsteer::write_json_file(out_dir + "/report.json", report);
      for (const auto& r : rows)
        std::printf("%-5s -> %-5s %s\n", fsteer::class_name(r.generator_class).c_str(),
                    fsteer::class_name(r.partner).c_str(),
                    r.matches ? "PASS" : "FAIL");
      pass = report["pass"].get<bool>();
      break;
    }

    case RunKind::kPovm: {
      auto rows = fsteer::run_povm_matrix(cfg.checks.povm_samples, cfg.seed);
      report = fsteer::povm_report(cfg, rows);
      fsteer::write_json_file(out_dir + "/report.json", report);
      for (const auto& r : rows)
        std::printf("%-5s %-14s %s\n", fsteer::class_name(r.averaged).c_str(),
                    r.check.c_str(), r.pass ? "PASS" : "FAIL");
      pass = report["pass"].get<bool>();
      break;
    }

    case RunKind::kSelftest: {
      auto oracle = fsteer::run_oracle_battery(cfg.checks.oracle_cases,
                                               fsteer::RandomStream::derive_seed(
                                                   cfg.seed, 1));
      for (const auto& op : oracle.ops) {
        std::printf("oracle %-24s max_error=%.3e %s\n", op.op.c_str(),
                    op.max_error, op.failing_seeds.empty() ? "PASS" : "FAIL");
        for (std::uint64_t s : op.failing_seeds)
          std::printf("  reproduce with case seed %llu\n",
                      static_cast<unsigned long long>(s));
      }
      auto sym = fsteer::run_symmetry_table(
          cfg.checks.symmetry_samples,
          fsteer::RandomStream::derive_seed(cfg.seed, 2));
      for (const auto& r : sym)
        std::printf("symmetry %-5s -> %-5s %s\n",
                    fsteer::class_name(r.generator_class).c_str(),
                    fsteer::class_name(r.partner).c_str(),
                    r.matches ? "PASS" : "FAIL");
      auto povm = fsteer::run_povm_matrix(
          cfg.checks.povm_samples, fsteer::RandomStream::derive_seed(cfg.seed, 3));
      for (const auto& r : povm)
        std::printf("povm %-5s %-14s %s\n", fsteer::class_name(r.averaged).c_str(),
                    r.check.c_str(), r.pass ? "PASS" : "FAIL");
      report = fsteer::selftest_report(cfg, oracle, sym, povm);
      fsteer::write_json_file(out_dir + "/report.json", report);
      pass = report["pass"].get<bool>();
      break;
    }
  }

  if (cfg.compare_to) {
    const json fixture = fsteer::load_report_file(*cfg.compare_to);
    const std::vector<std::string> diffs =
        fsteer::compare_reports(report, fixture);
    if (!diffs.empty()) {
      std::fprintf(stderr, "fixture comparison against %s failed:\n",
                   cfg.compare_to->c_str());
      for (const std::string& d : diffs)
        std::fprintf(stderr, "  %s\n", d.c_str());
      return 1;
    }
    std::fprintf(stderr, "fixture comparison against %s: match\n",
                 cfg.compare_to->c_str());
  }

  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fermion-steer: measurement-and-feedforward preparation of Chern "
      "insulators (trajectory ensembles, sweeps, ODE convergence, symmetry "
      "and POVM verification)"};
  app.require_subcommand(0, 1);

  bool emit_schema = false;
  app.add_flag("--emit-schema", emit_schema,
               "print the JSON config schema and exit");

  std::string config_path;
  std::string out_override;
  std::int64_t seed_override = -1;
  int threads_override = 0;

  const struct {
    RunKind kind;
    const char* help;
  } kinds[] = {
      {RunKind::kSteer, "run one trajectory ensemble at fixed parameters"},
      {RunKind::kAlphaSweep, "ensemble per alpha value (topology scan)"},
      {RunKind::kNoiseSweep, "ensemble per noise width (robustness scan)"},
      {RunKind::kDomainWall, "two-phase target with walls at x=0 and x=L/2"},
      {RunKind::kLindblad, "integrate the occupation-density equations"},
      {RunKind::kSymmetry, "verify the ten-class evolution-operator table"},
      {RunKind::kPovm, "two-outcome POVM constructions and witnesses"},
      {RunKind::kSelftest, "randomized engine-vs-oracle battery plus tables"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& k : kinds) {
    CLI::App* sub = app.add_subcommand(fsteer::run_kind_name(k.kind), k.help);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--seed", seed_override, "override config seed");
    sub->add_option("--out", out_override, "override config out_dir");
    sub->add_option("--threads", threads_override,
                    "worker threads (0 = FERMION_STEER_THREADS env or "
                    "hardware)");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  if (emit_schema) {
    std::printf("%s\n", fsteer::config_schema().dump(2).c_str());
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    RunConfig cfg = fsteer::load_run_config(config_path);
    const std::string sub_name = app.get_subcommands().front()->get_name();
    if (sub_name != fsteer::run_kind_name(cfg.kind))
      throw std::invalid_argument("config kind \"" +
                                  std::string(fsteer::run_kind_name(cfg.kind)) +
                                  "\" does not match subcommand \"" + sub_name +
                                  "\"");
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (threads_override > 0) cfg.threads = threads_override;

    const int threads = fsteer::resolve_threads(cfg.threads);
    std::filesystem::create_directories(cfg.out_dir);
    // A fresh run supersedes any failure manifest from a previous attempt.
    std::filesystem::remove(cfg.out_dir + "/manifest.json");

    const int code = dispatch(cfg, threads, cfg.out_dir);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    json meta;
    meta["wall_seconds"] = wall;
    meta["threads"] = threads;
    meta["exit_code"] = code;
    fsteer::write_json_file(cfg.out_dir + "/run_meta.json", meta);
    return code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
