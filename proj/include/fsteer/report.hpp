// Report assembly and persistence. Every JSON report embeds schema_version,
// the materialized config echo, its content hash, and the master seed, and is
// a deterministic function of (config, seed): identical runs produce byte-
// identical files. Volatile facts (wall time, resolved thread count) go into
// a run_meta.json sidecar instead.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fsteer/config.hpp"
#include "fsteer/runner.hpp"

namespace fsteer {

// %.17g round-trip formatting; nan/inf spelled out.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
// Pretty-printed (2-space) JSON with trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& doc);

// Common preamble: schema_version, kind, seed, config echo + hash.
nlohmann::json report_header(const RunConfig& cfg);

nlohmann::json ensemble_to_json(const EnsembleResult& r);
nlohmann::json steer_report(const RunConfig& cfg, const EnsembleResult& r);
nlohmann::json sweep_report(const RunConfig& cfg, const std::string& axis,
                            const std::vector<SweepPoint>& points);
nlohmann::json lindblad_report(const RunConfig& cfg,
                               const LindbladRunOutput& out);
nlohmann::json symmetry_report(const RunConfig& cfg,
                               const std::vector<CorrespondenceResult>& rows);
nlohmann::json povm_report(const RunConfig& cfg,
                           const std::vector<PovmRow>& rows);
nlohmann::json selftest_report(const RunConfig& cfg,
                               const OracleBatteryReport& oracle,
                               const std::vector<CorrespondenceResult>& sym,
                               const std::vector<PovmRow>& povm);

// CSV bodies (header line + rows, '\n' separated, trailing newline).
std::string per_cycle_csv(const EnsembleResult& r);
std::string sweep_csv(const std::string& axis,
                      const std::vector<SweepPoint>& points);
std::string lindblad_csv(const LindbladTrace& trace);
// An L x L scalar field (site-major vector) as L CSV rows of L columns.
std::string field_csv(const std::vector<double>& field, int L);

// Reads a report, rejecting documents with a newer schema_version.
nlohmann::json load_report_file(const std::string& path);

// Recursive numeric diff for fixture comparison; returns human-readable
// mismatch descriptions (empty = match). Numbers compare with absolute
// tolerance `tol` scaled by max(1, magnitude).
std::vector<std::string> compare_reports(const nlohmann::json& got,
                                         const nlohmann::json& want,
                                         double tol = 1e-9);

}  // namespace fsteer
