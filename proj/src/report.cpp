#include "fsteer/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsteer {

namespace {

using nlohmann::json;

json signature_json(const AZSignature& s) {
  json j;
  j["trs"] = s.trs;
  j["phs"] = s.phs;
  j["chiral"] = s.chiral;
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << content;
  if (!out) throw std::runtime_error("write failed for \"" + path + "\"");
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

nlohmann::json report_header(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = run_kind_name(cfg.kind);
  j["seed"] = cfg.seed;
  j["config"] = run_config_to_json(cfg);
  j["config_hash"] = config_hash_hex(cfg);
  return j;
}

nlohmann::json ensemble_to_json(const EnsembleResult& r) {
  json j;
  j["L"] = r.L;
  j["trajectories"] = r.trajectories;

  json rows = json::array();
  for (const CycleStats& c : r.cycles) {
    json row;
    row["cycle"] = c.cycle;
    row["chern_mean"] = c.chern_mean;
    row["chern_sem"] = c.chern_sem;
    row["mi_mean"] = c.mi_mean;
    row["purity_max"] = c.purity_max;
    row["charge_drift_max"] = c.charge_drift_max;
    if (!c.corr_mean.empty()) row["corr"] = c.corr_mean;
    if (!c.marker_mean.empty()) row["marker"] = c.marker_mean;
    if (!c.contour_gbar.empty()) row["contour_gbar"] = c.contour_gbar;
    rows.push_back(std::move(row));
  }
  j["per_cycle"] = std::move(rows);

  json fin;
  fin["chern_mean"] = r.chern_final_mean;
  fin["chern_sem"] = r.chern_final_sem;
  fin["mi_mean"] = r.mi_final_mean;
  fin["chern_per_trajectory"] = r.chern_final;
  if (!r.corr_final_mean.empty()) fin["corr_mean"] = r.corr_final_mean;
  j["final"] = std::move(fin);

  json ens;
  ens["chern"] = r.chern_gbar;
  ens["chern_regularized"] = r.regularized_valid
                                 ? json(r.chern_gbar_regularized)
                                 : json(nullptr);
  ens["spectral_gap"] = r.spectral_gap_gbar;
  ens["closest_to_half"] = r.gbar_closest_to_half;
  ens["corr"] = r.corr_gbar;
  j["ensemble_averaged"] = std::move(ens);

  json hyg;
  hyg["purity_max"] = r.purity_max;
  hyg["charge_drift_max"] = r.charge_drift_max;
  hyg["fswap_total"] = r.fswap_total;
  hyg["clamp_events"] = r.clamp_events;
  j["hygiene"] = std::move(hyg);

  j["trajectory_seeds"] = r.trajectory_seeds;
  return j;
}

nlohmann::json steer_report(const RunConfig& cfg, const EnsembleResult& r) {
  json j = report_header(cfg);
  j["ensemble"] = ensemble_to_json(r);
  return j;
}

nlohmann::json sweep_report(const RunConfig& cfg, const std::string& axis,
                            const std::vector<SweepPoint>& points) {
  json j = report_header(cfg);
  j["axis"] = axis;
  json pts = json::array();
  for (const SweepPoint& p : points) {
    json pt;
    pt[axis] = p.value;
    pt["ensemble"] = ensemble_to_json(p.result);
    pts.push_back(std::move(pt));
  }
  j["points"] = std::move(pts);
  return j;
}

nlohmann::json lindblad_report(const RunConfig& cfg,
                               const LindbladRunOutput& out) {
  json j = report_header(cfg);
  json l;
  l["t_conv"] = out.t_conv;
  json sizes = json::array();
  for (const auto& [sz, tc] : out.t_conv_by_size) {
    json e;
    e["L"] = sz;
    e["t_conv"] = tc;
    sizes.push_back(std::move(e));
  }
  l["t_conv_by_size"] = std::move(sizes);
  l["delta_plus"] = out.trace.delta_plus;
  l["delta_minus"] = out.trace.delta_minus;
  l["dt"] = out.trace.dt;
  l["bound_slack_plus"] = out.bound_slack_plus;
  l["bound_slack_minus"] = out.bound_slack_minus;
  l["final_gbar_plus"] = out.final_gbar_plus;
  l["final_dev_minus"] = out.final_dev_minus;
  l["final_max_coh"] = out.final_max_coh;
  l["samples"] = out.trace.samples.size();
  j["lindblad"] = std::move(l);
  return j;
}

nlohmann::json symmetry_report(const RunConfig& cfg,
                               const std::vector<CorrespondenceResult>& rows) {
  json j = report_header(cfg);
  json table = json::array();
  bool all = true;
  for (const CorrespondenceResult& r : rows) {
    json row;
    row["generator_class"] = class_name(r.generator_class);
    row["averaged_class"] = class_name(r.partner);
    row["expected_signature"] = signature_json(r.expected);
    row["measured_signature"] = signature_json(r.measured.signature);
    row["trs_candidate"] = r.measured.trs_candidate;
    row["phs_candidate"] = r.measured.phs_candidate;
    row["chiral_candidate"] = r.measured.chiral_candidate;
    row["ambiguous"] = r.measured.ambiguous;
    row["max_constraint_residual"] = r.max_constraint_residual;
    row["max_closure_residual"] = r.max_closure_residual;
    row["max_group_residual"] = r.max_group_residual;
    row["samples"] = r.n_samples;
    row["pass"] = r.matches;
    all = all && r.matches;
    table.push_back(std::move(row));
  }
  j["rows"] = std::move(table);
  j["pass"] = all;
  return j;
}

nlohmann::json povm_report(const RunConfig& cfg,
                           const std::vector<PovmRow>& rows) {
  json j = report_header(cfg);
  json table = json::array();
  bool all = true;
  for (const PovmRow& r : rows) {
    json row;
    row["averaged_class"] = class_name(r.averaged);
    row["check"] = r.check;
    row["samples"] = r.samples;
    if (r.check == "construction")
      row["construction_residual"] = r.construction_residual;
    else if (r.check == "witness") {
      row["min_slack"] = r.min_slack;
      row["max_mismatch"] = r.max_mismatch;
    } else {
      row["max_structural_residual"] = r.max_structural_residual;
    }
    row["pass"] = r.pass;
    all = all && r.pass;
    table.push_back(std::move(row));
  }
  j["rows"] = std::move(table);
  j["pass"] = all;
  return j;
}

nlohmann::json selftest_report(const RunConfig& cfg,
                               const OracleBatteryReport& oracle,
                               const std::vector<CorrespondenceResult>& sym,
                               const std::vector<PovmRow>& povm) {
  json j = report_header(cfg);
  json orc;
  orc["tolerance"] = oracle.tolerance;
  json ops = json::array();
  for (const OracleOpReport& r : oracle.ops) {
    json op;
    op["op"] = r.op;
    op["cases"] = r.cases;
    op["max_error"] = r.max_error;
    op["failing_seeds"] = r.failing_seeds;
    ops.push_back(std::move(op));
  }
  orc["ops"] = std::move(ops);
  orc["pass"] = oracle.pass;
  j["oracle_battery"] = std::move(orc);
  j["symmetry"] = symmetry_report(cfg, sym)["rows"];
  j["povm"] = povm_report(cfg, povm)["rows"];
  bool all = oracle.pass;
  for (const CorrespondenceResult& r : sym) all = all && r.matches;
  for (const PovmRow& r : povm) all = all && r.pass;
  j["pass"] = all;
  return j;
}

std::string per_cycle_csv(const EnsembleResult& r) {
  std::ostringstream out;
  const bool with_corr =
      !r.cycles.empty() && !r.cycles.front().corr_mean.empty();
  out << "cycle,chern_mean,chern_sem,mi_mean,purity_max,charge_drift_max";
  if (with_corr)
    for (std::size_t k = 0; k < r.cycles.front().corr_mean.size(); ++k)
      out << ",corr_" << k;
  out << "\n";
  for (const CycleStats& c : r.cycles) {
    out << c.cycle << ',' << format_double(c.chern_mean) << ','
        << format_double(c.chern_sem) << ',' << format_double(c.mi_mean) << ','
        << format_double(c.purity_max) << ','
        << format_double(c.charge_drift_max);
    if (with_corr)
      for (double v : c.corr_mean) out << ',' << format_double(v);
    out << "\n";
  }
  return out.str();
}

std::string sweep_csv(const std::string& axis,
                      const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << axis
      << ",chern_final_mean,chern_final_sem,chern_gbar,chern_gbar_regularized,"
         "mi_final_mean,spectral_gap_gbar,purity_max,charge_drift_max\n";
  for (const SweepPoint& p : points) {
    const EnsembleResult& r = p.result;
    out << format_double(p.value) << ',' << format_double(r.chern_final_mean)
        << ',' << format_double(r.chern_final_sem) << ','
        << format_double(r.chern_gbar) << ','
        << format_double(r.chern_gbar_regularized) << ','
        << format_double(r.mi_final_mean) << ','
        << format_double(r.spectral_gap_gbar) << ','
        << format_double(r.purity_max) << ','
        << format_double(r.charge_drift_max) << "\n";
  }
  return out.str();
}

std::string lindblad_csv(const LindbladTrace& trace) {
  std::ostringstream out;
  out << "t,gbar_plus,gbar_minus,max_coh\n";
  for (const LindbladSample& s : trace.samples)
    out << format_double(s.t) << ',' << format_double(s.gbar_plus) << ','
        << format_double(s.gbar_minus) << ',' << format_double(s.max_coh)
        << "\n";
  return out.str();
}

std::string field_csv(const std::vector<double>& field, int L) {
  if (static_cast<int>(field.size()) != L * L)
    throw std::invalid_argument("field_csv: field size != L*L");
  std::ostringstream out;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      if (x) out << ',';
      out << format_double(field[y * L + x]);
    }
    out << "\n";
  }
  return out.str();
}

nlohmann::json load_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report \"" + path + "\"");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("report " + path + ": " + e.what());
  }
  if (doc.contains("schema_version") && doc["schema_version"].is_number_integer() &&
      doc["schema_version"].get<int>() > kSchemaVersion)
    throw std::runtime_error(
        "report " + path + ": schema_version " +
        std::to_string(doc["schema_version"].get<int>()) +
        " is newer than the supported version " +
        std::to_string(kSchemaVersion));
  return doc;
}

namespace {

void diff_json(const json& got, const json& want, double tol,
               const std::string& path, std::vector<std::string>& out) {
  if (out.size() >= 50) return;
  auto add = [&](const std::string& msg) {
    if (out.size() < 50) out.push_back(path + ": " + msg);
  };
  if (got.is_number() && want.is_number()) {
    const double a = got.get<double>();
    const double b = want.get<double>();
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (!(std::abs(a - b) <= tol * scale))
      add("value " + format_double(a) + " != " + format_double(b));
    return;
  }
  if (got.type() != want.type()) {
    add(std::string("type ") + got.type_name() + " != " + want.type_name());
    return;
  }
  if (got.is_object()) {
    for (auto it = want.begin(); it != want.end(); ++it) {
      if (!got.contains(it.key()))
        add("missing key \"" + it.key() + "\"");
      else
        diff_json(got.at(it.key()), it.value(), tol, path + "/" + it.key(),
                  out);
    }
    for (auto it = got.begin(); it != got.end(); ++it)
      if (!want.contains(it.key())) add("extra key \"" + it.key() + "\"");
    return;
  }
  if (got.is_array()) {
    if (got.size() != want.size()) {
      add("array length " + std::to_string(got.size()) + " != " +
          std::to_string(want.size()));
      return;
    }
    for (std::size_t i = 0; i < got.size(); ++i)
      diff_json(got[i], want[i], tol, path + "/" + std::to_string(i), out);
    return;
  }
  if (got != want) add("value " + got.dump() + " != " + want.dump());
}

}  // namespace

std::vector<std::string> compare_reports(const nlohmann::json& got,
                                         const nlohmann::json& want,
                                         double tol) {
  std::vector<std::string> out;
  diff_json(got, want, tol, "", out);
  return out;
}

}  // namespace fsteer
