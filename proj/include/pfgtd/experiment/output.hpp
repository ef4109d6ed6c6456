#pragma once

// CSV and JSON writers. Doubles are printed with 17 significant digits (CSV) or
// nlohmann's shortest round-trip form (JSON); non-finite values become "inf"/"nan"
// in CSV and null in JSON. Output depends only on the records, never on timing.

#include "pfgtd/env/mdp.hpp"
#include "pfgtd/experiment/config.hpp"
#include "pfgtd/experiment/hash.hpp"
#include "pfgtd/experiment/runner.hpp"
#include "pfgtd/metrics/exact_model.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfgtd::experiment {

using Json = nlohmann::json;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
  return rows;
}

inline std::string config_text(const ExperimentConfig& c) { return Json(c).dump(); }

/// Git blob id of the canonical config text: identifies the inputs of a result file.
inline std::string input_hash(const ExperimentConfig& c) { return git_blob_hash(config_text(c)); }

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << text;
  os.flush();
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

/// step,run,metric, one row per run and checkpoint.
inline std::string curve_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << "step,run,metric\n";
  for (const auto& r : records)
    for (std::size_t i = 0; i < r.steps.size(); ++i)
      os << r.steps[i] << ',' << r.run_index << ',' << format_double(r.metric[i]) << '\n';
  return os.str();
}

inline Json to_json(const CurveAggregate& a) {
  Json j;
  j["n_runs"] = a.n_runs;
  j["diverged"] = a.diverged;
  j["initial_mean"] = number(a.initial_mean);
  j["final_mean"] = number(a.final_mean);
  j["final_stderr"] = number(a.final_stderr);
  j["area"] = number(a.area);
  j["steps"] = a.steps;
  Json mean = Json::array(), se = Json::array();
  for (double v : a.mean) mean.push_back(number(v));
  for (double v : a.stderr_) se.push_back(number(v));
  j["mean"] = mean;
  j["stderr"] = se;
  j["n_finite"] = a.n_finite;
  return j;
}

inline Json run_summaries(const std::vector<RunRecord>& records) {
  Json runs = Json::array();
  for (const auto& r : records) {
    Json j;
    j["run"] = r.run_index;
    j["seed"] = r.seed;
    j["initial"] = number(r.initial_metric);
    j["final"] = number(r.final_metric);
    j["diverged"] = r.diverged;
    if (r.alpha) j["alpha"] = *r.alpha;
    runs.push_back(j);
  }
  return runs;
}

inline Json summary_header(const ExperimentConfig& c, const std::string& kind, const PreparedEnvironment* p) {
  Json j;
  j["kind"] = kind;
  j["config"] = Json(c);
  j["input_hash"] = input_hash(c);
  j["metric"] = (p && p->environment.multi_signal) ? "smape" : (c.objective == "neu" ? "rneu" : "rmspbe");
  if (p) {
    j["resolved"] = {{"n_steps", p->n_steps}, {"metric_cadence", p->cadence}, {"radius", p->radius}};
  }
  return j;
}

inline Json curve_summary(const ExperimentConfig& c, const CurveResult& r) {
  Json j = summary_header(c, "learning-curves", &r.prepared);
  j["alpha"] = is_baseline(c.algorithm) ? Json(r.alpha) : Json(nullptr);
  j["n_runs"] = static_cast<std::int64_t>(r.records.size());
  j["aggregate"] = to_json(r.summary);
  j["runs"] = run_summaries(r.records);
  return j;
}

inline Json sweep_summary(const ExperimentConfig& c, const SweepResult& r) {
  Json j = summary_header(c, "sweep", &r.best_curves.prepared);
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"alpha", e.alpha},
                       {"area", number(e.summary.area)},
                       {"final_mean", number(e.summary.final_mean)},
                       {"diverged", e.summary.diverged}});
  }
  j["candidates"] = entries;
  j["best_alpha"] = r.entries.empty() ? Json(nullptr) : Json(r.entries[r.best].alpha);
  j["n_runs"] = static_cast<std::int64_t>(r.best_curves.records.size());
  j["aggregate"] = to_json(r.best_curves.summary);
  return j;
}

inline std::string cdf_csv(const CdfResult& r) {
  std::ostringstream os;
  os << "x,fraction\n";
  for (const auto& p : r.cdf) os << format_double(p.x) << ',' << format_double(p.fraction) << '\n';
  return os.str();
}

inline Json cdf_summary(const ExperimentConfig& c, const CdfResult& r, const PreparedEnvironment& p) {
  Json j = summary_header(c, "cdf", &p);
  j["budget"] = static_cast<std::int64_t>(r.records.size());
  Json finals = Json::array();
  for (double v : r.sorted_finals) finals.push_back(number(v));
  j["sorted_finals"] = finals;
  Json cdf = Json::array();
  for (const auto& q : r.cdf) cdf.push_back({number(q.x), q.fraction});
  j["cdf"] = cdf;
  j["runs"] = run_summaries(r.records);
  return j;
}

inline std::string audit_csv(const AuditResult& r) {
  std::ostringstream os;
  os << "run,seed,steps,regret_theta,regret_y,gap,bound,pass,regret_theta_sup,regret_y_sup,bound_sup,pass_sup\n";
  for (const auto& a : r.rows) {
    os << a.run_index << ',' << a.seed << ',' << a.steps << ',' << format_double(a.regret_theta) << ','
       << format_double(a.regret_y) << ',' << format_double(a.gap) << ',' << format_double(a.bound) << ','
       << (a.pass ? 1 : 0) << ',' << format_double(a.regret_theta_sup) << ',' << format_double(a.regret_y_sup)
       << ',' << format_double(a.bound_sup) << ',' << (a.pass_sup ? 1 : 0) << '\n';
  }
  return os.str();
}

inline Json audit_summary(const ExperimentConfig& c, const AuditResult& r, const PreparedEnvironment& p) {
  Json j = summary_header(c, "audit", &p);
  j["lambda_max_M"] = r.lambda_max_M;
  j["radius"] = r.radius;
  j["n_runs"] = static_cast<std::int64_t>(r.rows.size());
  j["passed"] = r.passed;
  j["passed_sup"] = r.passed_sup;
  j["slack"] = kAuditSlack;
  return j;
}

inline Json model_json(const metrics::ExactModel& m) {
  Json j;
  j["objective"] = gtd::to_string(m.objective);
  j["gamma"] = m.gamma;
  j["A"] = to_json(m.A);
  j["b"] = to_json(m.b);
  j["C"] = to_json(m.C);
  j["M"] = to_json(m.M);
  j["xi"] = to_json(m.xi);
  j["theta_star"] = to_json(m.theta_star);
  j["y_star"] = to_json(m.y_star);
  j["lambda_max_M"] = m.lambda_max_M;
  j["pseudo_inverse"] = m.pseudo_inverse;
  return j;
}

inline Json spec_json(const env::MdpSpec& s) {
  Json j;
  j["name"] = s.name;
  j["n_states"] = s.n_states;
  j["n_actions"] = s.n_actions;
  j["gamma"] = s.gamma;
  j["transition"] = s.transition;
  j["reward"] = to_json(s.reward);
  j["behavior"] = to_json(s.behavior);
  j["target"] = to_json(s.target);
  j["features"] = to_json(s.features);
  j["start_dist"] = to_json(s.start_dist);
  j["terminal"] = s.terminal;
  j["iid_states"] = s.iid_states;
  j["rho_max"] = s.rho_max();
  return j;
}

/// File stem for an environment/algorithm pair, e.g. "baird_pfgtd+".
inline std::string result_stem(const ExperimentConfig& c) { return c.environment + "_" + c.algorithm; }

}  // namespace pfgtd::experiment
