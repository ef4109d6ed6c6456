// Command-line driver: learning curves, step-size sweeps, CDF studies, regret
// audits and model dumps for the bundled environments.

#include "pfgtd/experiment/output.hpp"
#include "pfgtd/experiment/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace pfgtd;
using namespace pfgtd::experiment;

namespace {

struct CliState {
  ExperimentConfig config;
  std::vector<double> cdf_range;
  bool no_warm_start = false;
  unsigned threads = 0;
  std::string out = "results";
};

void add_options(CLI::App& app, CliState& s) {
  ExperimentConfig& c = s.config;
  app.add_option("--env", c.environment, "Environment name")->capture_default_str();
  app.add_option("--algo", c.algorithm, "Algorithm name")->capture_default_str();
  app.add_option("--runs", c.n_runs, "Independent runs")->capture_default_str();
  app.add_option("--steps", c.n_steps, "Steps per run (negative: environment default)")->capture_default_str();
  app.add_option("--seed", c.seed_base, "Seed of run 0; run i uses seed + i")->capture_default_str();
  app.add_option("--cadence", c.metric_cadence, "Steps between metric evaluations (0: environment default)")
      ->capture_default_str();
  app.add_option("--alpha", c.alpha, "Baseline step size")->capture_default_str();
  app.add_option("--objective", c.objective, "Saddle-point objective")
      ->check(CLI::IsMember({"mspbe", "neu"}))
      ->capture_default_str();
  app.add_option("--radius", c.radius, "Radius D of both feasible balls (0: environment default)")
      ->capture_default_str();
  app.add_flag("--average", c.average, "Report averaged iterates for baselines");
  app.add_option("--wealth", c.initial_wealth, "Initial wealth W0")->capture_default_str();
  app.add_option("--hint", c.initial_hint, "Initial hint")->capture_default_str();
  app.add_option("--tdc-ratio", c.tdc_ratio, "TDC secondary step-size ratio")->capture_default_str();
  app.add_option("--tdrc-beta", c.tdrc_beta, "TDRC regularisation")->capture_default_str();
  app.add_option("--baird-behavior", c.baird_behavior, "Baird behaviour policy")
      ->check(CLI::IsMember({"equiprobable", "classic"}))
      ->capture_default_str();
  app.add_flag("--no-warm-start", s.no_warm_start, "Ignore the environment's customary initial weights");
  app.add_option("--cdf-dist", c.cdf_dist, "Step-size law for the CDF study")
      ->check(CLI::IsMember({"log-uniform", "uniform"}))
      ->capture_default_str();
  app.add_option("--cdf-range", s.cdf_range, "Step-size range LO HI for the CDF study")->expected(2);
  app.add_option("--budget", c.cdf_budget, "Runs in the CDF study")->capture_default_str();
  app.add_option("--audit-gradients", c.audit_gradients, "Audit with sampled or expected gradients")
      ->check(CLI::IsMember({"sampled", "expected"}))
      ->capture_default_str();
  app.add_option("--ms-states", c.ms_states, "Multi-scale ring size")->capture_default_str();
  app.add_option("--ms-scales", c.ms_scales, "Multi-scale reward scales")->delimiter(',');
  app.add_option("--ms-noise", c.ms_noise, "Multi-scale relative noise levels")->delimiter(',');
  app.add_option("--threads", s.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--out", s.out, "Output directory")->capture_default_str();
}

void finish(CliState& s) {
  if (s.no_warm_start) s.config.warm_start = false;
  if (!s.cdf_range.empty()) {
    s.config.cdf_lo = s.cdf_range.at(0);
    s.config.cdf_hi = s.cdf_range.at(1);
  }
}

fs::path out_file(const CliState& s, const std::string& suffix) {
  return fs::path(s.out) / (result_stem(s.config) + suffix);
}

int cmd_run(CliState& s) {
  const CurveResult r = run_learning_curves(s.config, s.threads);
  const fs::path csv = out_file(s, ".csv");
  const fs::path json = out_file(s, "_summary.json");
  write_text(csv, curve_csv(r.records));
  write_text(json, curve_summary(s.config, r).dump(2) + "\n");
  std::cout << s.config.environment << ' ' << s.config.algorithm << ": final mean " << format_double(r.summary.final_mean)
            << " (initial " << format_double(r.summary.initial_mean) << ", " << r.summary.diverged
            << " diverged) -> " << csv.string() << '\n';
  return 0;
}

int cmd_sweep(CliState& s) {
  const SweepResult r = run_sweep(s.config, s.threads);
  write_text(out_file(s, "_sweep.json"), sweep_summary(s.config, r).dump(2) + "\n");
  write_text(out_file(s, "_sweep_best.csv"), curve_csv(r.best_curves.records));
  for (const auto& e : r.entries)
    std::cout << "alpha " << format_double(e.alpha) << "  area " << format_double(e.summary.area) << "  final "
              << format_double(e.summary.final_mean) << '\n';
  std::cout << "best alpha " << format_double(r.entries[r.best].alpha) << '\n';
  return 0;
}

int cmd_cdf(CliState& s) {
  const PreparedEnvironment p = prepare(s.config);
  const CdfResult r = run_cdf_study(s.config, s.threads);
  write_text(out_file(s, "_cdf.csv"), cdf_csv(r));
  write_text(out_file(s, "_cdf.json"), cdf_summary(s.config, r, p).dump(2) + "\n");
  std::cout << "cdf over " << r.records.size() << " runs -> " << out_file(s, "_cdf.csv").string() << '\n';
  return 0;
}

int cmd_audit(CliState& s) {
  const PreparedEnvironment p = prepare(s.config);
  const AuditResult r = run_regret_audit(s.config, s.threads);
  write_text(out_file(s, "_audit.csv"), audit_csv(r));
  write_text(out_file(s, "_audit.json"), audit_summary(s.config, r, p).dump(2) + "\n");
  std::cout << "gap <= (R_theta(theta*) + R_y(y*)) / T on " << r.passed << '/' << r.rows.size()
            << " runs; against gap-attaining comparators on " << r.passed_sup << '/' << r.rows.size()
            << " (lambda_max(M) = " << format_double(r.lambda_max_M) << ", D = " << format_double(r.radius)
            << ")\n";
  return 0;
}

int cmd_dump_model(CliState& s) {
  const PreparedEnvironment p = prepare(s.config);
  Json j;
  j["environment"] = s.config.environment;
  Json models = Json::array();
  for (const auto& m : p.models) models.push_back(model_json(m));
  j["models"] = models;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_dump_env(CliState& s) {
  const PreparedEnvironment p = prepare(s.config);
  Json j;
  j["environment"] = s.config.environment;
  Json specs = Json::array();
  for (const auto& spec : p.environment.signals) specs.push_back(spec_json(spec));
  j["signals"] = specs;
  if (p.environment.initial_theta) j["initial_theta"] = to_json(*p.environment.initial_theta);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_list() {
  std::cout << "environments:";
  for (const auto& n : env::environment_names()) std::cout << ' ' << n;
  std::cout << "\nalgorithms:";
  for (const auto& n : algorithm_names()) std::cout << ' ' << n;
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-free gradient TD experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags take precedence");
  CliState state;
  add_options(app, state);

  auto* run = app.add_subcommand("run", "Learning curves averaged over seeded runs");
  auto* sweep = app.add_subcommand("sweep", "Grid-tune a baseline's step size over 2^-10..2^0");
  auto* cdf = app.add_subcommand("cdf", "Final-metric distribution under random step sizes");
  auto* audit = app.add_subcommand("audit", "Regret and duality-gap report per run");
  auto* dump_model = app.add_subcommand("dump-model", "Print the exact A, b, C, M, xi and solution as JSON");
  auto* dump_env = app.add_subcommand("dump-env", "Print the environment definition as JSON");
  auto* list = app.add_subcommand("list", "List environments and algorithms");

  CLI11_PARSE(app, argc, argv);
  finish(state);
  try {
    if (*run) return cmd_run(state);
    if (*sweep) return cmd_sweep(state);
    if (*cdf) return cmd_cdf(state);
    if (*audit) return cmd_audit(state);
    if (*dump_model) return cmd_dump_model(state);
    if (*dump_env) return cmd_dump_env(state);
    if (*list) return cmd_list();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
