#pragma once

#include "pfgtd/env/registry.hpp"
#include "pfgtd/gtd/baselines.hpp"
#include "pfgtd/gtd/factory.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfgtd::experiment {

#ifdef PFGTD_ENABLE_FREE_RANGE
inline constexpr bool kFreeRangeEnabled = true;
#else
inline constexpr bool kFreeRangeEnabled = false;
#endif

/// Everything that determines a run's output. Thread count and output location are
/// deliberately absent: they never change results.
struct ExperimentConfig {
  std::string environment = "random-walk-tabular";
  std::string algorithm = "pfgtd+";
  std::int64_t n_runs = 200;
  std::int64_t n_steps = -1;          // < 0: environment default
  std::uint64_t seed_base = 0;
  std::int64_t metric_cadence = 0;    // <= 0: environment default
  double alpha = 0.0625;              // baseline step size
  std::string objective = "mspbe";
  double radius = 0.0;                // <= 0: environment default
  bool average = false;               // average baseline iterates
  double initial_wealth = 1.0;
  double initial_hint = 1.0;
  double tdc_ratio = 1.0;
  double tdrc_beta = 1.0;
  std::string baird_behavior = "equiprobable";
  bool warm_start = true;             // use the environment's customary initial weights
  std::string cdf_dist = "log-uniform";
  double cdf_lo = 0x1p-10;
  double cdf_hi = 1.0;
  std::int64_t cdf_budget = 500;
  std::string audit_gradients = "sampled";  // or "expected": exact gradients, no sampling noise
  std::int64_t ms_states = 20;
  std::vector<double> ms_scales{1.0, 1e2, 1e4, 1e6};
  std::vector<double> ms_noise{0.1, 0.1, 0.1, 0.1};

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ExperimentConfig, environment, algorithm, n_runs, n_steps,
                                                seed_base, metric_cadence, alpha, objective, radius,
                                                average, initial_wealth, initial_hint, tdc_ratio,
                                                tdrc_beta, baird_behavior, warm_start, cdf_dist, cdf_lo,
                                                cdf_hi, cdf_budget, audit_gradients, ms_states, ms_scales, ms_noise)

inline const std::vector<std::string>& baseline_names() {
  static const std::vector<std::string> names{"td", "gtd2", "tdc", "tdrc"};
  return names;
}

inline std::vector<std::string> algorithm_names(bool include_free_range = kFreeRangeEnabled) {
  std::vector<std::string> names{"pfgtd", "cw-pfgtd", "pfgtd+"};
  if (include_free_range) names.emplace_back("pfgtd-fr");
  for (const auto& b : baseline_names()) names.push_back(b);
  return names;
}

inline std::optional<gtd::PfVariant> parameter_free_variant(const std::string& name) {
  if (name == "pfgtd") return gtd::PfVariant::pf;
  if (name == "cw-pfgtd") return gtd::PfVariant::cw_pf;
  if (name == "pfgtd+") return gtd::PfVariant::pf_plus;
  if (name == "pfgtd-fr") return gtd::PfVariant::free_range;
  return std::nullopt;
}

inline std::optional<gtd::BaselineAlgorithm> baseline_algorithm(const std::string& name) {
  if (name == "td") return gtd::BaselineAlgorithm::td;
  if (name == "gtd2") return gtd::BaselineAlgorithm::gtd2;
  if (name == "tdc") return gtd::BaselineAlgorithm::tdc;
  if (name == "tdrc") return gtd::BaselineAlgorithm::tdrc;
  return std::nullopt;
}

inline bool is_baseline(const std::string& name) { return baseline_algorithm(name).has_value(); }

inline std::int64_t default_steps(const std::string& env) {
  if (env == "boyan") return 10000;
  if (env == "baird") return 5000;
  if (env == "multi-scale") return 20000;
  return 3000;
}

inline std::int64_t default_cadence(const std::string& env) { return env == "multi-scale" ? 100 : 1; }

inline env::EnvironmentOptions environment_options(const ExperimentConfig& c) {
  env::EnvironmentOptions o;
  o.baird_behavior = env::parse_baird_behavior(c.baird_behavior);
  o.multi_scale.n_states = static_cast<int>(c.ms_states);
  o.multi_scale.scales = c.ms_scales;
  o.multi_scale.noise = c.ms_noise;
  return o;
}

/// Checks names and ranges; `allow_free_range` controls whether pfgtd-fr is accepted.
inline void validate(const ExperimentConfig& c, bool allow_free_range = kFreeRangeEnabled) {
  const auto bad = [](const std::string& why) { throw std::invalid_argument(why); };
  bool env_known = false;
  for (const auto& n : env::environment_names()) env_known = env_known || n == c.environment;
  if (!env_known) bad("unknown environment '" + c.environment + "'");
  bool algo_known = false;
  for (const auto& n : algorithm_names(allow_free_range)) algo_known = algo_known || n == c.algorithm;
  if (!algo_known) {
    if (c.algorithm == "pfgtd-fr") bad("algorithm 'pfgtd-fr' is disabled in this build");
    bad("unknown algorithm '" + c.algorithm + "'");
  }
  if (c.n_runs < 0) bad("number of runs must be nonnegative");
  if (!(c.alpha > 0.0)) bad("step size must be positive");
  gtd::parse_objective(c.objective);
  env::parse_baird_behavior(c.baird_behavior);
  if (!(c.initial_wealth > 0.0) || !(c.initial_hint > 0.0)) bad("initial wealth and hint must be positive");
  if (!(c.tdc_ratio > 0.0) || !(c.tdrc_beta >= 0.0)) bad("invalid TDC ratio or TDRC beta");
  if (c.cdf_dist != "log-uniform" && c.cdf_dist != "uniform")
    bad("unknown CDF distribution '" + c.cdf_dist + "' (expected log-uniform or uniform)");
  if (!(c.cdf_lo > 0.0) || !(c.cdf_hi >= c.cdf_lo)) bad("CDF range must satisfy 0 < lo <= hi");
  if (c.cdf_budget < 0) bad("CDF budget must be nonnegative");
  if (c.audit_gradients != "sampled" && c.audit_gradients != "expected")
    bad("unknown audit gradient mode '" + c.audit_gradients + "' (expected sampled or expected)");
  if (c.ms_scales.empty() || c.ms_scales.size() != c.ms_noise.size())
    bad("multi-scale scales and noise lists must be non-empty and equally long");
}

}  // namespace pfgtd::experiment
