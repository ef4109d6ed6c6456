#pragma once

// Experiment protocols: seeded learning curves, the baseline step-size sweep,
// the hyperparameter-robustness CDF study and the regret audit.

#include "pfgtd/env/registry.hpp"
#include "pfgtd/env/sampler.hpp"
#include "pfgtd/experiment/config.hpp"
#include "pfgtd/experiment/parallel.hpp"
#include "pfgtd/gtd/baselines.hpp"
#include "pfgtd/gtd/factory.hpp"
#include "pfgtd/metrics/exact_model.hpp"
#include "pfgtd/metrics/smape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfgtd::experiment {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Environment, exact models and resolved defaults shared by every run of a config.
struct PreparedEnvironment {
  env::Environment environment;
  std::vector<metrics::ExactModel> models;  // one per signal
  gtd::Objective objective = gtd::Objective::mspbe;
  double radius = 100.0;
  std::int64_t n_steps = 0;
  std::int64_t cadence = 1;
};

/// Radius for the multi-scale stream: twice the largest solution norm, at least 100,
/// so every signal's saddle point is interior.
inline double auto_radius(const std::vector<metrics::ExactModel>& models) {
  double r = 100.0;
  for (const auto& m : models) r = std::max(r, 2.0 * m.theta_star.norm());
  return r;
}

inline PreparedEnvironment prepare(const ExperimentConfig& c, bool allow_free_range = kFreeRangeEnabled) {
  validate(c, allow_free_range);
  PreparedEnvironment p;
  p.environment = env::make_environment(c.environment, environment_options(c));
  p.objective = gtd::parse_objective(c.objective);
  for (const auto& spec : p.environment.signals) p.models.push_back(metrics::build_exact_model(spec, p.objective));
  p.radius = c.radius > 0.0 ? c.radius : (p.environment.multi_signal ? auto_radius(p.models) : 100.0);
  p.n_steps = c.n_steps >= 0 ? c.n_steps : default_steps(c.environment);
  p.cadence = c.metric_cadence > 0 ? c.metric_cadence : default_cadence(c.environment);
  return p;
}

inline std::unique_ptr<gtd::Evaluator> make_evaluator(const ExperimentConfig& c, const PreparedEnvironment& p,
                                                      std::size_t signal, double alpha) {
  const env::MdpSpec& spec = p.environment.signals.at(signal);
  const std::optional<Vector>& init = p.environment.initial_theta;
  if (auto variant = parameter_free_variant(c.algorithm)) {
    gtd::PfgtdOptions o;
    o.initial_wealth = c.initial_wealth;
    o.initial_hint = c.initial_hint;
    o.theta_set = olo::FeasibleSet(p.radius);
    o.y_set = olo::FeasibleSet(p.radius);
    o.objective = p.objective;
    if (c.warm_start && init && *variant != gtd::PfVariant::free_range) o.warm_start = *init;
    return gtd::make_pfgtd(*variant, spec.dim(), spec.gamma, o);
  }
  auto algo = baseline_algorithm(c.algorithm);
  if (!algo) throw std::invalid_argument("unknown algorithm '" + c.algorithm + "'");
  gtd::BaselineConfig bc{*algo, alpha, c.tdc_ratio, c.tdrc_beta};
  const Vector* start = (c.warm_start && init) ? &*init : nullptr;
  return std::make_unique<gtd::BaselineLearner>(bc, spec.dim(), spec.gamma, c.average, start);
}

/// Steps after which the metric is recorded: every `cadence` steps plus the last one.
inline std::vector<std::int64_t> checkpoints(std::int64_t n_steps, std::int64_t cadence) {
  std::vector<std::int64_t> out;
  for (std::int64_t t = cadence; t < n_steps; t += cadence) out.push_back(t);
  if (n_steps > 0) out.push_back(n_steps);
  return out;
}

struct RunRecord {
  std::int64_t run_index = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> steps;
  std::vector<double> metric;  // +inf marks divergence
  double initial_metric = 0.0;
  double final_metric = 0.0;
  bool diverged = false;
  std::optional<double> alpha;  // drawn or swept step size (baselines)
};

inline std::uint64_t run_seed(const ExperimentConfig& c, std::int64_t run_index) {
  return c.seed_base + static_cast<std::uint64_t>(run_index);
}

namespace detail {

inline void mark_diverged(RunRecord& r, std::size_t from) {
  r.diverged = true;
  for (std::size_t i = from; i < r.metric.size(); ++i) r.metric[i] = kInf;
  r.final_metric = kInf;
}

inline double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline RunRecord run_classic(const ExperimentConfig& c, const PreparedEnvironment& p, std::int64_t run_index,
                             double alpha) {
  const env::MdpSpec& spec = p.environment.spec();
  const metrics::ExactModel& model = p.models.front();
  RunRecord r;
  r.run_index = run_index;
  r.seed = run_seed(c, run_index);
  r.steps = checkpoints(p.n_steps, p.cadence);
  r.metric.assign(r.steps.size(), 0.0);
  auto learner = make_evaluator(c, p, 0, alpha);
  r.initial_metric = finite_or_inf(metrics::rmspbe(model, learner->estimate()));
  r.final_metric = r.initial_metric;
  env::SamplerState sampler = env::make_sampler(spec, r.seed);
  std::size_t next = 0;
  for (std::int64_t t = 1; t <= p.n_steps && next < r.steps.size(); ++t) {
    learner->step(env::sample_transition(spec, sampler).sample);
    if (t != r.steps[next]) continue;
    const Vector est = learner->estimate();
    const double v = est.allFinite() ? metrics::rmspbe(model, est) : kInf;
    if (!std::isfinite(v)) {
      mark_diverged(r, next);
      return r;
    }
    r.metric[next++] = v;
    r.final_metric = v;
  }
  return r;
}

inline RunRecord run_multi_signal(const ExperimentConfig& c, const PreparedEnvironment& p,
                                  std::int64_t run_index, double alpha) {
  const env::MultiScaleConfig& ms = p.environment.multi_scale;
  const double gamma = ms.gamma;
  RunRecord r;
  r.run_index = run_index;
  r.seed = run_seed(c, run_index);
  r.steps = checkpoints(p.n_steps, p.cadence);
  r.metric.assign(r.steps.size(), 0.0);
  // extra stream beyond the horizon so returns are exact to ~1e-6 of r_max/(1-gamma)
  const auto tail = static_cast<std::int64_t>(std::ceil(std::log(1e-6) / std::log(gamma)));
  const env::MultiScaleStream stream = env::multi_scale_stream(ms, p.n_steps + tail, r.seed);
  const std::size_t K = ms.scales.size();
  const auto T = static_cast<std::size_t>(p.n_steps);

  std::vector<std::vector<double>> window_smape(r.steps.size(), std::vector<double>(K, 0.0));
  std::vector<double> initial_smape(K, 0.0);
  bool diverged = false;
  for (std::size_t k = 0; k < K && !diverged; ++k) {
    auto learner = make_evaluator(c, p, k, alpha);
    const metrics::DiscountedReturns G = metrics::true_returns(stream.rewards[k], gamma);
    std::vector<double> returns(G.values.begin(), G.values.begin() + static_cast<std::ptrdiff_t>(T));
    std::vector<double> predictions(T, 0.0);
    std::vector<double> initial(T, 0.0);
    const Vector start = learner->estimate();
    for (std::size_t t = 0; t < T; ++t) {
      const int s = stream.states[t];
      initial[t] = start[s];
      predictions[t] = learner->estimate()[s];
      if (!std::isfinite(predictions[t])) {
        diverged = true;
        break;
      }
      learner->step(env::multi_scale_sample(ms, stream, k, t));
    }
    if (diverged) break;
    if (T > 0) initial_smape[k] = metrics::smape(initial, returns);
    std::size_t begin = 0;
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      const auto end = static_cast<std::size_t>(r.steps[i]);
      std::vector<double> pw(predictions.begin() + static_cast<std::ptrdiff_t>(begin),
                             predictions.begin() + static_cast<std::ptrdiff_t>(end));
      std::vector<double> gw(returns.begin() + static_cast<std::ptrdiff_t>(begin),
                             returns.begin() + static_cast<std::ptrdiff_t>(end));
      window_smape[i][k] = metrics::smape(pw, gw);
      begin = end;
    }
  }
  r.initial_metric = T > 0 ? median(initial_smape) : 1.0;
  r.final_metric = r.initial_metric;
  if (diverged) {
    mark_diverged(r, 0);
    return r;
  }
  for (std::size_t i = 0; i < r.steps.size(); ++i) r.metric[i] = median(window_smape[i]);
  if (!r.metric.empty()) r.final_metric = r.metric.back();
  return r;
}

}  // namespace detail

/// One seeded run. The metric is RMSPBE (NEU norm under the neu objective) for the
/// classic problems and the median over signals of windowed SMAPE for multi-signal streams.
inline RunRecord run_single(const ExperimentConfig& c, const PreparedEnvironment& p, std::int64_t run_index,
                            double alpha) {
  RunRecord r = p.environment.multi_signal ? detail::run_multi_signal(c, p, run_index, alpha)
                                           : detail::run_classic(c, p, run_index, alpha);
  if (is_baseline(c.algorithm)) r.alpha = alpha;
  return r;
}

struct CurveAggregate {
  std::vector<std::int64_t> steps;
  std::vector<double> mean;    // over finite runs; +inf when none is finite
  std::vector<double> stderr_;
  std::vector<std::int64_t> n_finite;
  std::int64_t n_runs = 0;
  std::int64_t diverged = 0;
  double initial_mean = 0.0;
  double final_mean = 0.0;
  double final_stderr = 0.0;
  double area = 0.0;  // sum of the mean curve over checkpoints
};

namespace detail {

inline void mean_stderr(const std::vector<double>& xs, double& mean, double& se, std::int64_t& n) {
  double sum = 0.0;
  n = 0;
  for (double x : xs)
    if (std::isfinite(x)) {
      sum += x;
      ++n;
    }
  if (n == 0) {
    mean = kInf;
    se = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs)
    if (std::isfinite(x)) ss += (x - mean) * (x - mean);
  se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
}

}  // namespace detail

inline CurveAggregate aggregate(const std::vector<RunRecord>& records) {
  CurveAggregate a;
  a.n_runs = static_cast<std::int64_t>(records.size());
  if (records.empty()) return a;
  a.steps = records.front().steps;
  const std::size_t L = a.steps.size();
  a.mean.resize(L);
  a.stderr_.resize(L);
  a.n_finite.resize(L);
  std::vector<double> column(records.size());
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t r = 0; r < records.size(); ++r) column[r] = records[r].metric.at(i);
    detail::mean_stderr(column, a.mean[i], a.stderr_[i], a.n_finite[i]);
    a.area += a.mean[i];
  }
  for (const auto& r : records) a.diverged += r.diverged ? 1 : 0;
  std::int64_t n = 0;
  double se = 0.0;
  for (std::size_t r = 0; r < records.size(); ++r) column[r] = records[r].initial_metric;
  detail::mean_stderr(column, a.initial_mean, se, n);
  for (std::size_t r = 0; r < records.size(); ++r) column[r] = records[r].final_metric;
  detail::mean_stderr(column, a.final_mean, a.final_stderr, n);
  return a;
}

struct CurveResult {
  PreparedEnvironment prepared;
  std::vector<RunRecord> records;
  CurveAggregate summary;
  double alpha = 0.0;
};

inline std::vector<RunRecord> run_all(const ExperimentConfig& c, const PreparedEnvironment& p, std::int64_t n_runs,
                                      unsigned threads, double alpha) {
  std::vector<RunRecord> records(static_cast<std::size_t>(std::max<std::int64_t>(n_runs, 0)));
  parallel_for(records.size(), threads, [&](std::size_t i) {
    records[i] = run_single(c, p, static_cast<std::int64_t>(i), alpha);
  });
  return records;
}

inline CurveResult run_learning_curves(const ExperimentConfig& c, unsigned threads = 0,
                                       bool allow_free_range = kFreeRangeEnabled) {
  CurveResult out;
  out.prepared = prepare(c, allow_free_range);
  out.alpha = c.alpha;
  out.records = run_all(c, out.prepared, c.n_runs, threads, c.alpha);
  out.summary = aggregate(out.records);
  return out;
}

/// alpha in {2^0, 2^-1, ..., 2^-10}
inline std::vector<double> step_size_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(std::ldexp(1.0, -i));
  return g;
}

struct SweepEntry {
  double alpha = 0.0;
  CurveAggregate summary;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::size_t best = 0;  // index of the smallest area; ties go to the earlier (larger) step size
  CurveResult best_curves;
};

inline SweepResult run_sweep(const ExperimentConfig& c, unsigned threads = 0,
                             bool allow_free_range = kFreeRangeEnabled) {
  if (!is_baseline(c.algorithm))
    throw std::invalid_argument("the step-size sweep applies to baselines only, not '" + c.algorithm + "'");
  const PreparedEnvironment p = prepare(c, allow_free_range);
  SweepResult out;
  std::vector<std::vector<RunRecord>> all;
  for (double alpha : step_size_grid()) {
    all.push_back(run_all(c, p, c.n_runs, threads, alpha));
    out.entries.push_back({alpha, aggregate(all.back())});
  }
  for (std::size_t i = 1; i < out.entries.size(); ++i)
    if (out.entries[i].summary.area < out.entries[out.best].summary.area) out.best = i;
  out.best_curves.prepared = p;
  out.best_curves.alpha = out.entries[out.best].alpha;
  out.best_curves.records = std::move(all[out.best]);
  out.best_curves.summary = out.entries[out.best].summary;
  return out;
}

/// Step size for CDF run i: its own stream, independent of the run's sampler seed.
inline double draw_step_size(const ExperimentConfig& c, std::int64_t run_index) {
  env::Rng rng(run_seed(c, run_index) ^ 0xd1b54a32d192ed03ULL);
  const double u = rng.uniform();
  if (c.cdf_dist == "uniform") return c.cdf_lo + (c.cdf_hi - c.cdf_lo) * u;
  return std::exp(std::log(c.cdf_lo) + (std::log(c.cdf_hi) - std::log(c.cdf_lo)) * u);
}

struct CdfPoint {
  double x = 0.0;
  double fraction = 0.0;
};

/// Sorted samples and (x, fraction <= x) pairs, one per distinct value.
inline std::vector<CdfPoint> empirical_cdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end(), [](double a, double b) {
    if (std::isnan(a)) return false;
    if (std::isnan(b)) return true;
    return a < b;
  });
  std::vector<CdfPoint> out;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    out.push_back({samples[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

struct CdfResult {
  std::vector<RunRecord> records;
  std::vector<double> sorted_finals;
  std::vector<CdfPoint> cdf;
};

inline CdfResult run_cdf_study(const ExperimentConfig& c, unsigned threads = 0,
                               bool allow_free_range = kFreeRangeEnabled) {
  const PreparedEnvironment p = prepare(c, allow_free_range);
  CdfResult out;
  out.records.resize(static_cast<std::size_t>(c.cdf_budget));
  const bool draw = is_baseline(c.algorithm);
  parallel_for(out.records.size(), threads, [&](std::size_t i) {
    const auto idx = static_cast<std::int64_t>(i);
    out.records[i] = run_single(c, p, idx, draw ? draw_step_size(c, idx) : c.alpha);
  });
  for (const auto& r : out.records) out.sorted_finals.push_back(r.final_metric);
  std::sort(out.sorted_finals.begin(), out.sorted_finals.end());
  out.cdf = empirical_cdf(out.sorted_finals);
  return out;
}

struct AuditRow {
  std::int64_t run_index = 0;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  double regret_theta = 0.0;  // R^theta(theta*)
  double regret_y = 0.0;      // R^y(y*)
  double gap = 0.0;           // duality gap of the averages
  double bound = 0.0;         // (R^theta(theta*) + R^y(y*)) / T
  bool pass = false;
  // the same inequality against the comparators that attain the gap
  double regret_theta_sup = 0.0;
  double regret_y_sup = 0.0;
  double bound_sup = 0.0;
  bool pass_sup = false;
};

struct AuditResult {
  std::vector<AuditRow> rows;
  double lambda_max_M = 0.0;
  double radius = 0.0;
  std::int64_t passed = 0;
  std::int64_t passed_sup = 0;
};

inline constexpr double kAuditSlack = 1e-9;

inline AuditRow audit_run(const ExperimentConfig& c, const PreparedEnvironment& p, std::int64_t run_index) {
  const env::MdpSpec& spec = p.environment.spec();
  const metrics::ExactModel& model = p.models.front();
  auto learner = make_evaluator(c, p, 0, c.alpha);
  AuditRow row;
  row.run_index = run_index;
  row.seed = run_seed(c, run_index);
  row.steps = p.n_steps;
  if (c.audit_gradients == "expected") {
    const gtd::GradientOracle oracle = [&model](const Vector& th, const Vector& y) {
      return model.expected_subgradients(th, y);
    };
    for (std::int64_t t = 0; t < p.n_steps; ++t) learner->step_with(oracle);
  } else {
    env::SamplerState sampler = env::make_sampler(spec, row.seed);
    for (std::int64_t t = 0; t < p.n_steps; ++t) learner->step(env::sample_transition(spec, sampler).sample);
  }
  const gtd::RegretTracker* regret = learner->regret();
  const gtd::LearnerState& st = learner->state();
  const olo::FeasibleSet set(p.radius);
  const metrics::GapResult g = metrics::duality_gap_detail(model, st.theta_avg, st.y_avg, set, set);
  const double T = static_cast<double>(std::max<std::int64_t>(p.n_steps, 1));
  row.gap = g.gap;
  row.regret_theta = regret->theta.regret(model.theta_star);
  row.regret_y = regret->y.regret(model.y_star);
  row.bound = (row.regret_theta + row.regret_y) / T;
  row.pass = row.gap <= row.bound + kAuditSlack;
  row.regret_theta_sup = regret->theta.regret(g.theta_best);
  row.regret_y_sup = regret->y.regret(g.y_best);
  row.bound_sup = (row.regret_theta_sup + row.regret_y_sup) / T;
  row.pass_sup = row.gap <= row.bound_sup + kAuditSlack;
  return row;
}

inline AuditResult run_regret_audit(const ExperimentConfig& c, unsigned threads = 0,
                                    bool allow_free_range = kFreeRangeEnabled) {
  if (!parameter_free_variant(c.algorithm))
    throw std::invalid_argument("the regret audit needs a saddle-point learner, not '" + c.algorithm + "'");
  const PreparedEnvironment p = prepare(c, allow_free_range);
  if (p.environment.multi_signal)
    throw std::invalid_argument("the regret audit needs a single-signal environment");
  if (p.n_steps < 1) throw std::invalid_argument("the regret audit needs at least one step");
  AuditResult out;
  out.lambda_max_M = p.models.front().lambda_max_M;
  out.radius = p.radius;
  out.rows.resize(static_cast<std::size_t>(c.n_runs));
  parallel_for(out.rows.size(), threads,
               [&](std::size_t i) { out.rows[i] = audit_run(c, p, static_cast<std::int64_t>(i)); });
  for (const auto& r : out.rows) {
    out.passed += r.pass ? 1 : 0;
    out.passed_sup += r.pass_sup ? 1 : 0;
  }
  return out;
}

}  // namespace pfgtd::experiment
