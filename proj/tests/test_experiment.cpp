#include "pfgtd/experiment/hash.hpp"
#include "pfgtd/experiment/output.hpp"
#include "pfgtd/experiment/parallel.hpp"
#include "pfgtd/experiment/runner.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pfgtd;
using namespace pfgtd::experiment;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small(const std::string& env, const std::string& algo, std::int64_t runs = 4,
                       std::int64_t steps = 200) {
  ExperimentConfig c;
  c.environment = env;
  c.algorithm = algo;
  c.n_runs = runs;
  c.n_steps = steps;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Checkpoints, CadenceAndFinalStep) {
  EXPECT_EQ(checkpoints(10, 3), (std::vector<std::int64_t>{3, 6, 9, 10}));
  EXPECT_EQ(checkpoints(9, 3), (std::vector<std::int64_t>{3, 6, 9}));
  EXPECT_EQ(checkpoints(5, 1).size(), 5u);
  EXPECT_TRUE(checkpoints(0, 1).empty());
}

TEST(Hash, GitBlobIds) {
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_hash("hello world\n"), "3b18e512dba79e4c8300dd08aeb37f8e728b8dad");
  EXPECT_EQ(sha1_hex("abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = small("baird", "gtd2", 7, 123);
  c.alpha = 0.125;
  c.ms_scales = {1.0, 10.0};
  c.ms_noise = {0.0, 0.5};
  c.warm_start = false;
  const ExperimentConfig back = Json::parse(config_text(c)).get<ExperimentConfig>();
  EXPECT_EQ(back, c);
  EXPECT_EQ(input_hash(back), input_hash(c));
  ExperimentConfig d = c;
  d.seed_base = 1;
  EXPECT_NE(input_hash(d), input_hash(c));
  // missing keys take defaults
  EXPECT_EQ(Json::parse("{}").get<ExperimentConfig>(), ExperimentConfig{});
}

TEST(Config, ValidationErrors) {
  EXPECT_THROW(validate(small("nowhere", "td")), std::invalid_argument);
  EXPECT_THROW(validate(small("boyan", "sarsa")), std::invalid_argument);
  auto c = small("boyan", "td");
  c.n_runs = -1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small("boyan", "td");
  c.alpha = -1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_THROW(validate(small("boyan", "pfgtd-fr"), false), std::invalid_argument);
  EXPECT_NO_THROW(validate(small("boyan", "pfgtd-fr"), true));
}

TEST(Parallel, IndexStableAndRethrows) {
  std::vector<int> out(1000, -1);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
  for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out[i], static_cast<int>(i * i % 97));
  std::atomic<int> seen{0};
  EXPECT_THROW(parallel_for(100, 3,
                            [&](std::size_t i) {
                              ++seen;
                              if (i == 42) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Runner, ZeroStepsGivesEmptyCurve) {
  const auto r = run_learning_curves(small("random-walk-tabular", "pfgtd+", 3, 0), 1);
  ASSERT_EQ(r.records.size(), 3u);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.steps.empty());
    EXPECT_TRUE(std::isfinite(rec.initial_metric));
    EXPECT_EQ(rec.final_metric, rec.initial_metric);
  }
  EXPECT_EQ(curve_csv(r.records), "step,run,metric\n");
}

TEST(Runner, CsvHasOneRowPerRunAndCheckpoint) {
  auto c = small("boyan", "td", 3, 50);
  c.metric_cadence = 7;
  const auto r = run_learning_curves(c, 1);
  const std::string csv = curve_csv(r.records);
  EXPECT_EQ(count_lines(csv), 1 + 3 * checkpoints(50, 7).size());
  EXPECT_EQ(csv.rfind("step,run,metric\n", 0), 0u);
}

TEST(Runner, AggregateOfNothing) {
  const auto a = aggregate({});
  EXPECT_EQ(a.n_runs, 0);
  EXPECT_TRUE(a.steps.empty());
}

TEST(Runner, SameSeedsSameRecordsAnyThreadCount) {
  for (const std::string algo : {"pfgtd+", "cw-pfgtd", "gtd2"}) {
    const auto c = small("random-walk-dependent", algo, 6, 120);
    const auto a = run_learning_curves(c, 1), b = run_learning_curves(c, 3);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      EXPECT_EQ(a.records[i].metric, b.records[i].metric) << algo;
      EXPECT_EQ(a.records[i].seed, b.records[i].seed);
    }
    EXPECT_EQ(curve_summary(c, a).dump(), curve_summary(c, b).dump());
  }
}

TEST(Runner, RunSeedsAreOffsetsOfTheBase) {
  auto c = small("boyan", "pfgtd", 3, 20);
  c.seed_base = 100;
  const auto r = run_learning_curves(c, 1);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.records[i].seed, 100 + i);
  // run i with base b equals run i-1 with base b+1
  auto d = c;
  d.seed_base = 101;
  const auto s = run_learning_curves(d, 1);
  EXPECT_EQ(r.records[1].metric, s.records[0].metric);
}

TEST(Runner, DivergenceMarkedWithInfinity) {
  auto c = small("baird", "td", 3, 2000);
  c.alpha = 1.0;
  c.metric_cadence = 100;
  const auto r = run_learning_curves(c, 1);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.diverged);
    EXPECT_TRUE(std::isinf(rec.final_metric));
  }
  EXPECT_EQ(r.summary.diverged, 3);
  EXPECT_TRUE(std::isinf(r.summary.final_mean));
  const std::string csv = curve_csv(r.records);
  EXPECT_NE(csv.find(",inf\n"), std::string::npos);
  EXPECT_TRUE(curve_summary(c, r)["aggregate"]["final_mean"].is_null());
}

TEST(Runner, MultiScaleProducesBoundedSmape) {
  auto c = small("multi-scale", "td", 2, 600);
  c.metric_cadence = 200;
  c.alpha = 0.01;
  const auto r = run_learning_curves(c, 1);
  for (const auto& rec : r.records) {
    ASSERT_EQ(rec.steps.size(), 3u);
    for (double v : rec.metric) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Sweep, ElevenCandidatesAndBestHasSmallestArea) {
  const auto r = run_sweep(small("random-walk-tabular", "td", 3, 100), 1);
  ASSERT_EQ(r.entries.size(), 11u);
  EXPECT_DOUBLE_EQ(r.entries.front().alpha, 1.0);
  EXPECT_DOUBLE_EQ(r.entries.back().alpha, 1.0 / 1024);
  for (const auto& e : r.entries) EXPECT_GE(e.summary.area, r.entries[r.best].summary.area);
  EXPECT_DOUBLE_EQ(r.best_curves.alpha, r.entries[r.best].alpha);
  EXPECT_THROW(run_sweep(small("boyan", "pfgtd+")), std::invalid_argument);
}

TEST(Cdf, MonotoneAndEndsAtOne) {
  auto c = small("random-walk-tabular", "gtd2", 1, 100);
  c.cdf_budget = 40;
  const auto r = run_cdf_study(c, 1);
  ASSERT_EQ(r.records.size(), 40u);
  ASSERT_FALSE(r.cdf.empty());
  for (std::size_t i = 1; i < r.cdf.size(); ++i) {
    EXPECT_LT(r.cdf[i - 1].x, r.cdf[i].x);
    EXPECT_LT(r.cdf[i - 1].fraction, r.cdf[i].fraction);
  }
  EXPECT_DOUBLE_EQ(r.cdf.back().fraction, 1.0);
  for (const auto& rec : r.records) {
    ASSERT_TRUE(rec.alpha.has_value());
    EXPECT_GE(*rec.alpha, c.cdf_lo);
    EXPECT_LE(*rec.alpha, c.cdf_hi);
  }
}

TEST(Cdf, ConstantSamplesCollapseToOnePoint) {
  const auto cdf = empirical_cdf({2.0, 2.0, 2.0});
  ASSERT_EQ(cdf.size(), 1u);
  EXPECT_DOUBLE_EQ(cdf[0].x, 2.0);
  EXPECT_DOUBLE_EQ(cdf[0].fraction, 1.0);
  const auto mixed = empirical_cdf({3.0, 1.0, kInf, 1.0});
  ASSERT_EQ(mixed.size(), 3u);
  EXPECT_DOUBLE_EQ(mixed[0].fraction, 0.5);
  EXPECT_TRUE(std::isinf(mixed[2].x));
}

TEST(Cdf, StepSizesDrawnIndependentlyOfSampler) {
  ExperimentConfig c;
  const double a = draw_step_size(c, 3);
  EXPECT_EQ(a, draw_step_size(c, 3));
  EXPECT_NE(a, draw_step_size(c, 4));
  c.cdf_dist = "uniform";
  c.cdf_lo = 0.5;
  c.cdf_hi = 0.75;
  for (int i = 0; i < 100; ++i) {
    const double v = draw_step_size(c, i);
    EXPECT_GE(v, 0.5);
    EXPECT_LE(v, 0.75);
  }
}

TEST(Audit, SingleStepAndReportedConstants) {
  auto c = small("boyan", "pfgtd+", 3, 1);
  const auto r = run_regret_audit(c, 1);
  ASSERT_EQ(r.rows.size(), 3u);
  const auto p = prepare(c);
  EXPECT_DOUBLE_EQ(r.lambda_max_M, p.models.front().lambda_max_M);
  EXPECT_DOUBLE_EQ(r.radius, p.radius);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.steps, 1);
    EXPECT_GE(row.gap, 0.0);
    // the gap-attaining comparators always satisfy the inequality
    EXPECT_TRUE(row.pass_sup);
  }
}

// With exact gradients, R_theta(theta*) + R_y(y*) >= T (L(theta_avg, y*) - L(theta*, y_avg)) >= 0,
// and regret against the gap-attaining comparators bounds the gap itself. Regret against the
// saddle point alone bounds only the former, which can be much smaller than the gap.
TEST(Audit, ExpectedGradientsSatisfyFolkInequality) {
  for (const std::string env : {"random-walk-tabular", "boyan", "baird"}) {
    auto c = small(env, "pfgtd+", 2, 300);
    c.audit_gradients = "expected";
    const auto r = run_regret_audit(c, 1);
    EXPECT_EQ(r.passed_sup, 2) << env;
    for (const auto& row : r.rows)
      EXPECT_GE(row.regret_theta + row.regret_y, -1e-9 * std::max(1.0, std::abs(row.regret_theta)));
  }
}

TEST(Audit, RejectsBaselinesAndMultiSignal) {
  EXPECT_THROW(run_regret_audit(small("boyan", "td")), std::invalid_argument);
  EXPECT_THROW(run_regret_audit(small("multi-scale", "pfgtd")), std::invalid_argument);
}

TEST(Output, FormatDouble) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(kInf), "inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
}

TEST(Output, WriteTextCreatesDirectories) {
  const fs::path dir = fs::temp_directory_path() / "pfgtd_write_test" / "nested";
  fs::remove_all(dir.parent_path());
  write_text(dir / "x.txt", "abc");
  EXPECT_EQ(slurp(dir / "x.txt"), "abc");
  fs::remove_all(dir.parent_path());
}

// End-to-end: the CLI writes byte-identical files for identical inputs.
TEST(Cli, RepeatedRunsAreByteIdentical) {
  const char* cli = std::getenv("PFGTD_CLI");
  if (!cli) GTEST_SKIP() << "PFGTD_CLI not set";
  const fs::path base = fs::temp_directory_path() / "pfgtd_cli_repeat";
  fs::remove_all(base);
  const std::string args = " --env boyan --algo pfgtd+ --runs 3 --steps 200 --seed 9 --threads 2 ";
  for (const char* sub : {"a", "b"}) {
    const std::string cmd = std::string(cli) + " run" + args + "--out " + (base / sub).string() + " > /dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0) << cmd;
  }
  for (const char* f : {"boyan_pfgtd+.csv", "boyan_pfgtd+_summary.json"}) {
    const std::string a = slurp(base / "a" / f), b = slurp(base / "b" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, b) << f;
  }
  const std::string bad = std::string(cli) + " run --env nowhere --out " + base.string() + " 2> /dev/null";
  const int status = std::system(bad.c_str());
  EXPECT_NE(status, 0);
  fs::remove_all(base);
}
