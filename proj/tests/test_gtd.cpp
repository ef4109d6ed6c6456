#include "pfgtd/env/classic.hpp"
#include "pfgtd/env/sampler.hpp"
#include "pfgtd/gtd/baselines.hpp"
#include "pfgtd/gtd/factory.hpp"
#include "pfgtd/gtd/learner.hpp"
#include "pfgtd/gtd/regret.hpp"
#include "pfgtd/gtd/subgradients.hpp"
#include "pfgtd/metrics/exact_model.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pfgtd;
using namespace pfgtd::gtd;

namespace {

Vector unit(Eigen::Index d, Eigen::Index i) {
  Vector v = Vector::Zero(d);
  v[i] = 1.0;
  return v;
}

TransitionSample sample(Vector phi, Vector next, double r, double rho) {
  return TransitionSample{std::move(phi), std::move(next), r, rho};
}

std::vector<env::MdpSpec> all_classic() {
  return {env::random_walk(env::RandomWalkFeatures::tabular), env::random_walk(env::RandomWalkFeatures::dependent),
          env::random_walk(env::RandomWalkFeatures::inverted), env::boyan_chain(), env::baird_star(),
          env::baird_star(env::BairdBehavior::classic)};
}

}  // namespace

TEST(Subgradients, ZeroIteratesLeaveRewardTerm) {
  const auto s = sample(unit(3, 0) * 2.0, unit(3, 1), 1.5, 0.8);
  const auto g = make_subgradients(s, Vector::Zero(3), Vector::Zero(3), 0.9);
  EXPECT_TRUE(g.g_theta.isZero(0.0));
  EXPECT_TRUE(g.g_y.isApprox(-0.8 * 1.5 * s.phi));
}

TEST(Subgradients, HandEvaluatedRankOneProducts) {
  const auto s = sample(unit(4, 0), unit(4, 1), 1.0, 2.0);
  const auto g = make_subgradients(s, Vector::Zero(4), unit(4, 0), 0.9);
  Vector et(4), ey(4);
  et << -2.0, 1.8, 0.0, 0.0;
  ey << -1.0, 0.0, 0.0, 0.0;
  EXPECT_TRUE(g.g_theta.isApprox(et, 1e-15));
  EXPECT_TRUE(g.g_y.isApprox(ey, 1e-15));
  EXPECT_NEAR(g.joint_norm(), std::sqrt(4.0 + 1.8 * 1.8 + 1.0), 1e-15);
}

TEST(Subgradients, NeuUsesIdentityMetric) {
  oracle::Gen gen(1);
  const auto s = sample(gen.normal_vector(3), gen.normal_vector(3), 0.7, 1.3);
  const Vector th = gen.normal_vector(3), y = gen.normal_vector(3);
  const auto a = make_subgradients(s, th, y, 0.5, Objective::mspbe);
  const auto b = make_subgradients(s, th, y, 0.5, Objective::neu);
  EXPECT_TRUE((b.g_y - a.g_y).isApprox(y - s.phi * s.phi.dot(y), 1e-12));
  EXPECT_EQ(a.g_theta, b.g_theta);
}

TEST(Subgradients, DimensionMismatchThrows) {
  const auto s = sample(unit(3, 0), unit(3, 1), 0.0, 1.0);
  EXPECT_THROW(make_subgradients(s, Vector::Zero(2), Vector::Zero(3), 0.9), std::invalid_argument);
}

// Averaging the per-transition subgradients over the exact transition law gives
// the expected field (-A^T y, -b + A theta + M y).
TEST(Subgradients, UnbiasedUnderExactTransitionLaw) {
  oracle::Gen gen(2);
  for (const auto& spec : all_classic()) {
    for (Objective obj : {Objective::mspbe, Objective::neu}) {
      const auto model = metrics::build_exact_model(spec, obj);
      for (int k = 0; k < 5; ++k) {
        const Vector th = gen.normal_vector(spec.dim(), 3.0), y = gen.normal_vector(spec.dim(), 3.0);
        const auto e = oracle::enumerate_expected_subgradients(spec, model.xi, th, y, obj);
        const auto m = model.expected_subgradients(th, y);
        EXPECT_LE((e.g_theta - m.g_theta).lpNorm<Eigen::Infinity>(), 1e-10) << spec.name;
        EXPECT_LE((e.g_y - m.g_y).lpNorm<Eigen::Infinity>(), 1e-10) << spec.name;
      }
    }
  }
}

TEST(Subgradients, NormsStayBelowWorstCaseBounds) {
  oracle::Gen gen(3);
  const double D = 100.0;
  for (const auto& spec : all_classic()) {
    for (Objective obj : {Objective::mspbe, Objective::neu}) {
      const auto bounds = subgradient_bounds(spec.dim(), spec.rho_max(), spec.feature_bound(), spec.reward_bound(),
                                             spec.gamma, D, obj);
      auto st = env::make_sampler(spec, 4);
      for (int t = 0; t < 20000; ++t) {
        const auto s = env::sample_transition(spec, st).sample;
        const Vector th = gen.in_ball(spec.dim(), D), y = gen.in_ball(spec.dim(), D);
        const auto g = make_subgradients(s, th, y, spec.gamma, obj);
        ASSERT_LE(g.g_theta.norm(), bounds.theta * (1 + 1e-12)) << spec.name;
        ASSERT_LE(g.g_y.norm(), bounds.y * (1 + 1e-12)) << spec.name;
      }
    }
  }
}

TEST(Regret, ZeroWhenPlayingComparator) {
  RegretAccumulator r(2);
  oracle::Gen gen(4);
  const Vector z = gen.normal_vector(2);
  for (int t = 0; t < 10; ++t) r.record(z, gen.normal_vector(2));
  EXPECT_NEAR(r.regret(z), 0.0, 1e-12);
}

TEST(Regret, SingleStep) {
  RegretAccumulator r(3);
  r.record(Vector::Constant(3, 0.0) + unit(3, 0) * 2.0, unit(3, 0));
  EXPECT_DOUBLE_EQ(r.regret(Vector::Zero(3)), 2.0);
}

TEST(Regret, MatchesDirectSumForAnyComparator) {
  oracle::Gen gen(5);
  RegretAccumulator r(3);
  std::vector<Vector> zs, gs;
  for (int t = 0; t < 200; ++t) {
    zs.push_back(gen.normal_vector(3));
    gs.push_back(gen.normal_vector(3));
    r.record(zs.back(), gs.back());
  }
  const Vector u = gen.normal_vector(3);
  double direct = 0.0;
  for (std::size_t t = 0; t < zs.size(); ++t) direct += gs[t].dot(zs[t] - u);
  EXPECT_NEAR(r.regret(u), direct, 1e-10);
}

TEST(LearnerState, AveragesFollowRecurrence) {
  oracle::Gen gen(6);
  LearnerState s = LearnerState::zeros(3);
  Vector sum = Vector::Zero(3);
  for (int t = 1; t <= 1000; ++t) {
    const Vector prev = s.theta_avg;
    const Vector th = gen.normal_vector(3);
    s.record(th, gen.normal_vector(3));
    sum += th;
    ASSERT_LE((s.theta_avg - (prev + (th - prev) / t)).norm(), 1e-12);
    ASSERT_LE((s.theta_avg - sum / t).norm(), 1e-10);
  }
}

TEST(SaddlePoint, FirstStepPlaysZeroWithDefaults) {
  auto solver = make_pfgtd_solver<olo::ParameterFree>(PfVariant::pf, 3, 0.9, PfgtdOptions{});
  solver->step(sample(unit(3, 0), unit(3, 1), 1.0, 1.0));
  EXPECT_TRUE(solver->state().theta.isZero(0.0));
  EXPECT_TRUE(solver->state().y.isZero(0.0));
  EXPECT_TRUE(solver->state().theta_avg.isZero(0.0));
}

TEST(SaddlePoint, AverageOfTwoStepsIsMidpoint) {
  auto solver = make_pfgtd_solver<olo::Combined>(PfVariant::pf_plus, 3, 0.9, PfgtdOptions{});
  const auto s = sample(unit(3, 0), unit(3, 1), 1.0, 1.0);
  solver->step(s);
  const Vector t1 = solver->state().theta, y1 = solver->state().y;
  solver->step(s);
  const Vector t2 = solver->state().theta, y2 = solver->state().y;
  EXPECT_TRUE(solver->state().theta_avg.isApprox(0.5 * (t1 + t2)) || (t1 + t2).isZero(0.0));
  EXPECT_TRUE(solver->state().y_avg.isApprox(0.5 * (y1 + y2)));
}

// The theta player's output on a round never depends on the y player's internals.
TEST(SaddlePoint, PlayersDoNotCommunicate) {
  const auto spec = env::random_walk(env::RandomWalkFeatures::dependent);
  auto a = make_olo_pair<olo::CoordinateWise>(spec.dim(), PfgtdOptions{});
  auto b = make_olo_pair<olo::CoordinateWise>(spec.dim(), PfgtdOptions{});
  auto st = env::make_sampler(spec, 1);
  LearnerState sa = LearnerState::zeros(spec.dim()), sb = sa;
  for (int t = 0; t < 200; ++t) {
    const auto s = env::sample_transition(spec, st).sample;
    sp_reduction_step(sa, a.theta, a.y, s, spec.gamma, Objective::mspbe);
    sp_reduction_step(sb, b.theta, b.y, s, spec.gamma, Objective::mspbe);
  }
  // perturb b's y player only
  b.y.play();
  b.y.update(Vector::Constant(spec.dim(), 0.37));
  EXPECT_EQ(a.theta.play(), b.theta.play());
}

TEST(SaddlePoint, PlayedIteratesStayInBalls) {
  const auto spec = env::baird_star();
  PfgtdOptions o;
  o.theta_set = olo::FeasibleSet(5.0);
  o.y_set = olo::FeasibleSet(5.0);
  for (PfVariant v : {PfVariant::pf, PfVariant::cw_pf, PfVariant::pf_plus, PfVariant::free_range}) {
    auto learner = make_pfgtd(v, spec.dim(), spec.gamma, o);
    auto st = env::make_sampler(spec, 2);
    for (int t = 0; t < 3000; ++t) {
      learner->step(env::sample_transition(spec, st).sample);
      ASSERT_LE(learner->state().theta.norm(), 5.0 * (1 + 1e-12)) << to_string(v);
      ASSERT_LE(learner->state().y.norm(), 5.0 * (1 + 1e-12)) << to_string(v);
    }
  }
}

TEST(Factory, DefaultFirstPlayIsZero) {
  for (PfVariant v : {PfVariant::pf, PfVariant::cw_pf, PfVariant::pf_plus, PfVariant::free_range}) {
    auto learner = make_pfgtd(v, 4, 0.9);
    EXPECT_TRUE(learner->estimate().isZero(0.0)) << to_string(v);
  }
}

TEST(Factory, BairdWarmStartPlaysInitialWeights) {
  const Vector theta1 = env::baird_initial_theta();
  PfgtdOptions o;
  o.warm_start = theta1;
  auto pf = make_olo_pair<olo::ParameterFree>(8, o);
  auto cw = make_olo_pair<olo::CoordinateWise>(8, o);
  auto plus = make_olo_pair<olo::Combined>(8, o);
  EXPECT_TRUE(pf.theta.play().isApprox(theta1, 1e-14));
  EXPECT_EQ(cw.theta.play(), theta1);
  EXPECT_TRUE(plus.theta.play().isApprox(theta1, 1e-14));
  EXPECT_EQ(plus.theta.inner().play(), plus.theta.inner().pf().play() + plus.theta.inner().cw().play());
  EXPECT_TRUE(pf.y.play().isZero(0.0));
  EXPECT_DOUBLE_EQ(cw.theta.inner().bettors()[7].beta, 0.5);
  EXPECT_DOUBLE_EQ(cw.theta.inner().bettors()[7].wealth, 20.0);
}

TEST(Factory, CoordinatewiseWarmStartRejectsNonPositive) {
  PfgtdOptions o;
  Vector w = Vector::Ones(3);
  w[1] = 0.0;
  o.warm_start = w;
  EXPECT_THROW(make_pfgtd(PfVariant::cw_pf, 3, 0.9, o), std::invalid_argument);
  EXPECT_THROW(make_pfgtd(PfVariant::pf_plus, 3, 0.9, o), std::invalid_argument);
  EXPECT_NO_THROW(make_pfgtd(PfVariant::pf, 3, 0.9, o));
}

TEST(Factory, WealthSplits) {
  PfgtdOptions o;
  o.initial_wealth = 2.0;
  auto pf = make_olo_pair<olo::ParameterFree>(4, o);
  EXPECT_DOUBLE_EQ(pf.theta.inner().bettor().wealth, 1.0);
  auto cw = make_olo_pair<olo::CoordinateWise>(4, o);
  for (const auto& b : cw.y.inner().bettors()) EXPECT_DOUBLE_EQ(b.wealth, 2.0);
  auto plus = make_olo_pair<olo::Combined>(4, o);
  EXPECT_DOUBLE_EQ(plus.theta.inner().pf().bettor().wealth, 4.0);
  for (const auto& b : plus.theta.inner().cw().bettors()) EXPECT_DOUBLE_EQ(b.wealth, 1.0);
}

TEST(Baselines, NoErrorNoChange) {
  const auto s = sample(unit(3, 0), unit(3, 1), 0.0, 1.3);
  for (auto a : {BaselineAlgorithm::td, BaselineAlgorithm::gtd2, BaselineAlgorithm::tdc, BaselineAlgorithm::tdrc}) {
    Vector th = Vector::Zero(3), y = Vector::Zero(3);
    baseline_step(BaselineConfig{a, 0.5, 1.0, 1.0}, th, y, s, 0.9);
    EXPECT_TRUE(th.isZero(0.0)) << to_string(a);
    EXPECT_TRUE(y.isZero(0.0)) << to_string(a);
  }
}

TEST(Baselines, TabularTdIsClassicUpdate) {
  Vector th(3), y = Vector::Zero(3);
  th << 0.5, -1.0, 2.0;
  const auto s = sample(unit(3, 1), unit(3, 2), 0.3, 1.0);
  const double delta = 0.3 + 0.9 * 2.0 - (-1.0);
  baseline_step(BaselineConfig{BaselineAlgorithm::td, 0.25, 1.0, 1.0}, th, y, s, 0.9);
  EXPECT_DOUBLE_EQ(th[1], -1.0 + 0.25 * delta);
  EXPECT_DOUBLE_EQ(th[0], 0.5);
  EXPECT_DOUBLE_EQ(th[2], 2.0);
}

TEST(Baselines, TdrcWithZeroSecondaryWeights) {
  Vector th(2), y = Vector::Zero(2);
  th << 1.0, -1.0;
  const auto s = sample(unit(2, 0), unit(2, 1), 0.5, 2.0);
  const double delta = 0.5 + 0.9 * -1.0 - 1.0;
  baseline_step(BaselineConfig{BaselineAlgorithm::tdrc, 0.1, 1.0, 1.0}, th, y, s, 0.9);
  EXPECT_TRUE(y.isApprox(0.1 * 2.0 * delta * unit(2, 0)));
}

TEST(Baselines, HandEvaluatedGtd2AndTdc) {
  Vector th(2), y(2);
  th << 1.0, 2.0;
  y << 0.5, -0.5;
  const auto s = sample(unit(2, 0), unit(2, 1), 1.0, 1.5);
  const double g = 0.8, a = 0.1;
  const double delta = 1.0 + g * 2.0 - 1.0;  // 1.6
  const double phi_y = 0.5;
  {
    Vector t = th, yy = y;
    baseline_step(BaselineConfig{BaselineAlgorithm::gtd2, a, 1.0, 1.0}, t, yy, s, g);
    EXPECT_NEAR(t[0], 1.0 + a * 1.5 * phi_y * 1.0, 1e-15);
    EXPECT_NEAR(t[1], 2.0 + a * 1.5 * phi_y * -g, 1e-15);
    EXPECT_NEAR(yy[0], 0.5 + a * 1.5 * (delta - phi_y), 1e-15);
    EXPECT_NEAR(yy[1], -0.5, 1e-15);
  }
  {
    Vector t = th, yy = y;
    baseline_step(BaselineConfig{BaselineAlgorithm::tdc, a, 2.0, 1.0}, t, yy, s, g);
    EXPECT_NEAR(t[0], 1.0 + a * 1.5 * delta, 1e-15);
    EXPECT_NEAR(t[1], 2.0 - a * 1.5 * g * phi_y, 1e-15);
    EXPECT_NEAR(yy[0], 0.5 + 2.0 * a * 1.5 * (delta - phi_y), 1e-15);
  }
}

TEST(Baselines, InvalidConfigRejected) {
  EXPECT_THROW((BaselineLearner(BaselineConfig{BaselineAlgorithm::td, 0.0, 1.0, 1.0}, 2, 0.9)), std::invalid_argument);
  EXPECT_THROW((BaselineLearner(BaselineConfig{BaselineAlgorithm::tdc, 0.1, -1.0, 1.0}, 2, 0.9)),
               std::invalid_argument);
}

TEST(Baselines, LastIterateUnlessAveraging) {
  const auto spec = env::random_walk(env::RandomWalkFeatures::tabular);
  BaselineLearner last(BaselineConfig{BaselineAlgorithm::td, 0.1, 1.0, 1.0}, 5, 1.0, false);
  BaselineLearner avg(BaselineConfig{BaselineAlgorithm::td, 0.1, 1.0, 1.0}, 5, 1.0, true);
  auto st = env::make_sampler(spec, 3);
  for (int t = 0; t < 100; ++t) {
    const auto s = env::sample_transition(spec, st).sample;
    last.step(s);
    avg.step(s);
  }
  EXPECT_EQ(last.estimate(), last.theta());
  EXPECT_EQ(avg.estimate(), avg.state().theta_avg);
  EXPECT_EQ(avg.theta(), last.theta());
}

// With exact expected gradients the folk-theorem inequality holds for every comparator:
// L(theta_bar, y) - L(theta, y_bar) <= (R^theta(theta) + R^y(y)) / T.
TEST(SaddlePoint, FolkInequalityWithExactGradients) {
  oracle::Gen gen(8);
  const auto spec = env::random_walk(env::RandomWalkFeatures::dependent);
  const auto model = metrics::build_exact_model(spec);
  auto learner = make_pfgtd_solver<olo::Combined>(PfVariant::pf_plus, spec.dim(), spec.gamma, PfgtdOptions{});
  const GradientOracle oracle = [&](const Vector& th, const Vector& y) { return model.expected_subgradients(th, y); };
  for (int t = 0; t < 500; ++t) learner->step_with(oracle);
  const auto& st = learner->state();
  const double T = 500.0;
  for (int k = 0; k < 200; ++k) {
    const Vector th = gen.in_ball(spec.dim(), 100.0), y = gen.in_ball(spec.dim(), 100.0);
    const double lhs = model.lagrangian(st.theta_avg, y) - model.lagrangian(th, st.y_avg);
    const double rhs = (learner->regret()->theta.regret(th) + learner->regret()->y.regret(y)) / T;
    ASSERT_LE(lhs, rhs + 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}
