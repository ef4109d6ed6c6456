#pragma once

#include "pfgtd/common.hpp"
#include "pfgtd/gtd/regret.hpp"
#include "pfgtd/gtd/subgradients.hpp"
#include "pfgtd/gtd/transition.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace pfgtd::gtd {

/// Current and running-average iterates of a two-player learner.
struct LearnerState {
  Vector theta;
  Vector y;
  Vector theta_avg;
  Vector y_avg;
  std::int64_t step_count = 0;

  static LearnerState zeros(Eigen::Index dim) {
    return {Vector::Zero(dim), Vector::Zero(dim), Vector::Zero(dim), Vector::Zero(dim), 0};
  }

  /// Stores the played pair and folds it into the averages.
  void record(const Vector& th, const Vector& yy) {
    theta = th;
    y = yy;
    ++step_count;
    const double inv = 1.0 / static_cast<double>(step_count);
    theta_avg += (theta - theta_avg) * inv;
    y_avg += (y - y_avg) * inv;
  }
};

/// One round of the saddle-point to online-learning reduction: each player plays,
/// the subgradients are taken at the played pair, and each player gets its own
/// gradient back. The players never see each other's state.
template <class ThetaOlo, class YOlo>
SubgradientPair sp_reduction_step(LearnerState& state, ThetaOlo& theta_player, YOlo& y_player,
                                  const TransitionSample& sample, double gamma,
                                  Objective objective, RegretTracker* regret = nullptr) {
  const Vector theta = theta_player.play();
  const Vector y = y_player.play();
  SubgradientPair g = make_subgradients(sample, theta, y, gamma, objective);
  theta_player.update(g.g_theta);
  y_player.update(g.g_y);
  state.record(theta, y);
  if (regret != nullptr) {
    regret->theta.record(theta, g.g_theta);
    regret->y.record(y, g.g_y);
  }
  return g;
}

/// Exact gradient field (theta, y) -> subgradients, for runs without sampling noise.
using GradientOracle = std::function<SubgradientPair(const Vector& theta, const Vector& y)>;

/// Type-erased policy-evaluation learner used by the experiment runner.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual void step(const TransitionSample& sample) = 0;
  virtual void step_with(const GradientOracle&) {
    throw std::logic_error(name() + " does not accept a gradient oracle");
  }
  /// The value-function weights the method reports (average or last iterate);
  /// before the first step, the initial weights.
  virtual Vector estimate() const = 0;
  virtual const LearnerState& state() const = 0;
  virtual const RegretTracker* regret() const { return nullptr; }
  virtual std::string name() const = 0;
};

/// Saddle-point solver over two constrained OLO players.
template <class ThetaOlo, class YOlo>
class SaddlePointSolver final : public Evaluator {
 public:
  SaddlePointSolver(std::string name, ThetaOlo theta_player, YOlo y_player, Eigen::Index dim,
                    double gamma, Objective objective, bool report_average = true)
      : name_(std::move(name)),
        theta_(std::move(theta_player)),
        y_(std::move(y_player)),
        state_(LearnerState::zeros(dim)),
        regret_{RegretAccumulator(dim), RegretAccumulator(dim)},
        gamma_(gamma),
        objective_(objective),
        average_(report_average) {
    initial_ = theta_.play();
  }

  void step(const TransitionSample& sample) override {
    last_ = sp_reduction_step(state_, theta_, y_, sample, gamma_, objective_, &regret_);
  }

  void step_with(const GradientOracle& oracle) override {
    const Vector theta = theta_.play();
    const Vector y = y_.play();
    last_ = oracle(theta, y);
    theta_.update(last_.g_theta);
    y_.update(last_.g_y);
    state_.record(theta, y);
    regret_.theta.record(theta, last_.g_theta);
    regret_.y.record(y, last_.g_y);
  }

  Vector estimate() const override {
    if (state_.step_count == 0) return initial_;
    return average_ ? state_.theta_avg : state_.theta;
  }
  const LearnerState& state() const override { return state_; }
  const RegretTracker* regret() const override { return &regret_; }
  std::string name() const override { return name_; }

  const SubgradientPair& last_subgradients() const { return last_; }
  ThetaOlo& theta_player() { return theta_; }
  YOlo& y_player() { return y_; }
  const ThetaOlo& theta_player() const { return theta_; }
  const YOlo& y_player() const { return y_; }

 private:
  std::string name_;
  ThetaOlo theta_;
  YOlo y_;
  LearnerState state_;
  RegretTracker regret_;
  double gamma_;
  Objective objective_;
  bool average_;
  Vector initial_;
  SubgradientPair last_;
};

}  // namespace pfgtd::gtd
