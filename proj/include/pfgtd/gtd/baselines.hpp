#pragma once

// Step-size-tuned baselines: semi-gradient TD(0), GTD2, TDC and TDRC.
// Unprojected; report the last iterate unless averaging is requested.

#include "pfgtd/gtd/learner.hpp"

#include <stdexcept>
#include <string>

namespace pfgtd::gtd {

enum class BaselineAlgorithm { td, gtd2, tdc, tdrc };

inline const char* to_string(BaselineAlgorithm a) {
  switch (a) {
    case BaselineAlgorithm::td: return "td";
    case BaselineAlgorithm::gtd2: return "gtd2";
    case BaselineAlgorithm::tdc: return "tdc";
    case BaselineAlgorithm::tdrc: return "tdrc";
  }
  return "?";
}

struct BaselineConfig {
  BaselineAlgorithm algorithm = BaselineAlgorithm::td;
  double step_size = 0.1;
  double secondary_step_ratio = 1.0;  // TDC: y step = ratio * alpha
  double tdrc_beta = 1.0;

  void validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("step size must be positive");
    if (!(secondary_step_ratio > 0.0)) throw std::invalid_argument("secondary step ratio must be positive");
    if (!(tdrc_beta >= 0.0)) throw std::invalid_argument("TDRC beta must be nonnegative");
  }
};

/// In-place update of (theta, y) from one transition.
inline void baseline_step(const BaselineConfig& c, Vector& theta, Vector& y, const TransitionSample& s,
                          double gamma) {
  const double delta = s.reward + gamma * s.phi_next.dot(theta) - s.phi.dot(theta);
  const double a = c.step_size;
  switch (c.algorithm) {
    case BaselineAlgorithm::td:
      theta += (a * s.rho * delta) * s.phi;
      return;
    case BaselineAlgorithm::gtd2: {
      const double phi_y = s.phi.dot(y);
      theta += (a * s.rho * phi_y) * (s.phi - gamma * s.phi_next);
      y += (a * s.rho * (delta - phi_y)) * s.phi;
      return;
    }
    case BaselineAlgorithm::tdc: {
      const double phi_y = s.phi.dot(y);
      theta += (a * s.rho) * (delta * s.phi - (gamma * phi_y) * s.phi_next);
      y += (c.secondary_step_ratio * a * s.rho * (delta - phi_y)) * s.phi;
      return;
    }
    case BaselineAlgorithm::tdrc: {
      const double phi_y = s.phi.dot(y);
      theta += (a * s.rho) * (delta * s.phi - (gamma * phi_y) * s.phi_next);
      y += a * ((s.rho * delta - phi_y) * s.phi - c.tdrc_beta * y);
      return;
    }
  }
}

class BaselineLearner final : public Evaluator {
 public:
  BaselineLearner(BaselineConfig config, Eigen::Index dim, double gamma, bool report_average = false,
                  const Vector* initial_theta = nullptr)
      : config_(config), state_(LearnerState::zeros(dim)), gamma_(gamma), average_(report_average) {
    config_.validate();
    theta_ = initial_theta ? *initial_theta : Vector::Zero(dim);
    y_ = Vector::Zero(dim);
  }

  void step(const TransitionSample& sample) override {
    // the pair used this round is recorded before the update, like the OLO players' plays
    state_.record(theta_, y_);
    baseline_step(config_, theta_, y_, sample, gamma_);
  }

  /// Last iterate is the post-update weights; the average covers the pre-update ones.
  Vector estimate() const override {
    if (state_.step_count == 0 || !average_) return theta_;
    return state_.theta_avg;
  }
  const LearnerState& state() const override { return state_; }
  std::string name() const override { return to_string(config_.algorithm); }

  const Vector& theta() const { return theta_; }
  const Vector& y() const { return y_; }
  const BaselineConfig& config() const { return config_; }

 private:
  BaselineConfig config_;
  LearnerState state_;
  double gamma_;
  bool average_;
  Vector theta_;
  Vector y_;
};

}  // namespace pfgtd::gtd
