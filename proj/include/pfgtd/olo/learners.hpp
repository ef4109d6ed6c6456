#pragma once

// Unconstrained hinted learners: PF (dimension-free), CW-PF (coordinatewise)
// and PF+ (sum of both). Each exposes play() and update(fed, next_hint), where
// `fed` must respect the hint received on the previous update (or the initial
// hint on round one).

#include "pfgtd/common.hpp"
#include "pfgtd/olo/hint.hpp"
#include "pfgtd/olo/ons_bettor.hpp"
#include "pfgtd/olo/reductions.hpp"

#include <cmath>
#include <vector>

namespace pfgtd::olo {

/// Scale from a 1-D ONS bettor, direction from adaptive gradient descent on the unit ball.
class ParameterFree {
 public:
  static constexpr HintMode kHintMode = HintMode::scalar;

  ParameterFree(Eigen::Index dim, double initial_wealth, double initial_hint)
      : direction_{Vector::Zero(dim), 0.0}, hint_(initial_hint) {
    if (!(initial_wealth > 0.0)) throw std::invalid_argument("PF initial wealth must be positive");
    if (!(initial_hint > 0.0)) throw std::invalid_argument("PF initial hint must be positive");
    bettor_.wealth = initial_wealth;
  }

  /// Overrides the initial direction u_1 (must lie in the unit ball).
  void set_direction(Vector u) {
    detail::require(u.size() == direction_.point.size(), "direction dimension mismatch");
    detail::require(u.norm() <= 1.0 + 1e-12, "initial direction must lie in the unit ball");
    direction_.point = std::move(u);
  }

  /// Seeds the bettor so the first play equals `target`. Uses the largest fraction the
  /// hint allows, 1/(2h); with h = 1 this is beta = 1/2, wealth = 2||target||.
  void warm_start(const Vector& target) {
    const double n = target.norm();
    if (n == 0.0) return;
    bettor_.beta = 1.0 / (2.0 * hint_);
    bettor_.wealth = 2.0 * hint_ * n;
    set_direction(target / n);
  }

  Vector play() const { return dimension_free_play(bettor_.bet(), direction_.point); }

  void update(const Vector& fed, double next_hint) {
    const double s = dimension_free_feedback(fed, direction_.point);
    bettor_ = ons_hints_step(bettor_, s, hint_, next_hint);
    direction_ = unit_ball_gd_step(direction_, fed);
    hint_ = next_hint;
  }
  void update(const Vector& fed, const HintState& next_hint) {
    update(fed, next_hint.magnitude());
  }

  const BettorState& bettor() const { return bettor_; }
  const DirectionState& direction() const { return direction_; }
  double hint() const { return hint_; }
  Eigen::Index dim() const { return direction_.point.size(); }

 private:
  BettorState bettor_;
  DirectionState direction_;
  double hint_;
};

/// An independent ONS-with-hints bettor per coordinate.
class CoordinateWise {
 public:
  static constexpr HintMode kHintMode = HintMode::vector;

  CoordinateWise(Eigen::Index dim, double initial_wealth, const Vector& initial_hint)
      : bettors_(static_cast<std::size_t>(dim)), hint_(initial_hint) {
    if (!(initial_wealth > 0.0)) throw std::invalid_argument("CW-PF initial wealth must be positive");
    detail::require(initial_hint.size() == dim, "CW-PF hint dimension mismatch");
    if (!((initial_hint.array() > 0.0).all()))
      throw std::invalid_argument("CW-PF initial hints must be positive");
    for (auto& b : bettors_) b.wealth = initial_wealth;
  }
  CoordinateWise(Eigen::Index dim, double initial_wealth, double initial_hint)
      : CoordinateWise(dim, initial_wealth, Vector::Constant(dim, initial_hint)) {}

  /// Coordinate i bets 1/(2h_i) of wealth 2 h_i target_i, so the first play is `target`.
  void warm_start(const Vector& target) {
    detail::require(target.size() == dim(), "warm start dimension mismatch");
    for (Eigen::Index i = 0; i < target.size(); ++i)
      if (!(target[i] > 0.0))
        throw std::invalid_argument("coordinatewise warm start needs strictly positive entries");
    for (Eigen::Index i = 0; i < target.size(); ++i) {
      auto& b = bettors_[static_cast<std::size_t>(i)];
      b.beta = 1.0 / (2.0 * hint_[i]);
      b.wealth = 2.0 * hint_[i] * target[i];
    }
  }

  Vector play() const {
    Vector w(dim());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = bettors_[static_cast<std::size_t>(i)].bet();
    return w;
  }

  void update(const Vector& fed, const Vector& next_hint) {
    detail::require(fed.size() == dim() && next_hint.size() == dim(), "CW-PF dimension mismatch");
    for (Eigen::Index i = 0; i < fed.size(); ++i) {
      auto& b = bettors_[static_cast<std::size_t>(i)];
      b = ons_hints_step(b, fed[i], hint_[i], next_hint[i]);
    }
    hint_ = next_hint;
  }
  void update(const Vector& fed, const HintState& next_hint) { update(fed, next_hint.values()); }

  const std::vector<BettorState>& bettors() const { return bettors_; }
  const Vector& hint() const { return hint_; }
  Eigen::Index dim() const { return hint_.size(); }

 private:
  std::vector<BettorState> bettors_;
  Vector hint_;
};

/// PF and CW-PF run side by side on the same feedback; the play is their sum.
/// PF starts with d/2 * W0 and scalar hint ||h_1||/sqrt(d), then receives ||h_{t+1}||.
class Combined {
 public:
  static constexpr HintMode kHintMode = HintMode::vector;

  Combined(Eigen::Index dim, double initial_wealth, const Vector& initial_hint)
      : pf_(dim, 0.5 * static_cast<double>(dim) * initial_wealth,
            initial_hint.norm() / std::sqrt(static_cast<double>(dim))),
        cw_(dim, 0.5 * initial_wealth, initial_hint) {}
  Combined(Eigen::Index dim, double initial_wealth, double initial_hint)
      : Combined(dim, initial_wealth, Vector::Constant(dim, initial_hint)) {}

  /// Each half plays target/2 on round one.
  void warm_start(const Vector& target) {
    pf_.warm_start(0.5 * target);
    cw_.warm_start(0.5 * target);
  }

  Vector play() const { return pf_.play() + cw_.play(); }

  void update(const Vector& fed, const Vector& next_hint) {
    // Only the first round can exceed PF's hint (||h_1||/sqrt(d) < ||h_1||); clip there.
    const double n = fed.norm();
    if (n > pf_.hint() && !detail::within_hint(n, pf_.hint()))
      pf_.update(fed * (pf_.hint() / n), next_hint.norm());
    else
      pf_.update(fed, next_hint.norm());
    cw_.update(fed, next_hint);
  }
  void update(const Vector& fed, const HintState& next_hint) { update(fed, next_hint.values()); }

  const ParameterFree& pf() const { return pf_; }
  const CoordinateWise& cw() const { return cw_; }
  Eigen::Index dim() const { return cw_.dim(); }

 private:
  ParameterFree pf_;
  CoordinateWise cw_;
};

}  // namespace pfgtd::olo
