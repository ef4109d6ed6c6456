#pragma once

// Black-box pieces shared by the parameter-free learners: the unit-ball
// direction learner, the scale/direction split, and the constraint-set
// surrogate.

#include "pfgtd/common.hpp"
#include "pfgtd/olo/feasible_set.hpp"

#include <cmath>

namespace pfgtd::olo {

/// Adaptive projected gradient descent on the unit ball.
struct DirectionState {
  Vector point;
  double grad_sq_sum = 0.0;
};

inline DirectionState unit_ball_gd_step(const DirectionState& state, const Vector& g) {
  detail::require(state.point.size() == g.size(), "direction/gradient dimension mismatch");
  DirectionState next = state;
  next.grad_sq_sum += g.squaredNorm();
  if (next.grad_sq_sum == 0.0) return next;
  const double eta = std::sqrt(2.0) / (2.0 * std::sqrt(next.grad_sq_sum));
  next.point -= eta * g;
  const double n = next.point.norm();
  if (n > 1.0) next.point /= n;
  return next;
}

/// Scale times direction. The scale learner sees s = <g, y>, which obeys |s| <= ||g||.
inline Vector dimension_free_play(double scale, const Vector& direction) {
  return scale * direction;
}

inline double dimension_free_feedback(const Vector& g, const Vector& direction) {
  return g.dot(direction);
}

struct ConstraintFeedback {
  Vector played;
  Vector fed;
  bool penalized = false;
};

/// Projects the proposal into `set` and builds the surrogate subgradient.
/// When the proposal sits outside and <g, proposed - played> < 0, the distance
/// penalty contributes: fed = g - <g, n> n with n the outward unit normal.
inline ConstraintFeedback constraint_set_reduce(const FeasibleSet& set, const Vector& proposed,
                                                const Vector& g) {
  detail::require(proposed.size() == g.size(), "proposal/gradient dimension mismatch");
  ConstraintFeedback out{set.project(proposed), g, false};
  const Vector excess = proposed - out.played;
  const double gap = excess.stableNorm();
  if (gap == 0.0 || g.dot(excess) >= 0.0) return out;
  const Vector normal = excess / gap;
  out.fed = g - g.dot(normal) * normal;
  out.penalized = true;
  return out;
}

}  // namespace pfgtd::olo
