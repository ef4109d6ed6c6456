#pragma once

#include "pfgtd/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pfgtd::olo {

/// Coin-betting state for one dimension. The next bet is beta * wealth.
struct BettorState {
  double beta = 0.0;
  double wealth = 1.0;
  double curvature_sum = 1.0;  // 1 + sum of squared ONS gradients

  double bet() const { return beta * wealth; }
  friend bool operator==(const BettorState&, const BettorState&) = default;
};

inline const double kOnsGain = 2.0 / (2.0 - std::log(3.0));

/// Wealth saturates here instead of overflowing on long one-sided streams; bets and
/// losses stay finite because |beta * loss| <= 1/2.
inline constexpr double kWealthCap = 1e300;

/// One round of coin-betting ONS with hints.
///
/// Requires |loss| <= current_hint <= next_hint. The returned beta is clamped to
/// [-1/(2 next_hint), 1/(2 next_hint)], so |beta * loss| <= 1/2 next round and
/// wealth stays positive.
inline BettorState ons_hints_step(const BettorState& state, double loss, double current_hint,
                                  double next_hint) {
  detail::require(detail::within_hint(std::abs(loss), current_hint),
                  "ONS loss exceeds the hint in force; clip before betting");
  detail::require(next_hint >= current_hint, "ONS hint decreased");
  detail::require(next_hint > 0.0, "ONS hint must be positive");

  BettorState next = state;
  const double stake = state.beta * loss;
  next.wealth = std::min(state.wealth - loss * state.bet(), kWealthCap);
  // |beta*loss| <= 1/2 by the clamp invariant
  const double m = loss / (1.0 - stake);
  next.curvature_sum = state.curvature_sum + m * m;
  const double unclamped = state.beta - kOnsGain * m / next.curvature_sum;
  const double cap = 1.0 / (2.0 * next_hint);
  next.beta = std::clamp(unclamped, -cap, cap);
  return next;
}

/// Regret bound of ONS with hints against comparator magnitude |u|. Test oracle only.
inline double ons_regret_bound(double comparator_mag, double initial_wealth, double terminal_hint,
                               double grad_sq_sum) {
  const double u = std::abs(comparator_mag);
  if (u == 0.0) return initial_wealth;
  const double h = terminal_hint;
  const double g2 = grad_sq_sum;
  const double first =
      8.0 * h *
      (std::log(16.0 * u * h) + 1.0 / (4.0 * h * h) + 4.5 * std::log1p(g2));
  // log(4 g2^10 e^{1/(2h^2)} u^2 / W0^2 + 1), evaluated in log space
  const double log_arg = std::log(4.0) + 10.0 * std::log(g2) + 1.0 / (2.0 * h * h) +
                         2.0 * std::log(u) - 2.0 * std::log(initial_wealth);
  const double log_term =
      log_arg > 30.0 ? log_arg + std::log1p(std::exp(-log_arg)) : std::log1p(std::exp(log_arg));
  const double second = 2.0 * std::sqrt(g2 * log_term);
  return initial_wealth + u * std::max(first, second);
}

}  // namespace pfgtd::olo
