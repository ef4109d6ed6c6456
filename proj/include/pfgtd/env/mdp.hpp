#pragma once

#include "pfgtd/common.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace pfgtd::env {

/// Finite MDP with a behaviour/target policy pair and a linear feature map.
/// Immutable after validate(); terminal states carry zero features.
struct MdpSpec {
  std::string name;
  int n_states = 0;
  int n_actions = 0;
  // transition[s][a][s'] = P(s'|s,a)
  std::vector<std::vector<std::vector<double>>> transition;
  Matrix reward;    // n_states x n_actions, R(s,a)
  double gamma = 0.0;
  Matrix behavior;  // n_states x n_actions
  Matrix target;    // n_states x n_actions
  Matrix features;  // n_states x d, row s is phi(s)
  Vector start_dist;
  std::vector<bool> terminal;
  // Draw every transition's source state from start_dist (continuing i.i.d. data model).
  bool iid_states = false;
  // The features cannot make A and C nonsingular; metrics fall back to pseudo-inverses.
  bool rank_deficient = false;

  Eigen::Index dim() const { return features.cols(); }

  double rho(int s, int a) const {
    return target(s, a) == 0.0 ? 0.0 : target(s, a) / behavior(s, a);
  }

  double rho_max() const {
    double m = 0.0;
    for (int s = 0; s < n_states; ++s)
      if (!terminal[static_cast<std::size_t>(s)])
        for (int a = 0; a < n_actions; ++a)
          if (behavior(s, a) > 0.0) m = std::max(m, rho(s, a));
    return m;
  }

  /// max_s ||phi(s)||_inf
  double feature_bound() const { return features.cwiseAbs().maxCoeff(); }

  double reward_bound() const { return reward.cwiseAbs().maxCoeff(); }

  /// Checks stochasticity, coverage and terminal features; throws std::invalid_argument.
  void validate() const {
    const auto fail = [&](const std::string& why) {
      throw std::invalid_argument("MDP '" + name + "': " + why);
    };
    if (n_states <= 0 || n_actions <= 0) fail("empty state or action set");
    if (transition.size() != static_cast<std::size_t>(n_states)) fail("transition has wrong size");
    if (reward.rows() != n_states || reward.cols() != n_actions) fail("reward has wrong shape");
    if (behavior.rows() != n_states || behavior.cols() != n_actions) fail("behavior has wrong shape");
    if (target.rows() != n_states || target.cols() != n_actions) fail("target has wrong shape");
    if (features.rows() != n_states) fail("features has wrong row count");
    if (start_dist.size() != n_states) fail("start distribution has wrong size");
    if (terminal.size() != static_cast<std::size_t>(n_states)) fail("terminal flags have wrong size");
    if (!(gamma >= 0.0 && gamma <= 1.0)) fail("discount outside [0,1]");
    constexpr double tol = 1e-12;
    if (std::abs(start_dist.sum() - 1.0) > tol || (start_dist.array() < 0.0).any())
      fail("start distribution is not a probability vector");
    for (int s = 0; s < n_states; ++s) {
      const auto& row = transition[static_cast<std::size_t>(s)];
      if (row.size() != static_cast<std::size_t>(n_actions)) fail("transition row has wrong size");
      if (std::abs(behavior.row(s).sum() - 1.0) > tol || (behavior.row(s).array() < 0.0).any())
        fail("behavior row " + std::to_string(s) + " is not a distribution");
      if (std::abs(target.row(s).sum() - 1.0) > tol || (target.row(s).array() < 0.0).any())
        fail("target row " + std::to_string(s) + " is not a distribution");
      for (int a = 0; a < n_actions; ++a) {
        const auto& p = row[static_cast<std::size_t>(a)];
        if (p.size() != static_cast<std::size_t>(n_states)) fail("transition vector has wrong size");
        double total = 0.0;
        for (double x : p) {
          if (x < 0.0) fail("negative transition probability");
          total += x;
        }
        if (std::abs(total - 1.0) > tol) fail("P(.|s,a) does not sum to one");
        if (target(s, a) > 0.0 && behavior(s, a) <= 0.0)
          fail("behavior policy does not cover the target policy");
      }
      if (terminal[static_cast<std::size_t>(s)] && !features.row(s).isZero(0.0))
        fail("terminal state with nonzero features");
    }
  }
};

}  // namespace pfgtd::env
