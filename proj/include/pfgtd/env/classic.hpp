#pragma once

// The three classic prediction benchmarks: five-state random walk (three
// feature sets), Boyan's 13-state chain, and Baird's star counterexample.

#include "pfgtd/env/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pfgtd::env {

namespace detail {

inline std::vector<std::vector<std::vector<double>>> zero_transitions(int n_states, int n_actions) {
  return std::vector<std::vector<std::vector<double>>>(
      static_cast<std::size_t>(n_states),
      std::vector<std::vector<double>>(static_cast<std::size_t>(n_actions),
                                       std::vector<double>(static_cast<std::size_t>(n_states), 0.0)));
}

inline double& p(MdpSpec& m, int s, int a, int next) {
  return m.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]
                     [static_cast<std::size_t>(next)];
}

}  // namespace detail

enum class RandomWalkFeatures { tabular, dependent, inverted };

/// States 0 and 6 are terminal; 1..5 are the walk, episodes start at 3.
/// Action 0 = left, 1 = right. Behaviour 50/50, target 40/60. Undiscounted.
inline MdpSpec random_walk(RandomWalkFeatures kind) {
  constexpr int n = 7;
  MdpSpec m;
  m.n_states = n;
  m.n_actions = 2;
  m.gamma = 1.0;
  m.transition = detail::zero_transitions(n, 2);
  m.reward = Matrix::Zero(n, 2);
  m.behavior = Matrix::Constant(n, 2, 0.5);
  m.target = Matrix::Constant(n, 2, 0.5);
  m.terminal.assign(n, false);
  m.terminal[0] = m.terminal[6] = true;
  m.start_dist = Vector::Zero(n);
  m.start_dist[3] = 1.0;
  for (int s = 0; s < n; ++s) {
    if (m.terminal[static_cast<std::size_t>(s)]) {
      detail::p(m, s, 0, s) = detail::p(m, s, 1, s) = 1.0;
      continue;
    }
    detail::p(m, s, 0, s - 1) = 1.0;
    detail::p(m, s, 1, s + 1) = 1.0;
    m.target(s, 0) = 0.4;
    m.target(s, 1) = 0.6;
  }
  m.reward(1, 0) = -1.0;
  m.reward(5, 1) = 1.0;

  switch (kind) {
    case RandomWalkFeatures::tabular:
      m.name = "random-walk-tabular";
      m.features = Matrix::Zero(n, 5);
      for (int s = 1; s <= 5; ++s) m.features(s, s - 1) = 1.0;
      break;
    case RandomWalkFeatures::inverted:
      // one-cold code, scaled by 1/2 so every feature vector has unit norm
      m.name = "random-walk-inverted";
      m.features = Matrix::Zero(n, 5);
      for (int s = 1; s <= 5; ++s)
        for (int j = 0; j < 5; ++j) m.features(s, j) = (j == s - 1) ? 0.0 : 0.5;
      break;
    case RandomWalkFeatures::dependent: {
      m.name = "random-walk-dependent";
      const double r2 = 1.0 / std::sqrt(2.0);
      const double r3 = 1.0 / std::sqrt(3.0);
      m.features = Matrix::Zero(n, 3);
      m.features.row(1) << 1.0, 0.0, 0.0;
      m.features.row(2) << r2, r2, 0.0;
      m.features.row(3) << r3, r3, r3;
      m.features.row(4) << 0.0, r2, r2;
      m.features.row(5) << 0.0, 0.0, 1.0;
      break;
    }
  }
  m.validate();
  return m;
}

/// Boyan's chain. State index i (1..13) is s_i; index 0 is the absorbing terminal.
/// Episodes start at s_13. From s_i (i >= 2), action 0 moves to s_{i-1} with reward -2
/// and action 1 moves to s_{i-2} with reward -3 (s_0 being the absorbing state); both
/// policies pick each with probability 1/2. s_1 moves to the absorbing state with reward 0.
/// Features interpolate linearly between one-hot anchors at s_13, s_9, s_5, s_1.
inline MdpSpec boyan_chain() {
  constexpr int n = 14;
  MdpSpec m;
  m.name = "boyan";
  m.n_states = n;
  m.n_actions = 2;
  m.gamma = 1.0;
  m.transition = detail::zero_transitions(n, 2);
  m.reward = Matrix::Zero(n, 2);
  m.behavior = Matrix::Constant(n, 2, 0.5);
  m.target = Matrix::Constant(n, 2, 0.5);
  m.terminal.assign(n, false);
  m.terminal[0] = true;
  m.start_dist = Vector::Zero(n);
  m.start_dist[13] = 1.0;
  detail::p(m, 0, 0, 0) = detail::p(m, 0, 1, 0) = 1.0;
  detail::p(m, 1, 0, 0) = detail::p(m, 1, 1, 0) = 1.0;
  for (int i = 2; i <= 13; ++i) {
    detail::p(m, i, 0, i - 1) = 1.0;
    detail::p(m, i, 1, i - 2) = 1.0;
    m.reward(i, 0) = -2.0;
    m.reward(i, 1) = -3.0;
  }
  m.features = Matrix::Zero(n, 4);
  for (int i = 1; i <= 13; ++i) {
    // position along the chain measured from s_13: 0..12, anchors every 4 states
    const int pos = 13 - i;
    const int k = pos / 4;
    const double frac = static_cast<double>(pos % 4) / 4.0;
    m.features(i, k) = 1.0 - frac;
    if (frac > 0.0) m.features(i, k + 1) = frac;
  }
  m.validate();
  return m;
}

enum class BairdBehavior { equiprobable, classic };

/// Baird's star. States 0..5 are the outer states s_1..s_6, state 6 is s_7.
/// Action 0 ("solid") goes to s_7, action 1 ("dashed") goes uniformly to s_1..s_6.
/// Target always picks solid. Source states are drawn uniformly each step.
/// phi(s_i) = 2 e_i + e_8 (i <= 6), phi(s_7) = e_7 + 2 e_8.
inline MdpSpec baird_star(BairdBehavior behavior = BairdBehavior::equiprobable) {
  constexpr int n = 7;
  MdpSpec m;
  m.name = "baird";
  m.n_states = n;
  m.n_actions = 2;
  m.gamma = 0.99;
  m.transition = detail::zero_transitions(n, 2);
  m.reward = Matrix::Zero(n, 2);
  m.behavior = Matrix(n, 2);
  m.target = Matrix(n, 2);
  m.terminal.assign(n, false);
  m.start_dist = Vector::Constant(n, 1.0 / n);
  m.iid_states = true;
  m.rank_deficient = true;
  const double solid = behavior == BairdBehavior::equiprobable ? 0.5 : 1.0 / 7.0;
  for (int s = 0; s < n; ++s) {
    detail::p(m, s, 0, 6) = 1.0;
    for (int k = 0; k < 6; ++k) detail::p(m, s, 1, k) = 1.0 / 6.0;
    m.behavior(s, 0) = solid;
    m.behavior(s, 1) = 1.0 - solid;
    m.target(s, 0) = 1.0;
    m.target(s, 1) = 0.0;
  }
  m.features = Matrix::Zero(n, 8);
  for (int i = 0; i < 6; ++i) {
    m.features(i, i) = 2.0;
    m.features(i, 7) = 1.0;
  }
  m.features(6, 6) = 1.0;
  m.features(6, 7) = 2.0;
  m.validate();
  return m;
}

/// Standard initial weights for Baird's counterexample.
inline Vector baird_initial_theta() {
  Vector t = Vector::Ones(8);
  t[7] = 10.0;
  return t;
}

}  // namespace pfgtd::env
