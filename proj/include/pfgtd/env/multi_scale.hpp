#pragma once

// Synthetic many-signal prediction stream: one Markov chain on a ring of states
// with one-hot features, and several reward signals whose magnitudes span many
// orders, each to be predicted as a discounted return.

#include "pfgtd/env/mdp.hpp"
#include "pfgtd/env/rng.hpp"
#include "pfgtd/env/sampler.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pfgtd::env {

struct MultiScaleConfig {
  int n_states = 20;
  double gamma = 0.9875;
  std::vector<double> scales{1.0, 1e2, 1e4, 1e6};
  // per-signal noise standard deviation, relative to the signal's scale
  std::vector<double> noise{0.1, 0.1, 0.1, 0.1};
  double p_forward = 0.6;
  double p_back = 0.2;  // remaining mass stays put
};

/// Mean reward of signal k in state s: scale_k * (1 + sin(2 pi (s / n + k / K))).
inline double multi_scale_mean_reward(const MultiScaleConfig& c, int k, int s) {
  const double K = static_cast<double>(c.scales.size());
  const double phase = static_cast<double>(s) / c.n_states + static_cast<double>(k) / K;
  return c.scales[static_cast<std::size_t>(k)] * (1.0 + std::sin(2.0 * M_PI * phase));
}

inline void validate(const MultiScaleConfig& c) {
  if (c.scales.empty()) throw std::invalid_argument("multi-scale stream needs at least one signal");
  if (c.noise.size() != c.scales.size())
    throw std::invalid_argument("multi-scale stream needs one noise level per signal");
  if (c.n_states < 2) throw std::invalid_argument("multi-scale ring needs at least two states");
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw std::invalid_argument("multi-scale discount must lie in [0,1)");
  if (c.p_forward < 0.0 || c.p_back < 0.0 || c.p_forward + c.p_back > 1.0)
    throw std::invalid_argument("multi-scale move probabilities are invalid");
  for (double s : c.scales)
    if (!(s > 0.0)) throw std::invalid_argument("multi-scale signal scales must be positive");
  for (double s : c.noise)
    if (!(s >= 0.0)) throw std::invalid_argument("multi-scale noise levels must be nonnegative");
}

/// The on-policy chain for signal k, with its mean rewards (noise has zero mean).
inline MdpSpec multi_scale_signal(const MultiScaleConfig& c, int k) {
  validate(c);
  const int n = c.n_states;
  MdpSpec m;
  m.name = "multi-scale";
  m.n_states = n;
  m.n_actions = 1;
  m.gamma = c.gamma;
  m.transition.assign(static_cast<std::size_t>(n),
                      std::vector<std::vector<double>>(1, std::vector<double>(static_cast<std::size_t>(n), 0.0)));
  for (int s = 0; s < n; ++s) {
    auto& row = m.transition[static_cast<std::size_t>(s)][0];
    row[static_cast<std::size_t>((s + 1) % n)] += c.p_forward;
    row[static_cast<std::size_t>((s + n - 1) % n)] += c.p_back;
    row[static_cast<std::size_t>(s)] += 1.0 - c.p_forward - c.p_back;
  }
  m.reward = Matrix(n, 1);
  for (int s = 0; s < n; ++s) m.reward(s, 0) = multi_scale_mean_reward(c, k, s);
  m.behavior = Matrix::Ones(n, 1);
  m.target = Matrix::Ones(n, 1);
  m.features = Matrix::Identity(n, n);
  m.start_dist = Vector::Constant(n, 1.0 / n);
  m.terminal.assign(static_cast<std::size_t>(n), false);
  m.validate();
  return m;
}

/// One realised stream: states[0..T] and rewards[k][t] for the transition states[t] -> states[t+1].
struct MultiScaleStream {
  std::vector<int> states;
  std::vector<std::vector<double>> rewards;

  std::size_t length() const { return states.empty() ? 0 : states.size() - 1; }
};

inline MultiScaleStream multi_scale_stream(const MultiScaleConfig& c, std::int64_t n_steps,
                                           std::uint64_t seed) {
  validate(c);
  if (n_steps < 0) throw std::invalid_argument("stream length must be nonnegative");
  const MdpSpec chain = multi_scale_signal(c, 0);
  const std::size_t K = c.scales.size();
  MultiScaleStream out;
  out.rewards.assign(K, std::vector<double>(static_cast<std::size_t>(n_steps), 0.0));
  SamplerState st = make_sampler(chain, seed);
  // a separate stream for reward noise keeps the state path independent of the noise levels
  Rng noise_rng(seed ^ 0x6a09e667f3bcc909ULL);
  out.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.states.push_back(st.current_state);
  for (std::int64_t t = 0; t < n_steps; ++t) {
    const SampledTransition tr = sample_transition(chain, st);
    for (std::size_t k = 0; k < K; ++k) {
      const double eps = noise_rng.normal();
      out.rewards[k][static_cast<std::size_t>(t)] =
          multi_scale_mean_reward(c, static_cast<int>(k), tr.state) + c.noise[k] * c.scales[k] * eps;
    }
    out.states.push_back(tr.next_state);
  }
  return out;
}

/// Transition t of signal k as a learner sample (one-hot features, on-policy).
inline gtd::TransitionSample multi_scale_sample(const MultiScaleConfig& c, const MultiScaleStream& s,
                                                std::size_t k, std::size_t t) {
  gtd::TransitionSample out;
  out.phi = Vector::Zero(c.n_states);
  out.phi_next = Vector::Zero(c.n_states);
  out.phi[s.states[t]] = 1.0;
  out.phi_next[s.states[t + 1]] = 1.0;
  out.reward = s.rewards[k][t];
  out.rho = 1.0;
  return out;
}

}  // namespace pfgtd::env
