#pragma once

#include "pfgtd/env/mdp.hpp"
#include "pfgtd/env/rng.hpp"
#include "pfgtd/gtd/transition.hpp"

namespace pfgtd::env {

struct SamplerState {
  int current_state = 0;
  Rng rng;
};

struct SampledTransition {
  gtd::TransitionSample sample;
  int state = 0;
  int action = 0;
  int next_state = 0;
};

inline int draw_start(const MdpSpec& spec, Rng& rng) {
  return rng.categorical(spec.start_dist.data(), spec.start_dist.data() + spec.start_dist.size());
}

inline SamplerState make_sampler(const MdpSpec& spec, std::uint64_t seed) {
  SamplerState st{0, Rng(seed)};
  st.current_state = draw_start(spec, st.rng);
  return st;
}

/// Draws a ~ pi_b(.|s), s' ~ P(.|s,a). Terminal arrivals restart the episode from the
/// start distribution; i.i.d.-state problems draw a fresh s every call.
inline SampledTransition sample_transition(const MdpSpec& spec, SamplerState& st) {
  const int s = spec.iid_states ? draw_start(spec, st.rng) : st.current_state;
  std::vector<double> weights(static_cast<std::size_t>(spec.n_actions));
  for (int a = 0; a < spec.n_actions; ++a) weights[static_cast<std::size_t>(a)] = spec.behavior(s, a);
  const int a = st.rng.categorical(weights.begin(), weights.end());
  const auto& p = spec.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
  const int next = st.rng.categorical(p.begin(), p.end());

  SampledTransition out;
  out.state = s;
  out.action = a;
  out.next_state = next;
  out.sample.phi = spec.features.row(s).transpose();
  out.sample.phi_next = spec.features.row(next).transpose();
  out.sample.reward = spec.reward(s, a);
  out.sample.rho = spec.rho(s, a);
  st.current_state = spec.terminal[static_cast<std::size_t>(next)] ? draw_start(spec, st.rng) : next;
  return out;
}

}  // namespace pfgtd::env
