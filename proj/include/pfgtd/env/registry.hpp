#pragma once

#include "pfgtd/env/classic.hpp"
#include "pfgtd/env/mdp.hpp"
#include "pfgtd/env/multi_scale.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfgtd::env {

struct EnvironmentOptions {
  BairdBehavior baird_behavior = BairdBehavior::equiprobable;
  MultiScaleConfig multi_scale{};
};

/// A named benchmark. Multi-signal environments carry one MdpSpec per signal.
struct Environment {
  std::string name;
  std::vector<MdpSpec> signals;
  // customary initial weights (Baird); learners start at zero otherwise
  std::optional<Vector> initial_theta;
  bool multi_signal = false;
  MultiScaleConfig multi_scale{};

  const MdpSpec& spec() const { return signals.front(); }
};

inline const std::vector<std::string>& environment_names() {
  static const std::vector<std::string> names{"random-walk-tabular", "random-walk-dependent",
                                              "random-walk-inverted", "boyan", "baird", "multi-scale"};
  return names;
}

inline Environment make_environment(const std::string& name, const EnvironmentOptions& opts = {}) {
  Environment e;
  e.name = name;
  if (name == "random-walk-tabular") {
    e.signals.push_back(random_walk(RandomWalkFeatures::tabular));
  } else if (name == "random-walk-dependent") {
    e.signals.push_back(random_walk(RandomWalkFeatures::dependent));
  } else if (name == "random-walk-inverted") {
    e.signals.push_back(random_walk(RandomWalkFeatures::inverted));
  } else if (name == "boyan") {
    e.signals.push_back(boyan_chain());
  } else if (name == "baird") {
    e.signals.push_back(baird_star(opts.baird_behavior));
    e.initial_theta = baird_initial_theta();
  } else if (name == "multi-scale") {
    e.multi_signal = true;
    e.multi_scale = opts.multi_scale;
    for (std::size_t k = 0; k < opts.multi_scale.scales.size(); ++k)
      e.signals.push_back(multi_scale_signal(opts.multi_scale, static_cast<int>(k)));
  } else {
    std::string known;
    for (const auto& n : environment_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown environment '" + name + "' (known: " + known + ")");
  }
  return e;
}

inline BairdBehavior parse_baird_behavior(const std::string& s) {
  if (s == "equiprobable") return BairdBehavior::equiprobable;
  if (s == "classic") return BairdBehavior::classic;
  throw std::invalid_argument("unknown Baird behaviour '" + s + "' (expected equiprobable or classic)");
}

}  // namespace pfgtd::env
