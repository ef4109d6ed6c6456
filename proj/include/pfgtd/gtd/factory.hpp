#pragma once

// Assembly of PFGTD, CW-PFGTD and PFGTD+ (and the FreeRange-based variant):
// a constrained-clipping wrapper around the chosen parameter-free learner for
// each of theta and y, driven by the saddle-point reduction.

#include "pfgtd/gtd/learner.hpp"
#include "pfgtd/olo/constrained_clipping.hpp"
#include "pfgtd/olo/feasible_set.hpp"
#include "pfgtd/olo/free_range.hpp"
#include "pfgtd/olo/learners.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace pfgtd::gtd {

enum class PfVariant { pf, cw_pf, pf_plus, free_range };

inline const char* to_string(PfVariant v) {
  switch (v) {
    case PfVariant::pf: return "pfgtd";
    case PfVariant::cw_pf: return "cw-pfgtd";
    case PfVariant::pf_plus: return "pfgtd+";
    case PfVariant::free_range: return "pfgtd-fr";
  }
  return "?";
}

struct PfgtdOptions {
  double initial_wealth = 1.0;  // W0
  double initial_hint = 1.0;    // eps_hat
  olo::FeasibleSet theta_set{};
  olo::FeasibleSet y_set{};
  // Seeds the theta player's bettors so its first play is this point.
  std::optional<Vector> warm_start;
  Objective objective = Objective::mspbe;
  bool report_average = true;
};

template <class Inner>
struct OloPair {
  olo::ConstrainedClipping<Inner> theta;
  olo::ConstrainedClipping<Inner> y;
};

/// Builds one unconstrained player. PF gets W0/2 per side; CW-PF gets W0 per
/// coordinate; PF+ splits W0 internally (d/2 W0 to PF, W0/2 per coordinate to CW-PF).
template <class Inner>
Inner make_inner(Eigen::Index d, const PfgtdOptions& o) {
  if (!(o.initial_wealth > 0.0)) throw std::invalid_argument("initial wealth must be positive");
  if (!(o.initial_hint > 0.0)) throw std::invalid_argument("initial hint must be positive");
  if constexpr (std::is_same_v<Inner, olo::ParameterFree>) {
    return Inner(d, 0.5 * o.initial_wealth, o.initial_hint);
  } else if constexpr (std::is_same_v<Inner, olo::FreeRange>) {
    return Inner(d, o.initial_hint);
  } else {
    return Inner(d, o.initial_wealth, o.initial_hint);
  }
}

template <class Inner>
OloPair<Inner> make_olo_pair(Eigen::Index d, const PfgtdOptions& o) {
  Inner theta_inner = make_inner<Inner>(d, o);
  if (o.warm_start) {
    if (o.warm_start->size() != d) throw std::invalid_argument("warm start has the wrong dimension");
    if constexpr (std::is_same_v<Inner, olo::FreeRange>) {
      throw std::invalid_argument("the FreeRange variant does not support warm starts");
    } else {
      theta_inner.warm_start(*o.warm_start);
    }
  }
  return OloPair<Inner>{
      olo::ConstrainedClipping<Inner>(o.theta_set, std::move(theta_inner), o.initial_hint),
      olo::ConstrainedClipping<Inner>(o.y_set, make_inner<Inner>(d, o), o.initial_hint)};
}

template <class Inner>
using PfgtdSolver = SaddlePointSolver<olo::ConstrainedClipping<Inner>, olo::ConstrainedClipping<Inner>>;

template <class Inner>
std::unique_ptr<PfgtdSolver<Inner>> make_pfgtd_solver(PfVariant variant, Eigen::Index d, double gamma,
                                                      const PfgtdOptions& o) {
  OloPair<Inner> pair = make_olo_pair<Inner>(d, o);
  return std::make_unique<PfgtdSolver<Inner>>(to_string(variant), std::move(pair.theta),
                                              std::move(pair.y), d, gamma, o.objective,
                                              o.report_average);
}

inline std::unique_ptr<Evaluator> make_pfgtd(PfVariant variant, Eigen::Index d, double gamma,
                                             const PfgtdOptions& o = {}) {
  switch (variant) {
    case PfVariant::pf: return make_pfgtd_solver<olo::ParameterFree>(variant, d, gamma, o);
    case PfVariant::cw_pf: return make_pfgtd_solver<olo::CoordinateWise>(variant, d, gamma, o);
    case PfVariant::pf_plus: return make_pfgtd_solver<olo::Combined>(variant, d, gamma, o);
    case PfVariant::free_range: return make_pfgtd_solver<olo::FreeRange>(variant, d, gamma, o);
  }
  throw std::invalid_argument("unknown parameter-free variant");
}

}  // namespace pfgtd::gtd
