#pragma once

#include "pfgtd/common.hpp"
#include "pfgtd/gtd/transition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pfgtd::gtd {

/// M = C gives the MSPBE saddle point, M = I the NEU one.
enum class Objective { mspbe, neu };

inline const char* to_string(Objective o) { return o == Objective::mspbe ? "mspbe" : "neu"; }

inline Objective parse_objective(const std::string& s) {
  if (s == "mspbe") return Objective::mspbe;
  if (s == "neu") return Objective::neu;
  throw std::invalid_argument("unknown objective '" + s + "' (expected mspbe or neu)");
}

struct SubgradientPair {
  Vector g_theta;
  Vector g_y;

  double joint_norm() const { return std::sqrt(g_theta.squaredNorm() + g_y.squaredNorm()); }
};

/// Stochastic subgradients of L(theta, y) = <b - A theta, y> - 1/2 ||y||_M^2 from one
/// transition, using A_t = rho phi (phi - gamma phi')^T without forming it. O(d).
inline SubgradientPair make_subgradients(const TransitionSample& s, const Vector& theta,
                                         const Vector& y, double gamma,
                                         Objective objective = Objective::mspbe) {
  const Eigen::Index d = s.phi.size();
  if (s.phi_next.size() != d || theta.size() != d || y.size() != d)
    throw std::invalid_argument("subgradient inputs have mismatched dimensions");
  const Vector td_dir = s.phi - gamma * s.phi_next;
  const double phi_y = s.phi.dot(y);
  SubgradientPair out;
  out.g_theta = (-s.rho * phi_y) * td_dir;
  out.g_y = (s.rho * (td_dir.dot(theta) - s.reward)) * s.phi;
  if (objective == Objective::mspbe)
    out.g_y += phi_y * s.phi;
  else
    out.g_y += y;
  return out;
}

/// Worst-case subgradient norms over an environment with rho <= rho_max,
/// ||phi||_inf <= L, |r| <= r_max, iterates in balls of radius D.
struct SubgradientBounds {
  double theta = 0.0;
  double y = 0.0;
};

inline SubgradientBounds subgradient_bounds(Eigen::Index d, double rho_max, double feature_bound,
                                            double reward_bound, double gamma, double radius,
                                            Objective objective = Objective::mspbe) {
  const double dd = static_cast<double>(d);
  const double L = feature_bound;
  const double cross = (1.0 + gamma) * rho_max * dd * L * L * radius;
  SubgradientBounds b;
  b.theta = cross;
  b.y = rho_max * reward_bound * std::sqrt(dd) * L + cross +
        (objective == Objective::mspbe ? dd * L * L * radius : radius);
  return b;
}

}  // namespace pfgtd::gtd
