#pragma once

// Reference computations that share no code with the library paths they check.

#include "pfgtd/env/mdp.hpp"
#include "pfgtd/env/sampler.hpp"
#include "pfgtd/gtd/subgradients.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using pfgtd::Matrix;
using pfgtd::Vector;

/// Sampler source-state transition matrix built by tracing the sampler's rule
/// (arrivals in terminal states restart from the start distribution).
inline Matrix source_chain(const pfgtd::env::MdpSpec& s) {
  const int n = s.n_states;
  Matrix P = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (s.iid_states) {
      P.row(i) = s.start_dist.transpose();
      continue;
    }
    for (int a = 0; a < s.n_actions; ++a)
      for (int j = 0; j < n; ++j) {
        const double p = s.behavior(i, a) * s.transition[i][a][j];
        if (s.terminal[j])
          for (int k = 0; k < n; ++k) P(i, k) += p * s.start_dist[k];
        else
          P(i, j) += p;
      }
  }
  return P;
}

/// Stationary distribution by power iteration from the start distribution, with
/// averaging of consecutive iterates to damp periodic chains.
inline Vector power_iteration_xi(const pfgtd::env::MdpSpec& s, double tol = 1e-13, int max_iter = 2000000) {
  if (s.iid_states) return s.start_dist;
  const Matrix P = source_chain(s);
  Vector x = s.start_dist;
  for (int it = 0; it < max_iter; ++it) {
    Vector nx = 0.5 * (x + P.transpose() * x);
    nx /= nx.sum();
    if ((nx - x).lpNorm<1>() < tol) return nx;
    x = nx;
  }
  return x;
}

/// Target-policy state transition matrix and expected reward (terminal rows zero).
inline void target_dynamics(const pfgtd::env::MdpSpec& s, Matrix& P_pi, Vector& r_pi) {
  const int n = s.n_states;
  P_pi = Matrix::Zero(n, n);
  r_pi = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (s.terminal[i]) continue;
    for (int a = 0; a < s.n_actions; ++a) {
      r_pi[i] += s.target(i, a) * s.reward(i, a);
      for (int j = 0; j < n; ++j) P_pi(i, j) += s.target(i, a) * s.transition[i][a][j];
    }
  }
}

/// ||Pi_xi (T v - v)||_xi with v = Phi theta, Pi_xi the xi-weighted projection onto span(Phi),
/// computed as a weighted least-squares fit of the Bellman residual.
inline double projected_bellman_error(const pfgtd::env::MdpSpec& s, const Vector& xi, const Vector& theta) {
  Matrix P_pi;
  Vector r_pi;
  target_dynamics(s, P_pi, r_pi);
  const Matrix& Phi = s.features;
  const Vector v = Phi * theta;
  const Vector residual = r_pi + s.gamma * P_pi * v - v;
  const Vector w = xi.cwiseSqrt();
  const Matrix WPhi = w.asDiagonal() * Phi;
  const Vector coef = WPhi.completeOrthogonalDecomposition().solve(w.asDiagonal() * residual);
  const Vector proj = Phi * coef;
  return std::sqrt((xi.array() * proj.array().square()).sum());
}

/// Expected subgradients by enumerating (s, a, s') under xi and the behaviour policy.
inline pfgtd::gtd::SubgradientPair enumerate_expected_subgradients(const pfgtd::env::MdpSpec& s, const Vector& xi,
                                                                   const Vector& theta, const Vector& y,
                                                                   pfgtd::gtd::Objective obj) {
  const auto d = s.dim();
  pfgtd::gtd::SubgradientPair acc{Vector::Zero(d), Vector::Zero(d)};
  for (int i = 0; i < s.n_states; ++i) {
    if (xi[i] == 0.0) continue;
    for (int a = 0; a < s.n_actions; ++a)
      for (int j = 0; j < s.n_states; ++j) {
        const double p = xi[i] * s.behavior(i, a) * s.transition[i][a][j];
        if (p == 0.0) continue;
        pfgtd::gtd::TransitionSample t;
        t.phi = s.features.row(i).transpose();
        t.phi_next = s.features.row(j).transpose();
        t.reward = s.reward(i, a);
        t.rho = s.rho(i, a);
        const auto g = pfgtd::gtd::make_subgradients(t, theta, y, s.gamma, obj);
        acc.g_theta += p * g.g_theta;
        acc.g_y += p * g.g_y;
      }
  }
  return acc;
}

/// max_{||y|| <= D} <c, y> - 1/2 y^T M y by projected gradient ascent with a 1/L step.
inline double ball_quadratic_max_pga(const Matrix& M, const Vector& c, double D, int iters = 200000) {
  const double L = std::max(1e-12, M.operatorNorm());
  Vector y = Vector::Zero(c.size());
  for (int it = 0; it < iters; ++it) {
    Vector next = y + (c - M * y) / L;
    const double n = next.norm();
    if (n > D) next *= D / n;
    const double moved = (next - y).norm();
    y = next;
    if (moved < 1e-15 * std::max(1.0, D)) break;
  }
  return c.dot(y) - 0.5 * y.dot(M * y);
}

/// Forward evaluation of sum_k gamma^k r_{t+k} for every t.
inline std::vector<double> forward_returns(const std::vector<double>& r, double gamma) {
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t t = 0; t < r.size(); ++t) {
    double g = 0.0, disc = 1.0;
    for (std::size_t k = t; k < r.size(); ++k) {
      g += disc * r[k];
      disc *= gamma;
    }
    out[t] = g;
  }
  return out;
}

/// Sample averages of rho phi (phi - gamma phi')^T, rho r phi and phi phi^T along one
/// sampler trajectory.
struct SampledMoments {
  Matrix A;
  Vector b;
  Matrix C;
};

inline SampledMoments monte_carlo_moments(const pfgtd::env::MdpSpec& s, long n, std::uint64_t seed) {
  const Eigen::Index d = s.dim();
  SampledMoments m{Matrix::Zero(d, d), Vector::Zero(d), Matrix::Zero(d, d)};
  auto st = pfgtd::env::make_sampler(s, seed);
  for (long t = 0; t < n; ++t) {
    const auto x = pfgtd::env::sample_transition(s, st).sample;
    m.A.noalias() += x.rho * x.phi * (x.phi - s.gamma * x.phi_next).transpose();
    m.b += x.rho * x.reward * x.phi;
    m.C.noalias() += x.phi * x.phi.transpose();
  }
  const double inv = 1.0 / static_cast<double>(n);
  m.A *= inv;
  m.b *= inv;
  m.C *= inv;
  return m;
}

/// Random draws for property tests.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  bool coin() { return integer(0, 1) == 1; }
  Vector normal_vector(Eigen::Index d, double scale = 1.0) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = scale * normal();
    return v;
  }
  /// Uniform direction, radius uniform in [0, r].
  Vector in_ball(Eigen::Index d, double r) {
    Vector v = normal_vector(d);
    const double n = v.norm();
    return n == 0.0 ? v : Vector(v * (uniform(0.0, r) / n));
  }
  /// Heavy-tailed magnitudes spanning many orders.
  Vector wide_vector(Eigen::Index d) {
    Vector v = normal_vector(d);
    return v * std::pow(10.0, uniform(-3.0, 3.0));
  }
};

}  // namespace oracle
