#pragma once

// Closed-form expectations A, b, C of an MDP/policy pair under the sampler's
// state distribution, and the metrics derived from them.

#include "pfgtd/common.hpp"
#include "pfgtd/env/mdp.hpp"
#include "pfgtd/gtd/subgradients.hpp"
#include "pfgtd/olo/feasible_set.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pfgtd::metrics {

using gtd::Objective;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Source-state transition matrix of the sampler: behaviour dynamics, with
/// arrivals in a terminal state replaced by a draw from the start distribution.
/// Terminal states are never sources; their rows restart too, so the matrix stays stochastic.
inline Matrix sampler_chain(const env::MdpSpec& spec) {
  const int n = spec.n_states;
  Matrix P = Matrix::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    if (spec.iid_states || spec.terminal[static_cast<std::size_t>(s)]) {
      P.row(s) = spec.start_dist.transpose();
      continue;
    }
    for (int a = 0; a < spec.n_actions; ++a) {
      const double pa = spec.behavior(s, a);
      if (pa == 0.0) continue;
      const auto& next = spec.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
      for (int t = 0; t < n; ++t) {
        const double p = pa * next[static_cast<std::size_t>(t)];
        if (p == 0.0) continue;
        if (spec.terminal[static_cast<std::size_t>(t)])
          P.row(s) += p * spec.start_dist.transpose();
        else
          P(s, t) += p;
      }
    }
  }
  return P;
}

/// Stationary distribution of the sampler's source states. i.i.d. problems use the
/// start distribution directly; otherwise xi solves xi^T (I - P) = 0, sum(xi) = 1.
inline Vector state_distribution(const env::MdpSpec& spec) {
  if (spec.iid_states) return spec.start_dist;
  const Matrix P = sampler_chain(spec);
  const int n = spec.n_states;
  // Replace one balance equation by the normalisation constraint.
  Matrix lhs = Matrix::Identity(n, n) - P.transpose();
  Vector rhs = Vector::Zero(n);
  lhs.row(n - 1).setOnes();
  rhs[n - 1] = 1.0;
  Vector xi = lhs.fullPivLu().solve(rhs);
  if (!xi.allFinite() || (lhs * xi - rhs).norm() > 1e-9)
    throw ModelError("MDP '" + spec.name + "': sampler chain has no unique stationary distribution");
  xi = xi.cwiseMax(0.0);
  return xi / xi.sum();
}

struct ExactModel {
  Matrix A;
  Vector b;
  Matrix C;
  Matrix M;
  Vector xi;
  Vector theta_star;
  Vector y_star;
  double lambda_max_M = 0.0;
  double gamma = 0.0;
  Objective objective = Objective::mspbe;
  bool pseudo_inverse = false;

  // eigendecomposition of M, used for M^+ and the gap's trust-region solve
  Matrix M_vectors;
  Vector M_values;

  Eigen::Index dim() const { return b.size(); }

  /// M^+ v (treats eigenvalues below a relative threshold as zero).
  Vector M_pinv_apply(const Vector& v) const {
    const Vector coeff = M_vectors.transpose() * v;
    Vector scaled = Vector::Zero(coeff.size());
    const double cut = M_cutoff();
    for (Eigen::Index i = 0; i < coeff.size(); ++i)
      if (M_values[i] > cut) scaled[i] = coeff[i] / M_values[i];
    return M_vectors * scaled;
  }

  double M_cutoff() const {
    return 1e-12 * std::max(1.0, lambda_max_M) * static_cast<double>(std::max<Eigen::Index>(1, dim()));
  }

  /// Expected subgradients (-A^T y, -b + A theta + M y).
  gtd::SubgradientPair expected_subgradients(const Vector& theta, const Vector& y) const {
    return {-A.transpose() * y, -b + A * theta + M * y};
  }

  /// L(theta, y) = <b - A theta, y> - 1/2 y^T M y
  double lagrangian(const Vector& theta, const Vector& y) const {
    return (b - A * theta).dot(y) - 0.5 * y.dot(M * y);
  }
};

inline ExactModel build_exact_model(const env::MdpSpec& spec, Objective objective = Objective::mspbe) {
  spec.validate();
  const Eigen::Index d = spec.dim();
  ExactModel m;
  m.gamma = spec.gamma;
  m.objective = objective;
  m.xi = state_distribution(spec);
  m.A = Matrix::Zero(d, d);
  m.b = Vector::Zero(d);
  m.C = Matrix::Zero(d, d);
  for (int s = 0; s < spec.n_states; ++s) {
    const double w = m.xi[s];
    if (w == 0.0 || spec.terminal[static_cast<std::size_t>(s)]) continue;
    const Vector phi = spec.features.row(s).transpose();
    m.C.noalias() += w * phi * phi.transpose();
    for (int a = 0; a < spec.n_actions; ++a) {
      const double weight = w * spec.behavior(s, a) * spec.rho(s, a);
      if (weight == 0.0) continue;
      Vector next_phi = Vector::Zero(d);
      const auto& p = spec.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
      for (int t = 0; t < spec.n_states; ++t)
        if (p[static_cast<std::size_t>(t)] != 0.0)
          next_phi += p[static_cast<std::size_t>(t)] * spec.features.row(t).transpose();
      m.A.noalias() += weight * phi * (phi - spec.gamma * next_phi).transpose();
      m.b += weight * spec.reward(s, a) * phi;
    }
  }
  m.C = 0.5 * (m.C + m.C.transpose());
  m.M = objective == Objective::mspbe ? m.C : Matrix::Identity(d, d);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.M);
  m.M_vectors = eig.eigenvectors();
  m.M_values = eig.eigenvalues();
  m.lambda_max_M = m.M_values.maxCoeff();

  const double scale = std::max(1.0, m.A.cwiseAbs().maxCoeff());
  Eigen::JacobiSVD<Matrix> svd(m.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double tol = 1e-10 * scale;
  const Vector& sv = svd.singularValues();
  const bool A_singular = sv.size() == 0 || sv.minCoeff() <= tol;
  const bool M_singular = m.M_values.minCoeff() <= m.M_cutoff();
  if ((A_singular || M_singular) && !spec.rank_deficient) {
    throw ModelError("MDP '" + spec.name + "': " +
                     (A_singular ? std::string("A is singular") : std::string("C is singular")) +
                     " (the features must make A and C nonsingular)");
  }
  m.pseudo_inverse = A_singular || M_singular;
  if (A_singular) {
    svd.setThreshold(tol / std::max(sv.maxCoeff(), 1e-300));
    m.theta_star = svd.solve(m.b);
  } else {
    m.theta_star = m.A.partialPivLu().solve(m.b);
  }
  m.y_star = m.M_pinv_apply(m.b - m.A * m.theta_star);
  return m;
}

/// sqrt((b - A theta)^T M^+ (b - A theta))
inline double rmspbe(const ExactModel& m, const Vector& theta) {
  pfgtd::detail::require(theta.size() == m.dim(), "rmspbe dimension mismatch");
  const Vector r = m.b - m.A * theta;
  const double q = r.dot(m.M_pinv_apply(r));
  return std::sqrt(std::max(q, 0.0));
}

/// Largest eigenvalue of M.
inline double lambda_max(const ExactModel& m) { return m.lambda_max_M; }

struct GapResult {
  double gap = 0.0;
  double max_value = 0.0;  // max_{y in Y} L(theta, y)
  double min_value = 0.0;  // min_{theta' in Theta} L(theta', y)
  Vector y_best;           // maximiser over Y
  Vector theta_best;       // minimiser over Theta
};

namespace detail {

/// argmax_{||y|| <= D} <c, y> - 1/2 y^T M y for PSD M given by its eigenpairs.
inline Vector ball_quadratic_argmax(const ExactModel& m, const Vector& c, double D) {
  const Vector ct = m.M_vectors.transpose() * c;
  const Vector& lam = m.M_values;
  const double cut = m.M_cutoff();
  // unconstrained (minimum-norm) maximiser, valid when c has no null-space component
  bool bounded = true;
  double free_sq = 0.0;
  for (Eigen::Index i = 0; i < ct.size(); ++i) {
    if (lam[i] > cut) {
      free_sq += (ct[i] / lam[i]) * (ct[i] / lam[i]);
    } else if (std::abs(ct[i]) > 1e-14 * std::max(1.0, c.norm())) {
      bounded = false;
    }
  }
  if (bounded && free_sq <= D * D) return m.M_pinv_apply(c);

  // boundary solution y(mu) = (M + mu I)^{-1} c with ||y(mu)|| = D, mu > 0
  const auto norm_sq = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ct.size(); ++i) {
      const double li = std::max(lam[i], 0.0) + mu;
      s += (ct[i] / li) * (ct[i] / li);
    }
    return s;
  };
  double lo = 0.0;
  double hi = std::max(c.norm() / D, 1e-300);  // ||y(hi)|| <= ||c|| / hi = D
  while (norm_sq(hi) > D * D) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (norm_sq(mid) > D * D ? lo : hi) = mid;
  }
  Vector coeff(ct.size());
  for (Eigen::Index i = 0; i < ct.size(); ++i) coeff[i] = ct[i] / (std::max(lam[i], 0.0) + hi);
  Vector y = m.M_vectors * coeff;
  const double n = y.norm();
  if (n > D) y *= D / n;
  return y;
}

}  // namespace detail

/// max_{y in Y} L(theta, y) - min_{theta' in Theta} L(theta', y) for origin-centred balls.
inline GapResult duality_gap_detail(const ExactModel& m, const Vector& theta, const Vector& y,
                                    const olo::FeasibleSet& theta_set, const olo::FeasibleSet& y_set) {
  pfgtd::detail::require(theta.size() == m.dim() && y.size() == m.dim(), "duality gap dimension mismatch");
  if (!theta_set.centered_at_origin() || !y_set.centered_at_origin())
    throw std::invalid_argument("duality gap is implemented for origin-centred balls only");
  if (!theta_set.contains(theta, 1e-9)) throw std::invalid_argument("theta lies outside its feasible set");
  if (!y_set.contains(y, 1e-9)) throw std::invalid_argument("y lies outside its feasible set");

  GapResult r;
  const Vector c = m.b - m.A * theta;
  r.y_best = detail::ball_quadratic_argmax(m, c, y_set.radius());
  r.max_value = c.dot(r.y_best) - 0.5 * r.y_best.dot(m.M * r.y_best);

  const Vector aty = m.A.transpose() * y;
  const double aty_norm = aty.norm();
  r.theta_best = aty_norm > 0.0 ? Vector(aty * (theta_set.radius() / aty_norm)) : Vector::Zero(m.dim());
  r.min_value = m.b.dot(y) - 0.5 * y.dot(m.M * y) - theta_set.radius() * aty_norm;

  r.gap = r.max_value - r.min_value;
  const double tol = 1e-9 * std::max(1.0, std::abs(r.max_value) + std::abs(r.min_value));
  if (r.gap < 0.0) {
    if (r.gap < -tol)
      throw std::logic_error("duality gap is negative beyond rounding: " + std::to_string(r.gap));
    r.gap = 0.0;
  }
  return r;
}

inline double duality_gap(const ExactModel& m, const Vector& theta, const Vector& y,
                          const olo::FeasibleSet& theta_set, const olo::FeasibleSet& y_set) {
  return duality_gap_detail(m, theta, y, theta_set, y_set).gap;
}

inline double duality_gap(const ExactModel& m, const Vector& theta, const Vector& y,
                          const olo::FeasibleSet& set = olo::FeasibleSet{}) {
  return duality_gap(m, theta, y, set, set);
}

}  // namespace pfgtd::metrics
