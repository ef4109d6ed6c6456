#pragma once

#include "pfgtd/common.hpp"

#include <cstdint>

namespace pfgtd::gtd {

/// Linear regret sum_t <g_t, z_t - u> for one player, kept as sum <g_t, z_t> and
/// sum g_t so it can be evaluated for any comparator after the fact.
class RegretAccumulator {
 public:
  RegretAccumulator() = default;
  explicit RegretAccumulator(Eigen::Index dim) : grad_sum_(Vector::Zero(dim)) {}

  void record(const Vector& played, const Vector& g) {
    if (grad_sum_.size() == 0) grad_sum_ = Vector::Zero(g.size());
    detail::require(played.size() == g.size() && g.size() == grad_sum_.size(),
                    "regret record dimension mismatch");
    loss_ += g.dot(played);
    grad_sum_ += g;
    ++rounds_;
  }

  double regret(const Vector& comparator) const {
    if (rounds_ == 0) return 0.0;
    return loss_ - grad_sum_.dot(comparator);
  }

  double cumulative_loss() const { return loss_; }
  const Vector& grad_sum() const { return grad_sum_; }
  std::int64_t rounds() const { return rounds_; }

 private:
  double loss_ = 0.0;
  Vector grad_sum_;
  std::int64_t rounds_ = 0;
};

/// Regret of the min player (theta) and the max player (y, fed -grad of L).
struct RegretTracker {
  RegretAccumulator theta;
  RegretAccumulator y;

  double joint(const Vector& theta_star, const Vector& y_star) const {
    return theta.regret(theta_star) + y.regret(y_star);
  }
};

}  // namespace pfgtd::gtd
