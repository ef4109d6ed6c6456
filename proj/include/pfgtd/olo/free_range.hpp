#pragma once

#include "pfgtd/common.hpp"
#include "pfgtd/olo/hint.hpp"

#include <cmath>

namespace pfgtd::olo {

/// Lipschitz-adaptive, scale-invariant learner for the Euclidean norm with a
/// restart whenever the hint outgrows the range budget R.
class FreeRange {
 public:
  static constexpr HintMode kHintMode = HintMode::scalar;

  FreeRange(Eigen::Index dim, double initial_hint)
      : grad_sum_(Vector::Zero(dim)),
        variance_(initial_hint * initial_hint),
        range_(2.0),
        first_hint_(initial_hint),
        hint_(initial_hint) {
    if (!(initial_hint > 0.0)) throw std::invalid_argument("FreeRange initial hint must be positive");
  }

  Vector play() const {
    const double gn = grad_sum_.norm();
    if (gn == 0.0) return Vector::Zero(grad_sum_.size());
    const double hg = hint_ * gn;
    const double denom = 2.0 * (variance_ + hg) * (variance_ + hg) * std::sqrt(variance_);
    const double factor = (2.0 * variance_ + hg) * first_hint_ * first_hint_ / denom *
                          std::exp(gn * gn / (2.0 * variance_ + 2.0 * hg));
    return -factor * grad_sum_;
  }

  void update(const Vector& g, double next_hint) {
    detail::require(g.size() == grad_sum_.size(), "FreeRange dimension mismatch");
    detail::require(next_hint >= hint_, "FreeRange hint decreased");
    const double gn = g.norm();
    grad_sum_ += g;
    variance_ += gn * gn;
    range_ += gn / hint_;
    hint_ = next_hint;
    if (hint_ / first_hint_ > range_) reset();
  }
  void update(const Vector& g, const HintState& next_hint) { update(g, next_hint.magnitude()); }

  double hint() const { return hint_; }
  double first_hint() const { return first_hint_; }
  double range() const { return range_; }
  int restarts() const { return restarts_; }
  Eigen::Index dim() const { return grad_sum_.size(); }

 private:
  void reset() {
    first_hint_ = hint_;
    variance_ = first_hint_ * first_hint_;
    grad_sum_.setZero();
    range_ = 2.0;
    ++restarts_;
  }

  Vector grad_sum_;
  double variance_;
  double range_;
  double first_hint_;
  double hint_;
  int restarts_ = 0;
};

}  // namespace pfgtd::olo
