#pragma once

#include "pfgtd/common.hpp"

namespace pfgtd::olo {

/// Euclidean ball {w : ||w - center|| <= radius}.
class FeasibleSet {
 public:
  explicit FeasibleSet(double radius = 100.0) : radius_(radius) { check(); }
  FeasibleSet(double radius, Vector center) : radius_(radius), center_(std::move(center)) {
    check();
  }

  double radius() const { return radius_; }
  /// max ||w||_inf over the set (for an origin-centred ball this is the radius)
  double radius_inf() const {
    return center_.size() == 0 ? radius_ : center_.cwiseAbs().maxCoeff() + radius_;
  }
  bool centered_at_origin() const { return center_.size() == 0 || center_.isZero(0.0); }

  Vector center(Eigen::Index dim) const {
    return center_.size() == 0 ? Vector::Zero(dim) : center_;
  }

  double distance(const Vector& w) const {
    const double r = offset(w).stableNorm() - radius_;
    return r > 0.0 ? r : 0.0;
  }

  bool contains(const Vector& w, double tol = 0.0) const {
    return offset(w).stableNorm() <= radius_ * (1.0 + tol) + tol;
  }

  Vector project(const Vector& w) const {
    Vector off = offset(w);
    const double n = off.stableNorm();
    if (n <= radius_) return w;
    off *= radius_ / n;
    if (center_.size() != 0) off += center_;
    return off;
  }

 private:
  void check() const {
    if (!(radius_ > 0.0)) throw std::invalid_argument("feasible set radius must be positive");
  }
  Vector offset(const Vector& w) const {
    if (center_.size() == 0) return w;
    detail::require(center_.size() == w.size(), "feasible set dimension mismatch");
    return w - center_;
  }

  double radius_;
  Vector center_;  // empty means origin
};

}  // namespace pfgtd::olo
