#pragma once

#include "pfgtd/common.hpp"

#include <algorithm>

namespace pfgtd::olo {

enum class HintMode { scalar, vector };

/// Running Lipschitz hint. Scalar mode tracks max ||g||; vector mode tracks
/// max |g_i| per coordinate. Values only ever grow.
class HintState {
 public:
  static HintState scalar(double initial_guess) {
    return HintState(HintMode::scalar, Vector::Constant(1, initial_guess), initial_guess);
  }
  static HintState vector(Eigen::Index dim, double initial_guess) {
    return HintState(HintMode::vector, Vector::Constant(dim, initial_guess), initial_guess);
  }

  HintMode mode() const { return mode_; }
  double initial_guess() const { return initial_guess_; }

  /// Scalar-mode value. In vector mode this is the Euclidean norm of the hint vector,
  /// which is the scalar hint a dimension-free learner is fed.
  double magnitude() const { return mode_ == HintMode::scalar ? values_[0] : values_.norm(); }
  const Vector& values() const { return values_; }

  /// Grows the hint to cover `g` (||g|| in scalar mode, |g_i| in vector mode).
  void cover(const Vector& g) {
    if (mode_ == HintMode::scalar) {
      values_[0] = std::max(values_[0], g.norm());
    } else {
      detail::require(g.size() == values_.size(), "hint dimension mismatch");
      values_ = values_.cwiseMax(g.cwiseAbs());
    }
  }

  /// True when `g` respects this hint.
  bool admits(const Vector& g) const {
    if (mode_ == HintMode::scalar) return detail::within_hint(g.norm(), values_[0]);
    for (Eigen::Index i = 0; i < g.size(); ++i)
      if (!detail::within_hint(std::abs(g[i]), values_[i])) return false;
    return true;
  }

  /// Coordinatewise (or scalar) comparison: every entry of *this <= other.
  bool dominated_by(const HintState& other) const {
    return mode_ == other.mode_ && values_.size() == other.values_.size() &&
           (values_.array() <= other.values_.array()).all();
  }

 private:
  HintState(HintMode mode, Vector values, double initial_guess)
      : mode_(mode), values_(std::move(values)), initial_guess_(initial_guess) {
    if (!(initial_guess >= 0.0)) throw std::invalid_argument("initial hint must be nonnegative");
  }

  HintMode mode_;
  Vector values_;
  double initial_guess_;
};

struct ClipResult {
  Vector clipped;
  HintState hint;
};

/// Gradient clipping against the hint in force, then hint growth.
/// Scalar: g -> h g/||g|| when ||g|| > h. Vector: g_i -> h_i sign(g_i) when |g_i| > h_i.
inline ClipResult gradient_clip(const HintState& hint, const Vector& raw) {
  ClipResult out{raw, hint};
  if (hint.mode() == HintMode::scalar) {
    const double h = hint.values()[0];
    const double n = raw.norm();
    if (n > h) out.clipped = (h / n) * raw;
  } else {
    const Vector& h = hint.values();
    detail::require(raw.size() == h.size(), "gradient/hint dimension mismatch");
    for (Eigen::Index i = 0; i < raw.size(); ++i)
      if (std::abs(raw[i]) > h[i]) out.clipped[i] = std::copysign(h[i], raw[i]);
  }
  out.hint.cover(raw);
  return out;
}

}  // namespace pfgtd::olo
