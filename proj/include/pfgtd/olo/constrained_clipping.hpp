#pragma once

#include "pfgtd/common.hpp"
#include "pfgtd/olo/feasible_set.hpp"
#include "pfgtd/olo/hint.hpp"
#include "pfgtd/olo/reductions.hpp"

#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>

namespace pfgtd::olo {

template <class L>
concept HintedLearner = requires(L l, const L cl, const Vector& g, const HintState& h) {
  { cl.play() } -> std::convertible_to<Vector>;
  l.update(g, h);
  { L::kHintMode } -> std::convertible_to<HintMode>;
};

/// One round as seen by the constrained wrapper.
struct OloIterateRecord {
  std::int64_t step = 0;
  Vector played;
  Vector fed_subgradient;
  Vector hint_after;
};

inline void write_trace_header(std::ostream& os, Eigen::Index dim) {
  os << "step";
  for (Eigen::Index i = 0; i < dim; ++i) os << ",played_" << i;
  for (Eigen::Index i = 0; i < dim; ++i) os << ",fed_" << i;
  os << ",hint\n";
}

/// CSV row: step, played..., fed..., hint (scalar hint, or the norm of a vector hint).
inline void write_trace_row(std::ostream& os, const OloIterateRecord& r) {
  const auto old = os.precision(17);
  os << r.step;
  for (double v : r.played) os << ',' << v;
  for (double v : r.fed_subgradient) os << ',' << v;
  os << ',' << (r.hint_after.size() == 1 ? r.hint_after[0] : r.hint_after.norm()) << '\n';
  os.precision(old);
}

/// Wraps an unconstrained hinted learner: projects its proposals onto the feasible
/// set, clips raw subgradients against a running hint, and feeds back the
/// constraint surrogate. The hint mode follows the inner learner.
template <HintedLearner Inner>
class ConstrainedClipping {
 public:
  struct Feedback {
    Vector raw;
    Vector clipped;
    Vector fed;
    bool penalized = false;
    bool post_clipped = false;
  };

  ConstrainedClipping(FeasibleSet set, Inner inner, double initial_hint)
      : set_(std::move(set)),
        hint_(Inner::kHintMode == HintMode::scalar ? HintState::scalar(initial_hint)
                                                   : HintState::vector(inner.dim(), initial_hint)),
        inner_(std::move(inner)) {}

  /// Proposal from the inner learner, projected onto the set.
  const Vector& play() {
    proposed_ = inner_.play();
    played_ = set_.project(proposed_);
    have_play_ = true;
    return played_;
  }

  void update(const Vector& raw) {
    detail::require(have_play_, "update() called without a preceding play()");
    have_play_ = false;
    ClipResult clip = gradient_clip(hint_, raw);
    ConstraintFeedback reduced = constraint_set_reduce(set_, proposed_, clip.clipped);
    last_.raw = raw;
    last_.clipped = std::move(clip.clipped);
    last_.penalized = reduced.penalized;
    last_.post_clipped = false;
    if (hint_.mode() == HintMode::vector && reduced.penalized) {
      // The penalty term preserves the Euclidean norm bound but can push a single
      // coordinate past its hint; coordinatewise bettors need |g_i| <= h_i.
      const Vector& h = hint_.values();
      for (Eigen::Index i = 0; i < h.size(); ++i) {
        if (std::abs(reduced.fed[i]) > h[i]) {
          reduced.fed[i] = std::copysign(h[i], reduced.fed[i]);
          last_.post_clipped = true;
        }
      }
    }
    last_.fed = std::move(reduced.fed);
    inner_.update(last_.fed, clip.hint);
    hint_ = std::move(clip.hint);
    ++step_;
    if (trace_) trace_(OloIterateRecord{step_, played_, last_.fed, hint_.values()});
  }

  void set_trace(std::function<void(const OloIterateRecord&)> sink) { trace_ = std::move(sink); }

  const FeasibleSet& set() const { return set_; }
  const HintState& hint() const { return hint_; }
  const Inner& inner() const { return inner_; }
  Inner& inner() { return inner_; }
  const Feedback& last_feedback() const { return last_; }
  const Vector& last_proposed() const { return proposed_; }
  std::int64_t steps() const { return step_; }

 private:
  FeasibleSet set_;
  HintState hint_;
  Inner inner_;
  Vector proposed_;
  Vector played_;
  bool have_play_ = false;
  std::int64_t step_ = 0;
  Feedback last_;
  std::function<void(const OloIterateRecord&)> trace_;
};

}  // namespace pfgtd::olo
