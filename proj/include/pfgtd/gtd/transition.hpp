#pragma once

#include "pfgtd/common.hpp"

namespace pfgtd::gtd {

/// One off-policy transition (phi, phi', r, rho). phi' is zero on entering a terminal state.
struct TransitionSample {
  Vector phi;
  Vector phi_next;
  double reward = 0.0;
  double rho = 1.0;
};

}  // namespace pfgtd::gtd
