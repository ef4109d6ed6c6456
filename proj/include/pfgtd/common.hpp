#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace pfgtd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a caller breaks an algorithm's input contract (e.g. a loss
/// larger than the hint in force). Indicates a bug upstream, never bad data.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

// Relative slack for hint comparisons; clipping to h*g/|g| can land a few ulps above h.
inline constexpr double kHintSlack = 1e-12;

inline bool within_hint(double magnitude, double hint) {
  return magnitude <= hint * (1.0 + kHintSlack) + kHintSlack;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

}  // namespace detail
}  // namespace pfgtd
