#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pfgtd::metrics {

/// Mean of |v - G| / (|G| + |v|); a pair with both zero contributes 0.
inline double smape(const std::vector<double>& predictions, const std::vector<double>& returns) {
  if (predictions.size() != returns.size())
    throw std::invalid_argument("smape: prediction and return streams differ in length");
  if (predictions.empty()) throw std::invalid_argument("smape: empty streams");
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double denom = std::abs(returns[i]) + std::abs(predictions[i]);
    if (denom > 0.0) total += std::abs(predictions[i] - returns[i]) / denom;
  }
  return total / static_cast<double>(predictions.size());
}

struct DiscountedReturns {
  std::vector<double> values;
  // |true infinite-horizon return - values[t]| <= truncation_bound[t]
  std::vector<double> truncation_bound;
};

/// G_t = sum_k gamma^k r_{t+k} over the observed stream, by a backward pass. The
/// unobserved tail beyond the stream contributes at most gamma^{T-t} r_max / (1 - gamma).
inline DiscountedReturns true_returns(const std::vector<double>& rewards, double gamma) {
  DiscountedReturns out;
  const std::size_t T = rewards.size();
  out.values.assign(T, 0.0);
  out.truncation_bound.assign(T, 0.0);
  double r_max = 0.0;
  for (double r : rewards) r_max = std::max(r_max, std::abs(r));
  double acc = 0.0;
  double tail = gamma < 1.0 ? r_max / (1.0 - gamma) : (r_max > 0.0 ? INFINITY : 0.0);
  for (std::size_t k = T; k-- > 0;) {
    acc = rewards[k] + gamma * acc;
    tail *= gamma;
    out.values[k] = acc;
    out.truncation_bound[k] = tail;
  }
  return out;
}

}  // namespace pfgtd::metrics
