#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clusterbandit {

// D(p || q) between Bernoulli(p) and Bernoulli(q), with 0 ln 0 = 0.
// Returns +infinity when q is 0 or 1 and p differs from q.
inline double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("kl_bernoulli: arguments must lie in [0, 1]");
  }
  if (p == q) return 0.0;
  if (q == 0.0 || q == 1.0) return std::numeric_limits<double>::infinity();
  const auto term = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); };
  return std::max(0.0, term(p, q) + term(1.0 - p, 1.0 - q));
}

// Pinsker lower bound 2 (p - q)^2 <= D(p || q).
inline double pinsker_bound(double p, double q) { return 2.0 * (p - q) * (p - q); }

}  // namespace clusterbandit
