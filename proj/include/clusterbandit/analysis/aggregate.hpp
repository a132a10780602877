#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "clusterbandit/core/trace.hpp"

namespace clusterbandit {

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::domain_error("sample_mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// n-1 denominator; a single observation has zero spread.
inline double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline double standard_error(std::span<const double> xs) {
  return sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
}

// sqrt of the average of the two variances.
inline double pooled_std(double std_a, double std_b) { return std::sqrt(0.5 * (std_a * std_a + std_b * std_b)); }

struct RegretSummary {
  std::size_t runs = 0;
  std::vector<double> mean_curve;
  std::vector<double> std_curve;
  double final_mean = 0.0;
  double final_std = 0.0;

  friend bool operator==(const RegretSummary&, const RegretSummary&) = default;
};

// Pointwise mean and sample standard deviation of equally long curves.
inline RegretSummary aggregate_curves(std::span<const std::vector<double>> curves) {
  if (curves.empty()) throw std::domain_error("aggregate_curves: no curves");
  const std::size_t len = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != len) throw std::domain_error("aggregate_curves: curves have different horizons");
  }
  RegretSummary s;
  s.runs = curves.size();
  s.mean_curve.assign(len, 0.0);
  s.std_curve.assign(len, 0.0);
  std::vector<double> column(curves.size());
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t r = 0; r < curves.size(); ++r) column[r] = curves[r][t];
    // Sorted so the result does not depend on the order of the runs.
    std::sort(column.begin(), column.end());
    s.mean_curve[t] = sample_mean(column);
    s.std_curve[t] = sample_std(column);
  }
  if (len > 0) {
    s.final_mean = s.mean_curve.back();
    s.final_std = s.std_curve.back();
  }
  return s;
}

inline RegretSummary aggregate_traces(std::span<const SimulationTrace> traces) {
  std::vector<std::vector<double>> curves;
  curves.reserve(traces.size());
  for (const auto& t : traces) curves.push_back(t.cumulative_regret_curve());
  return aggregate_curves(curves);
}

}  // namespace clusterbandit
