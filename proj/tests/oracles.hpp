// Independent reference computations used only by the tests. Nothing here
// calls into the library's own implementations of the quantity under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <Eigen/Dense>

namespace oracle {

// sup |F_n(x) - F(x)| over the sample.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
  }
  return d;
}

inline double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

inline double normal_cdf(double mean, double sd, double x) { return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0))); }

// Bernoulli KL in long double, 0 ln 0 = 0.
inline long double kl(long double p, long double q) {
  long double r = 0.0L;
  if (p > 0.0L) r += p * std::log(p / q);
  if (p < 1.0L) r += (1.0L - p) * std::log((1.0L - p) / (1.0L - q));
  return r;
}

// Best split of 1-D points into two non-empty groups, by brute force.
inline std::vector<std::set<double>> best_two_partition(const std::vector<double>& pts) {
  const std::size_t n = pts.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::set<double>> out;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<double> g[2];
    for (std::size_t i = 0; i < n; ++i) g[(mask >> i) & 1u].push_back(pts[i]);
    double cost = 0.0;
    for (auto& grp : g) {
      double m = 0.0;
      for (double x : grp) m += x;
      m /= static_cast<double>(grp.size());
      for (double x : grp) cost += (x - m) * (x - m);
    }
    if (cost < best) {
      best = cost;
      out = {std::set<double>(g[0].begin(), g[0].end()), std::set<double>(g[1].begin(), g[1].end())};
    }
  }
  return out;
}

struct PairViolation {
  std::size_t cluster, opt_arm, other_arm;
  bool operator<(const PairViolation& o) const {
    return std::tie(cluster, opt_arm, other_arm) < std::tie(o.cluster, o.opt_arm, o.other_arm);
  }
  bool operator==(const PairViolation&) const = default;
};

// All (a in C*, b in C) with mu_a <= mu_b, where C* holds the first maximizer.
inline std::set<PairViolation> dominance_violations(const std::vector<double>& means, const std::vector<std::size_t>& labels) {
  std::size_t best = 0;
  for (std::size_t a = 0; a < means.size(); ++a) {
    if (means[a] > means[best]) best = a;
  }
  const std::size_t copt = labels[best];
  std::set<PairViolation> v;
  for (std::size_t a = 0; a < means.size(); ++a) {
    if (labels[a] != copt) continue;
    for (std::size_t b = 0; b < means.size(); ++b) {
      if (labels[b] == copt) continue;
      if (means[a] <= means[b]) v.insert({labels[b], a, b});
    }
  }
  return v;
}

// Minimal tree view rebuilt from raw parent and leaf tables.
struct RawTree {
  std::vector<std::size_t> parent;  // SIZE_MAX for the root
  std::vector<std::optional<std::size_t>> arm;

  std::vector<std::size_t> children(std::size_t v) const {
    std::vector<std::size_t> c;
    for (std::size_t u = 0; u < parent.size(); ++u) {
      if (parent[u] == v) c.push_back(u);
    }
    return c;
  }
  bool ancestor_or_self(std::size_t anc, std::size_t v) const {
    for (;;) {
      if (v == anc) return true;
      if (parent[v] == std::numeric_limits<std::size_t>::max()) return false;
      v = parent[v];
    }
  }
  std::vector<std::size_t> arms_under(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < arm.size(); ++u) {
      if (arm[u] && ancestor_or_self(v, u)) out.push_back(*arm[u]);
    }
    return out;
  }
  std::size_t leaf_of(std::size_t a) const {
    for (std::size_t u = 0; u < arm.size(); ++u) {
      if (arm[u] == a) return u;
    }
    return std::numeric_limits<std::size_t>::max();
  }
};

// Tree bound coefficient (without the (1+eps) ln T factor) by enumerating
// subtrees along the optimal path.
inline double hts_coefficient(const RawTree& t, const std::vector<double>& means) {
  std::size_t best = 0;
  for (std::size_t a = 0; a < means.size(); ++a) {
    if (means[a] > means[best]) best = a;
  }
  std::vector<std::size_t> path;
  for (std::size_t v = t.leaf_of(best);; v = t.parent[v]) {
    path.insert(path.begin(), v);
    if (t.parent[v] == std::numeric_limits<std::size_t>::max()) break;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const std::size_t node = path[i], opt_child = path[i + 1];
    if (t.arm[opt_child]) {
      for (std::size_t a : t.arms_under(node)) {
        if (a != best) sum += 1.0 / (means[best] - means[a]);
      }
      continue;
    }
    double lo = 1e300;
    for (std::size_t a : t.arms_under(opt_child)) lo = std::min(lo, means[a]);
    for (std::size_t c : t.children(node)) {
      if (c == opt_child) continue;
      double hi = -1e300;
      for (std::size_t a : t.arms_under(c)) hi = std::max(hi, means[a]);
      const double d = lo - hi;
      if (d > 0.0) sum += (means[best] - hi) / (d * d);
    }
  }
  return sum;
}

// Precision matrix and mean from scratch: B = I + sum x x^T, mu = B^{-1} f.
struct DenseRidge {
  Eigen::MatrixXd b;
  Eigen::VectorXd f;
  explicit DenseRidge(int d) : b(Eigen::MatrixXd::Identity(d, d)), f(Eigen::VectorXd::Zero(d)) {}
  void add(const Eigen::VectorXd& x, double r) {
    b += x * x.transpose();
    f += r * x;
  }
  Eigen::MatrixXd inverse() const { return b.fullPivLu().inverse(); }
  Eigen::VectorXd mean() const { return b.fullPivLu().solve(f); }
};

// Reward landscapes in long double.
inline long double sin_product(long double x) { return 0.5L * (std::sin(13.0L * x) * std::sin(27.0L * x) + 1.0L); }
inline long double gaussian_mix(long double x) {
  return 0.5L * (std::exp(-(0.1L - x) * (0.1L - x) / 0.05L) + std::exp(-(0.9L - x) * (0.9L - x) / 0.8L));
}
inline long double bump(long double x1, long double x2) {
  return 0.5L * std::exp(-100.0L * (0.2L - x1) * (0.2L - x1)) + 0.2L * std::exp(-100.0L * (0.7L - x1) * (0.7L - x1)) +
         0.2L * std::exp(-100.0L * (0.7L - x2) * (0.7L - x2));
}

}  // namespace oracle
