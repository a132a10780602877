#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterbandit/analysis/cluster_stats.hpp"
#include "clusterbandit/analysis/kl.hpp"
#include "clusterbandit/core/instance.hpp"

namespace clusterbandit {

inline constexpr const char* kLeadingTermCaveat =
    "leading term only: constants and o(log T) remainders are asymptotic and not included";

// A regret-bound evaluation. `value` is the leading log T term;
// `log_coefficient` is value / ln T. Infinite terms set `unbounded` and make
// value +infinity.
struct BoundValue {
  std::string name;
  double horizon = 0.0;
  double value = 0.0;
  double log_coefficient = 0.0;
  double log_log_term = 0.0;  // lower-order ln ln T contribution, reported separately
  bool unbounded = false;
  bool assumption_holds = true;
  std::vector<std::string> warnings;
  std::string caveat = kLeadingTermCaveat;
};

namespace detail {

inline void require_horizon(double horizon, const char* where) {
  if (!(horizon >= 2.0)) throw std::domain_error(std::string(where) + ": horizon must be at least 2");
}

// Delta / D with Delta = 0 contributing nothing.
inline double gap_over_kl(double gap, double kl, bool& infinite) {
  if (gap == 0.0) return 0.0;
  if (kl == 0.0) {
    infinite = true;
    return std::numeric_limits<double>::infinity();
  }
  return gap / kl;
}

inline void finish(BoundValue& b, double coefficient, double horizon, double eps) {
  b.horizon = horizon;
  b.log_coefficient = (1.0 + eps) * coefficient;
  b.value = b.log_coefficient * std::log(horizon);
  if (b.unbounded) {
    b.value = std::numeric_limits<double>::infinity();
    b.log_coefficient = std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

// Instance-dependent upper bound on TSC regret under strong dominance:
// (1+eps) [ sum_{C != C*} Delta_C / D(mu_bar_C, mu_under_C*) + sum_{a in C*} Delta_a / D(mu_a, mu*) ] ln T.
inline BoundValue tsc_instance_bound(const ClusterStats& stats, double horizon, double eps) {
  detail::require_horizon(horizon, "tsc_instance_bound");
  if (!(eps > 0.0)) throw std::domain_error("tsc_instance_bound: eps must be positive");
  BoundValue b;
  b.name = "tsc_instance";
  const auto& opt = stats.optimal();
  double cluster_sum = 0.0;
  double arm_sum = 0.0;
  for (const auto& c : stats.clusters) {
    if (c.optimal) continue;
    if (c.distance <= 0.0) {
      b.assumption_holds = false;
      b.warnings.push_back("strong dominance fails for cluster " + std::to_string(c.id));
    }
    bool infinite = false;
    cluster_sum += detail::gap_over_kl(c.gap, kl_bernoulli(c.mu_bar, opt.mu_under), infinite);
    if (infinite) {
      b.unbounded = true;
      b.warnings.push_back("cluster " + std::to_string(c.id) + ": best mean coincides with the optimal cluster's worst");
    }
  }
  for (ArmId a : stats.optimal_members) {
    bool infinite = false;
    arm_sum += detail::gap_over_kl(stats.arm_gaps[a], kl_bernoulli(stats.means[a], stats.mu_star), infinite);
    if (infinite) b.unbounded = true;
  }
  detail::finish(b, cluster_sum + arm_sum, horizon, eps);
  if (!b.unbounded) b.log_log_term = (1.0 + eps) * cluster_sum * std::log(std::log(horizon));
  return b;
}

// The same bound with every KL term replaced by its Pinsker lower bound,
// which gives (1+eps)/2 [ sum_C (1 + gamma_C)/d_C + sum_{a in C*} 1/Delta_a ] ln T.
inline BoundValue tsc_pinsker_bound(const ClusterStats& stats, double horizon, double eps) {
  detail::require_horizon(horizon, "tsc_pinsker_bound");
  if (!(eps > 0.0)) throw std::domain_error("tsc_pinsker_bound: eps must be positive");
  BoundValue b;
  b.name = "tsc_pinsker";
  double sum = 0.0;
  for (const auto& c : stats.clusters) {
    if (c.optimal) continue;
    if (c.distance <= 0.0) {
      b.assumption_holds = false;
      b.unbounded = true;
      continue;
    }
    sum += c.gap / (2.0 * c.distance * c.distance);
  }
  for (ArmId a : stats.optimal_members) {
    const double gap = stats.arm_gaps[a];
    if (gap > 0.0) sum += 1.0 / (2.0 * gap);
  }
  detail::finish(b, sum, horizon, eps);
  return b;
}

// Expected plays of sub-optimal cluster C up to T:
// (1+eps) (ln T + ln ln T) / D(mu_bar_C, mu_under_C*).
inline double cluster_plays_bound(const ClusterStats& stats, ClusterId cluster, double horizon, double eps) {
  detail::require_horizon(horizon, "cluster_plays_bound");
  const auto& c = stats.clusters.at(cluster);
  if (c.optimal) throw std::domain_error("cluster_plays_bound: cluster is the optimal cluster");
  const double kl = kl_bernoulli(c.mu_bar, stats.optimal().mu_under);
  if (kl == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 + eps) * (std::log(horizon) + std::log(std::log(horizon))) / kl;
}

// Shape curve sqrt((A* + K (1 + gamma)) T ln T), unit constant.
inline BoundValue tsc_minimax_bound(const ClusterStats& stats, double horizon) {
  detail::require_horizon(horizon, "tsc_minimax_bound");
  BoundValue b;
  b.name = "tsc_minimax";
  b.horizon = horizon;
  const double k = static_cast<double>(stats.suboptimal_count);
  const double load = static_cast<double>(stats.optimal_size) + k * (1.0 + stats.gamma);
  b.value = std::sqrt(load * horizon * std::log(horizon));
  b.log_coefficient = b.value / std::log(horizon);
  b.unbounded = !std::isfinite(b.value);
  b.assumption_holds = stats.min_distance > 0.0 || stats.suboptimal_count == 0;
  b.caveat = "order-of-growth curve with unit constant; not a certified bound";
  return b;
}

// Reference curve sqrt((A* + K) T) for the minimax lower bound.
inline BoundValue minimax_lower_reference(const ClusterStats& stats, double horizon) {
  detail::require_horizon(horizon, "minimax_lower_reference");
  BoundValue b;
  b.name = "minimax_lower";
  b.horizon = horizon;
  b.value = std::sqrt(static_cast<double>(stats.optimal_size + stats.suboptimal_count) * horizon);
  b.log_coefficient = b.value / std::log(horizon);
  b.caveat = "order-of-growth curve with unit constant";
  return b;
}

// Asymptotic lower bound constant times ln T:
// [ sum_{a in C*} Delta_a / D(mu_a, mu*) + sum_{C != C*} Delta_C / D(mu_under_C, mu*) ] ln T.
inline BoundValue lai_robbins_lower(const ClusterStats& stats, double horizon) {
  detail::require_horizon(horizon, "lai_robbins_lower");
  BoundValue b;
  b.name = "lai_robbins_lower";
  double sum = 0.0;
  const auto add = [&](double gap, double kl, const std::string& what) {
    if (gap == 0.0) return;
    if (std::isinf(kl)) {
      b.warnings.push_back(what + ": infinite divergence, term dropped");
      return;
    }
    if (kl == 0.0) {
      b.warnings.push_back(what + ": zero divergence, term dropped");
      return;
    }
    sum += gap / kl;
  };
  for (ArmId a : stats.optimal_members) {
    add(stats.arm_gaps[a], kl_bernoulli(stats.means[a], stats.mu_star), "arm " + std::to_string(a));
  }
  for (const auto& c : stats.clusters) {
    if (c.optimal) continue;
    if (c.distance <= 0.0) b.assumption_holds = false;
    add(c.gap, kl_bernoulli(c.mu_under, stats.mu_star), "cluster " + std::to_string(c.id));
  }
  b.horizon = horizon;
  b.log_coefficient = sum;
  b.value = sum * std::log(horizon);
  return b;
}

// ---------------------------------------------------------------------------
// Hierarchical strong dominance
// ---------------------------------------------------------------------------

struct HierarchyViolation {
  std::size_t depth = 0;     // depth of the parent node
  NodeId parent = 0;
  NodeId optimal_child = 0;
  NodeId sibling = 0;
  ArmId optimal_side_arm = 0;  // worst arm under the optimal child
  ArmId sibling_arm = 0;       // best arm under the sibling
  double distance = 0.0;       // min(optimal child) - max(sibling) <= 0
};

struct HierarchyReport {
  bool holds = true;
  std::vector<HierarchyViolation> violations;
};

namespace detail {

struct SubtreeExtremes {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  ArmId argmin = 0;
  ArmId argmax = 0;
};

inline SubtreeExtremes extremes(const ClusterTree& tree, const std::vector<double>& means, NodeId v) {
  SubtreeExtremes e;
  for (ArmId a : tree.arms_under(v)) {
    if (means[a] < e.min) {
      e.min = means[a];
      e.argmin = a;
    }
    if (means[a] > e.max) {
      e.max = means[a];
      e.argmax = a;
    }
  }
  return e;
}

// Visits each node on the root-to-optimal-leaf path together with its
// optimal child.
template <typename Visitor>
void walk_optimal_path(const ClusterTree& tree, ArmId optimal_arm, Visitor&& visit) {
  const auto path = tree.path_to(optimal_arm);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) visit(path[i], path[i + 1]);
}

}  // namespace detail

// Along the path to the optimal arm, every sibling subtree must lie strictly
// below the subtree containing the optimum.
inline HierarchyReport audit_hierarchical_dominance(const ClusterTree& tree, const std::vector<double>& means,
                                                    ArmId optimal_arm) {
  HierarchyReport report;
  detail::walk_optimal_path(tree, optimal_arm, [&](NodeId parent, NodeId optimal_child) {
    const auto opt = detail::extremes(tree, means, optimal_child);
    for (NodeId sibling : tree.children(parent)) {
      if (sibling == optimal_child) continue;
      const auto sib = detail::extremes(tree, means, sibling);
      const double d = opt.min - sib.max;
      if (d <= 0.0) {
        report.holds = false;
        report.violations.push_back({tree.node_depth(parent), parent, optimal_child, sibling, opt.argmin, sib.argmax, d});
      }
    }
  });
  return report;
}

inline HierarchyReport audit_hierarchical_dominance(const BanditInstance& instance) {
  if (!instance.tree()) throw std::domain_error("audit_hierarchical_dominance: instance has no tree");
  return audit_hierarchical_dominance(*instance.tree(), instance.means(), instance.optimal_arm());
}

// Tree bound: (1+eps) [ sum over path nodes, sum over off-path children j of
// Delta_j / d_j^2 + sum_{a in T_L*, a != a*} 1/Delta_a ] ln T, where T_L* is
// the deepest path node whose optimal child is a leaf.
inline BoundValue hts_instance_bound(const ClusterTree& tree, const std::vector<double>& means, double horizon,
                                     double eps) {
  detail::require_horizon(horizon, "hts_instance_bound");
  if (!(eps > 0.0)) throw std::domain_error("hts_instance_bound: eps must be positive");
  if (tree.arm_count() != means.size()) throw std::domain_error("hts_instance_bound: tree/means size mismatch");
  BoundValue b;
  b.name = "hts_instance";
  ArmId optimal = 0;
  for (ArmId a = 1; a < means.size(); ++a) {
    if (means[a] > means[optimal]) optimal = a;
  }
  const double mu_star = means[optimal];
  double sum = 0.0;
  detail::walk_optimal_path(tree, optimal, [&](NodeId parent, NodeId optimal_child) {
    if (tree.is_leaf(optimal_child)) {
      for (ArmId a : tree.arms_under(parent)) {
        if (a == optimal) continue;
        const double gap = mu_star - means[a];
        if (gap <= 0.0) {
          b.warnings.push_back("arm " + std::to_string(a) + " ties the optimum; term skipped");
          continue;
        }
        sum += 1.0 / gap;
      }
      return;
    }
    const auto opt = detail::extremes(tree, means, optimal_child);
    for (NodeId sibling : tree.children(parent)) {
      if (sibling == optimal_child) continue;
      const auto sib = detail::extremes(tree, means, sibling);
      const double d = opt.min - sib.max;
      if (d <= 0.0) {
        b.assumption_holds = false;
        b.warnings.push_back("node " + std::to_string(sibling) + " violates hierarchical dominance; term skipped");
        continue;
      }
      sum += (mu_star - sib.max) / (d * d);
    }
  });
  detail::finish(b, sum, horizon, eps);
  return b;
}

inline BoundValue hts_instance_bound(const BanditInstance& instance, double horizon, double eps) {
  if (!instance.tree()) throw std::domain_error("hts_instance_bound: instance has no tree");
  return hts_instance_bound(*instance.tree(), instance.means(), horizon, eps);
}

}  // namespace clusterbandit
