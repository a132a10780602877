#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "clusterbandit/core/instance.hpp"

namespace clusterbandit {

struct ClusterSummary {
  ClusterId id = 0;
  std::size_t size = 0;
  double mu_bar = 0.0;    // best mean in the cluster
  double mu_under = 0.0;  // worst mean in the cluster
  double width = 0.0;     // mu_bar - mu_under
  double distance = 0.0;  // d_C = min over C* minus max over C; 0 for C*
  double gap = 0.0;       // Delta_C = mu* - mu_bar
  double gamma = 0.0;     // w* / d_C; 0 for C*
  bool optimal = false;
};

struct ClusterStats {
  std::vector<ClusterSummary> clusters;
  ClusterId optimal_cluster = 0;
  ArmId optimal_arm = 0;
  double mu_star = 0.0;
  double optimal_width = 0.0;  // w*
  std::size_t optimal_size = 0;  // A*
  std::size_t suboptimal_count = 0;  // K
  double gamma = 0.0;  // sum of gamma_C over K
  double min_distance = std::numeric_limits<double>::infinity();  // d
  std::vector<double> arm_gaps;  // Delta_a
  std::vector<double> means;
  std::vector<ArmId> optimal_members;
  bool unique_optimum = true;      // exactly one arm attains mu*
  bool optimum_in_one_cluster = true;  // all maximizers share a cluster

  const ClusterSummary& optimal() const { return clusters.at(optimal_cluster); }
};

inline ClusterStats cluster_stats(const BanditInstance& instance) {
  if (!instance.clustering()) throw std::domain_error("cluster_stats: instance has no disjoint clustering");
  const auto& clustering = *instance.clustering();

  ClusterStats stats;
  stats.means = instance.means();
  stats.mu_star = instance.optimal_mean();
  stats.optimal_arm = instance.optimal_arm();
  stats.optimal_cluster = clustering.cluster_of(stats.optimal_arm);
  stats.unique_optimum = instance.has_unique_optimum();
  for (ArmId a : instance.optimal_arms()) {
    if (clustering.cluster_of(a) != stats.optimal_cluster) stats.optimum_in_one_cluster = false;
  }
  stats.arm_gaps.resize(instance.arm_count());
  for (ArmId a = 0; a < instance.arm_count(); ++a) stats.arm_gaps[a] = instance.regret_of(a);

  stats.clusters.resize(clustering.cluster_count());
  for (ClusterId c = 0; c < clustering.cluster_count(); ++c) {
    auto& s = stats.clusters[c];
    const auto& members = clustering.members(c);
    s.id = c;
    s.size = members.size();
    s.mu_bar = -std::numeric_limits<double>::infinity();
    s.mu_under = std::numeric_limits<double>::infinity();
    for (ArmId a : members) {
      s.mu_bar = std::max(s.mu_bar, instance.mean(a));
      s.mu_under = std::min(s.mu_under, instance.mean(a));
    }
    s.width = s.mu_bar - s.mu_under;
    s.gap = stats.mu_star - s.mu_bar;
    s.optimal = c == stats.optimal_cluster;
  }

  const auto& opt = stats.clusters[stats.optimal_cluster];
  stats.optimal_width = opt.width;
  stats.optimal_size = opt.size;
  stats.optimal_members = clustering.members(stats.optimal_cluster);
  stats.suboptimal_count = clustering.cluster_count() - 1;

  double gamma_sum = 0.0;
  for (auto& s : stats.clusters) {
    if (s.optimal) continue;
    s.distance = opt.mu_under - s.mu_bar;
    if (s.distance > 0.0) {
      s.gamma = stats.optimal_width / s.distance;
    } else {
      s.gamma = stats.optimal_width == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    gamma_sum += s.gamma;
    stats.min_distance = std::min(stats.min_distance, s.distance);
  }
  stats.gamma = stats.suboptimal_count == 0 ? 0.0 : gamma_sum / static_cast<double>(stats.suboptimal_count);
  return stats;
}

}  // namespace clusterbandit
