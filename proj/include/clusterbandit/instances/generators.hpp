#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clusterbandit/analysis/cluster_stats.hpp"
#include "clusterbandit/contextual/instance.hpp"
#include "clusterbandit/core/instance.hpp"
#include "clusterbandit/core/random.hpp"
#include "clusterbandit/instances/agglomerative.hpp"
#include "clusterbandit/instances/kmeans.hpp"
#include "clusterbandit/instances/reward_functions.hpp"

namespace clusterbandit {

struct StrongDominanceSpec {
  std::size_t n_arms = 100;
  std::size_t n_suboptimal_clusters = 10;
  std::size_t optimal_cluster_size = 10;
  double optimal_width = 0.1;
  double separation = 0.1;

  void validate() const {
    if (optimal_cluster_size < 2) throw std::domain_error("strong dominance spec: optimal_cluster_size must be >= 2");
    if (n_suboptimal_clusters == 0) throw std::domain_error("strong dominance spec: n_suboptimal_clusters must be >= 1");
    if (n_arms < optimal_cluster_size || n_arms - optimal_cluster_size < n_suboptimal_clusters) {
      throw std::domain_error("strong dominance spec: need n_arms - optimal_cluster_size >= n_suboptimal_clusters");
    }
    if (!(optimal_width >= 0.0 && optimal_width < 1.0)) throw std::domain_error("strong dominance spec: optimal_width must be in [0, 1)");
    if (!(separation > 0.0)) throw std::domain_error("strong dominance spec: separation must be positive");
    if (0.5 - optimal_width - separation < -1e-12) {
      throw std::domain_error("strong dominance spec: 0.5 - optimal_width - separation < 0 puts means outside [0, 1]");
    }
  }

  friend bool operator==(const StrongDominanceSpec&, const StrongDominanceSpec&) = default;
};

struct ContextualSpec {
  std::size_t n_arms = 400;
  std::size_t n_clusters = 20;
  std::size_t dim = 5;
  double epsilon = 0.5;
  std::size_t horizon = 2000;
  ContextDistribution context = ContextDistribution::uniform_unit_cube;

  void validate() const {
    if (dim == 0) throw std::domain_error("contextual spec: dim must be >= 1");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::domain_error("contextual spec: epsilon must be >= 0");
    if (n_clusters == 0 || n_clusters > n_arms) throw std::domain_error("contextual spec: need 1 <= n_clusters <= n_arms");
  }

  friend bool operator==(const ContextualSpec&, const ContextualSpec&) = default;
};

// Labels in [0, k) drawn uniformly per item, redrawn until every label is
// used. After many rejections the first k items of a random order are pinned
// to distinct labels so tight cases (items barely above k) still terminate.
inline std::vector<std::size_t> assign_uniform_nonempty(std::size_t items, std::size_t k, Rng& rng) {
  if (k == 0 || items < k) throw std::domain_error("uniform assignment: need 1 <= k <= items");
  constexpr int max_attempts = 100000;
  std::vector<std::size_t> labels(items);
  std::vector<std::size_t> counts(k);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::fill(counts.begin(), counts.end(), 0);
    for (auto& l : labels) {
      l = rng.index(k);
      ++counts[l];
    }
    if (std::find(counts.begin(), counts.end(), 0) == counts.end()) return labels;
  }
  std::vector<std::size_t> order(items);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = items; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  for (std::size_t i = 0; i < items; ++i) labels[order[i]] = i < k ? i : rng.index(k);
  return labels;
}

namespace detail {

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.index(i)]);
  return p;
}

inline double uniform_between(Rng& rng, double lo, double hi) {
  const double x = lo + (hi - lo) * rng.uniform();
  return std::clamp(x, std::min(lo, hi), std::max(lo, hi));
}

}  // namespace detail

// Cluster 0 is the optimal cluster. Arm ids are shuffled so that the optimal
// arm does not sit at a fixed index.
inline BanditInstance gen_strong_dominance(const StrongDominanceSpec& spec, Rng& rng) {
  spec.validate();
  const double top = 0.6;
  const double opt_low = top - spec.optimal_width;
  const double sub_best = opt_low - spec.separation;
  const double sub_worst = std::max(0.0, 0.5 - spec.optimal_width - spec.separation);

  const std::size_t n = spec.n_arms;
  const std::size_t a_star = spec.optimal_cluster_size;
  std::vector<double> canonical_mean(n);
  std::vector<std::size_t> canonical_label(n);

  canonical_mean[0] = top;
  canonical_mean[1] = opt_low;
  for (std::size_t i = 2; i < a_star; ++i) canonical_mean[i] = detail::uniform_between(rng, opt_low, top);

  const auto sub = assign_uniform_nonempty(n - a_star, spec.n_suboptimal_clusters, rng);
  std::vector<std::size_t> seen(spec.n_suboptimal_clusters, 0);
  for (std::size_t j = 0; j < sub.size(); ++j) {
    const std::size_t i = a_star + j;
    canonical_label[i] = 1 + sub[j];
    const std::size_t rank = seen[sub[j]]++;
    if (rank == 0) {
      canonical_mean[i] = sub_best;
    } else if (rank == 1) {
      canonical_mean[i] = sub_worst;
    } else {
      canonical_mean[i] = detail::uniform_between(rng, sub_worst, sub_best);
    }
  }

  const auto perm = detail::random_permutation(n, rng);
  std::vector<double> means(n);
  std::vector<ClusterId> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    means[perm[i]] = canonical_mean[i];
    labels[perm[i]] = canonical_label[i];
  }
  return BanditInstance(std::move(means), DisjointClustering(std::move(labels)));
}

// Balanced binary tree over arms sorted by mean; the lower floor(n/2) arms of
// every node go left. Nodes are numbered breadth-first.
inline ClusterTree sorted_binary_tree(std::span<const double> means) {
  const std::size_t n = means.size();
  if (n == 0) throw std::domain_error("sorted_binary_tree: no arms");
  std::vector<ArmId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ArmId a, ArmId b) { return means[a] < means[b]; });

  struct Item {
    std::size_t lo, hi;
  };
  std::vector<Item> items{{0, n}};
  std::vector<NodeId> parents{ClusterTree::no_parent};
  std::vector<std::optional<ArmId>> arms{std::nullopt};
  for (std::size_t head = 0; head < items.size(); ++head) {
    const Item it = items[head];
    if (it.hi - it.lo == 1) {
      arms[head] = order[it.lo];
      continue;
    }
    const std::size_t mid = it.lo + (it.hi - it.lo) / 2;
    for (Item child : {Item{it.lo, mid}, Item{mid, it.hi}}) {
      items.push_back(child);
      parents.push_back(head);
      arms.push_back(std::nullopt);
    }
  }
  return ClusterTree(std::move(parents), std::move(arms));
}

inline BanditInstance gen_sorted_binary_tree(std::size_t n_arms, Rng& rng) {
  if (n_arms < 2) throw std::domain_error("gen_sorted_binary_tree: need at least two arms");
  std::vector<double> means(n_arms);
  std::set<double> used;
  for (auto& m : means) {
    do {
      m = detail::uniform_between(rng, 0.1, 0.8);
    } while (!used.insert(m).second);
  }
  auto tree = sorted_binary_tree(means);
  return BanditInstance(std::move(means), std::nullopt, std::move(tree));
}

inline FeatureMatrix draw_features(std::size_t n, RewardFunction fn, Rng& rng) {
  FeatureMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(feature_dim(fn)));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform();
  }
  return x;
}

inline std::vector<double> evaluate_rows(RewardFunction fn, const FeatureMatrix& x) {
  std::vector<double> means(static_cast<std::size_t>(x.rows()));
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) row[static_cast<std::size_t>(j)] = x(i, j);
    means[static_cast<std::size_t>(i)] = evaluate(fn, row);
  }
  return means;
}

inline BanditInstance gen_kmeans_instance(std::size_t n_arms, std::size_t n_clusters, RewardFunction fn, Rng& rng) {
  if (n_clusters > n_arms) throw std::domain_error("gen_kmeans_instance: more clusters than arms");
  const auto x = draw_features(n_arms, fn, rng);
  auto km = kmeans(x, n_clusters, rng);
  return BanditInstance(evaluate_rows(fn, x), DisjointClustering(std::move(km.labels)));
}

// Recursive k-means refinement. A cluster with one arm becomes a leaf; one
// with at most `branching` arms (or at the last level) gets its arms as
// children directly.
inline ClusterTree kmeans_tree(const FeatureMatrix& x, std::size_t branching, std::size_t depth, Rng& rng) {
  if (branching < 2) throw std::domain_error("kmeans_tree: branching must be >= 2");
  if (depth < 1) throw std::domain_error("kmeans_tree: depth must be >= 1");
  const auto n = static_cast<std::size_t>(x.rows());
  if (n == 0) throw std::domain_error("kmeans_tree: no points");

  struct Item {
    std::vector<ArmId> arms;
    std::size_t level;
  };
  std::vector<Item> items;
  items.push_back({std::vector<ArmId>(n), 0});
  std::iota(items[0].arms.begin(), items[0].arms.end(), 0);
  std::vector<NodeId> parents{ClusterTree::no_parent};
  std::vector<std::optional<ArmId>> arms{std::nullopt};

  auto add = [&](NodeId parent, std::vector<ArmId> members, std::size_t level) {
    parents.push_back(parent);
    arms.push_back(members.size() == 1 ? std::optional<ArmId>(members.front()) : std::nullopt);
    items.push_back({std::move(members), level});
  };

  for (std::size_t head = 0; head < items.size(); ++head) {
    if (items[head].arms.size() == 1) {
      if (head == 0) arms[0] = items[0].arms.front();
      continue;
    }
    const auto members = items[head].arms;
    const std::size_t level = items[head].level;
    if (level >= depth || members.size() <= branching) {
      for (ArmId a : members) add(head, {a}, level + 1);
      continue;
    }
    FeatureMatrix sub(static_cast<Eigen::Index>(members.size()), x.cols());
    for (std::size_t i = 0; i < members.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(members[i]));
    const auto km = kmeans(sub, branching, rng);
    std::vector<std::vector<ArmId>> groups(branching);
    for (std::size_t i = 0; i < members.size(); ++i) groups[km.labels[i]].push_back(members[i]);
    for (auto& g : groups) add(head, std::move(g), level + 1);
  }
  return ClusterTree(std::move(parents), std::move(arms));
}

inline BanditInstance gen_kmeans_tree(std::size_t n_arms, std::size_t branching, std::size_t depth, RewardFunction fn,
                                      Rng& rng) {
  const auto x = draw_features(n_arms, fn, rng);
  auto tree = kmeans_tree(x, branching, depth, rng);
  return BanditInstance(evaluate_rows(fn, x), std::nullopt, std::move(tree));
}

// k-means clustering for the two-level policies plus an agglomerative tree
// over the same features for the tree policies.
inline BanditInstance gen_kmeans_agglomerative(std::size_t n_arms, std::size_t n_clusters, RewardFunction fn,
                                               Linkage linkage, Rng& rng) {
  if (n_clusters > n_arms) throw std::domain_error("gen_kmeans_agglomerative: more clusters than arms");
  const auto x = draw_features(n_arms, fn, rng);
  auto km = kmeans(x, n_clusters, rng);
  auto tree = gen_agglomerative_tree(x, linkage);
  return BanditInstance(evaluate_rows(fn, x), DisjointClustering(std::move(km.labels)), std::move(tree));
}

inline BanditInstance gen_uniform_instance(std::size_t n_arms, std::size_t n_clusters, Rng& rng) {
  if (n_clusters == 0 || n_clusters > n_arms) throw std::domain_error("gen_uniform_instance: need 1 <= n_clusters <= n_arms");
  std::vector<double> means(n_arms);
  for (auto& m : means) m = rng.uniform();
  auto labels = assign_uniform_nonempty(n_arms, n_clusters, rng);
  return BanditInstance(std::move(means), DisjointClustering(std::move(labels)));
}

inline ContextualInstance gen_contextual(const ContextualSpec& spec, Rng& rng) {
  spec.validate();
  const auto d = static_cast<Eigen::Index>(spec.dim);
  auto labels = assign_uniform_nonempty(spec.n_arms, spec.n_clusters, rng);
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(spec.n_clusters), d);
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    for (Eigen::Index j = 0; j < d; ++j) centroids(c, j) = rng.normal();
  }
  Eigen::MatrixXd thetas(static_cast<Eigen::Index>(spec.n_arms), d);
  for (Eigen::Index a = 0; a < thetas.rows(); ++a) {
    for (Eigen::Index j = 0; j < d; ++j) {
      thetas(a, j) = centroids(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(a)]), j) + spec.epsilon * rng.normal();
    }
  }
  return ContextualInstance(std::move(thetas), DisjointClustering(std::move(labels)), spec.context);
}

struct DominanceViolation {
  ClusterId cluster = 0;
  ArmId optimal_side_arm = 0;  // member of C*
  ArmId other_arm = 0;         // member of `cluster`
  double margin = 0.0;         // mu(optimal_side_arm) - mu(other_arm) <= 0
};

struct StrongDominanceReport {
  bool holds = true;
  std::size_t violation_count = 0;
  std::vector<DominanceViolation> violations;  // first `max_reported` of them
  ClusterStats stats;
};

inline StrongDominanceReport verify_strong_dominance(const BanditInstance& instance, std::size_t max_reported = 1000) {
  StrongDominanceReport report;
  report.stats = cluster_stats(instance);
  const auto& clustering = *instance.clustering();
  const auto& opt = clustering.members(report.stats.optimal_cluster);
  for (ClusterId c = 0; c < clustering.cluster_count(); ++c) {
    if (c == report.stats.optimal_cluster) continue;
    for (ArmId a : opt) {
      for (ArmId b : clustering.members(c)) {
        const double margin = instance.mean(a) - instance.mean(b);
        if (margin > 0.0) continue;
        report.holds = false;
        ++report.violation_count;
        if (report.violations.size() < max_reported) report.violations.push_back({c, a, b, margin});
      }
    }
  }
  return report;
}

}  // namespace clusterbandit
