#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "clusterbandit/core/beta_belief.hpp"
#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/core/random.hpp"
#include "clusterbandit/policies/policy.hpp"

namespace clusterbandit {

// Pull counts and empirical means for a set of entities (arms, clusters or
// tree nodes).
class UcbStats {
 public:
  UcbStats() = default;
  explicit UcbStats(std::size_t n) : pulls_(n, 0), reward_sum_(n, 0.0) {}

  std::size_t size() const noexcept { return pulls_.size(); }
  std::size_t pulls(std::size_t i) const { return pulls_.at(i); }
  double mean(std::size_t i) const {
    return pulls_.at(i) == 0 ? 0.0 : reward_sum_[i] / static_cast<double>(pulls_[i]);
  }

  void record(std::size_t i, double reward) {
    ++pulls_.at(i);
    reward_sum_[i] += reward;
  }

  // Direct state injection, for tests and replay.
  void set(std::size_t i, std::size_t pulls, double mean) {
    pulls_.at(i) = pulls;
    reward_sum_[i] = mean * static_cast<double>(pulls);
  }

 private:
  std::vector<std::size_t> pulls_;
  std::vector<double> reward_sum_;
};

struct UcbState {
  UcbStats arms;
  UcbStats clusters;  // UCBC only
  std::size_t total_pulls = 0;
};

// mu + sqrt(c * ln(total) / n); c = 2 is UCB1.
inline double ucb_index(double mean, std::size_t n, double log_total, double c = 2.0) {
  return mean + std::sqrt(c * log_total / static_cast<double>(n));
}

namespace detail {

// Unplayed candidates first (lowest index), otherwise the UCB index argmax
// with random ties.
template <typename Range>
std::size_t ucb_pick(const UcbStats& stats, const Range& candidates, double log_total, double c, Rng& rng) {
  for (std::size_t i : candidates) {
    if (stats.pulls(i) == 0) return i;
  }
  RandomTieArgmax best(rng);
  for (std::size_t i : candidates) best.offer(i, ucb_index(stats.mean(i), stats.pulls(i), log_total, c));
  return best.best();
}

struct IndexRange {
  std::size_t n;
  struct iterator {
    std::size_t i;
    std::size_t operator*() const { return i; }
    iterator& operator++() {
      ++i;
      return *this;
    }
    bool operator!=(const iterator& o) const { return i != o.i; }
  };
  iterator begin() const { return {0}; }
  iterator end() const { return {n}; }
};

}  // namespace detail

inline ArmId ucb1_select(const UcbStats& arms, std::size_t t, Rng& rng, double c = 2.0) {
  const double log_t = std::log(static_cast<double>(std::max<std::size_t>(t, 1)));
  return detail::ucb_pick(arms, detail::IndexRange{arms.size()}, log_t, c, rng);
}

// Two-level UCB: cluster statistics aggregate every reward observed from the
// cluster; both levels use the global round t in the logarithm.
inline ClusterChoice ucbc_select(const UcbStats& clusters, const UcbStats& arms, const DisjointClustering& clustering,
                                 std::size_t t, Rng& rng, double c = 2.0) {
  const double log_t = std::log(static_cast<double>(std::max<std::size_t>(t, 1)));
  const ClusterId cluster = detail::ucb_pick(clusters, detail::IndexRange{clusters.size()}, log_t, c, rng);
  const ArmId arm = detail::ucb_pick(arms, clustering.members(cluster), log_t, c, rng);
  return {cluster, arm};
}

// Tree UCB: at each internal node, unvisited children first (lowest index),
// else the child maximizing mu_c + sqrt(c ln N_parent / N_c).
inline TreeChoice uct_select(const UcbStats& nodes, const ClusterTree& tree, Rng& rng, double c = 2.0) {
  TreeChoice choice;
  NodeId v = tree.root();
  choice.path.push_back(v);
  while (!tree.is_leaf(v)) {
    const double log_parent = std::log(static_cast<double>(std::max<std::size_t>(nodes.pulls(v), 1)));
    v = detail::ucb_pick(nodes, tree.children(v), log_parent, c, rng);
    choice.path.push_back(v);
  }
  choice.arm = tree.arm_of(v);
  return choice;
}

class Ucb1 final : public Policy {
 public:
  explicit Ucb1(std::size_t n_arms, double c = 2.0) : stats_(n_arms), c_(c) {}

  std::string_view key() const noexcept override { return "ucb1"; }

  Selection select(std::size_t t, Rng& rng) override { return {ucb1_select(stats_, t, rng, c_), std::nullopt, {}}; }

  void update(const Selection& s, double reward) override {
    require_unit_reward(reward, "ucb1");
    stats_.record(s.arm, reward);
  }

  const UcbStats& stats() const noexcept { return stats_; }

 private:
  UcbStats stats_;
  double c_;
};

class UcbClustered final : public Policy {
 public:
  explicit UcbClustered(DisjointClustering clustering, double c = 2.0)
      : clustering_(std::move(clustering)),
        clusters_(clustering_.cluster_count()),
        arms_(clustering_.arm_count()),
        c_(c) {}

  std::string_view key() const noexcept override { return "ucbc"; }

  Selection select(std::size_t t, Rng& rng) override {
    const auto choice = ucbc_select(clusters_, arms_, clustering_, t, rng, c_);
    return {choice.arm, choice.cluster, {choice.cluster}};
  }

  void update(const Selection& s, double reward) override {
    if (!s.cluster || !clustering_.contains(*s.cluster, s.arm)) {
      throw ContractViolation("ucbc: arm is not in the selected cluster");
    }
    require_unit_reward(reward, "ucbc");
    clusters_.record(*s.cluster, reward);
    arms_.record(s.arm, reward);
  }

  const UcbStats& cluster_stats() const noexcept { return clusters_; }
  const UcbStats& arm_stats() const noexcept { return arms_; }

 private:
  DisjointClustering clustering_;
  UcbStats clusters_;
  UcbStats arms_;
  double c_;
};

class Uct final : public Policy {
 public:
  explicit Uct(ClusterTree tree, double c = 2.0) : tree_(std::move(tree)), nodes_(tree_.node_count()), c_(c) {}

  std::string_view key() const noexcept override { return "uct"; }

  Selection select(std::size_t, Rng& rng) override {
    auto choice = uct_select(nodes_, tree_, rng, c_);
    Selection s;
    s.arm = choice.arm;
    s.path = std::move(choice.path);
    if (s.path.size() > 1) s.cluster = s.path[1];
    return s;
  }

  void update(const Selection& s, double reward) override {
    if (!tree_.is_root_to_leaf_path(s.path)) throw ContractViolation("uct: not a root-to-leaf path");
    require_unit_reward(reward, "uct");
    for (NodeId v : s.path) nodes_.record(v, reward);
  }

  const UcbStats& node_stats() const noexcept { return nodes_; }

 private:
  ClusterTree tree_;
  UcbStats nodes_;
  double c_;
};

}  // namespace clusterbandit
