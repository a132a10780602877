#pragma once

#include <span>
#include <string>
#include <vector>

#include "clusterbandit/core/beta_belief.hpp"
#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/core/random.hpp"
#include "clusterbandit/policies/policy.hpp"

namespace clusterbandit {

// ---------------------------------------------------------------------------
// Free-standing selection and update rules
// ---------------------------------------------------------------------------

// argmax over one Beta draw per arm.
inline ArmId ts_select(std::span<const BetaBelief> beliefs, Rng& rng) {
  RandomTieArgmax best(rng);
  for (ArmId a = 0; a < beliefs.size(); ++a) best.offer(a, beliefs[a].sample(rng));
  return best.best();
}

// Same rule restricted to `candidates`; returns a member of `candidates`.
inline ArmId ts_select_among(std::span<const BetaBelief> beliefs, std::span<const ArmId> candidates, Rng& rng) {
  RandomTieArgmax best(rng);
  for (ArmId a : candidates) best.offer(a, beliefs[a].sample(rng));
  return best.best();
}

struct TscState {
  std::vector<BetaBelief> cluster_beliefs;
  std::vector<BetaBelief> arm_beliefs;

  static TscState fresh(const DisjointClustering& clustering) {
    return {std::vector<BetaBelief>(clustering.cluster_count()), std::vector<BetaBelief>(clustering.arm_count())};
  }
};

// Two-level Thompson sampling: a cluster by Beta sampling over cluster
// beliefs, then an arm by Beta sampling inside that cluster only.
inline ClusterChoice tsc_select(const TscState& state, const DisjointClustering& clustering, Rng& rng) {
  const ClusterId cluster = ts_select(state.cluster_beliefs, rng);
  const ArmId arm = ts_select_among(state.arm_beliefs, clustering.members(cluster), rng);
  return {cluster, arm};
}

inline void tsc_update(TscState& state, const DisjointClustering& clustering, ClusterId cluster, ArmId arm,
                       double reward) {
  if (!clustering.contains(cluster, arm)) {
    throw ContractViolation("tsc_update: arm " + std::to_string(arm) + " is not in cluster " +
                            std::to_string(cluster));
  }
  require_unit_reward(reward, "tsc_update");
  state.arm_beliefs[arm].update(reward);
  state.cluster_beliefs[cluster].update(reward);
}

struct HtsState {
  std::vector<BetaBelief> node_beliefs;

  static HtsState fresh(const ClusterTree& tree) { return {std::vector<BetaBelief>(tree.node_count())}; }
};

// Descends from the root, moving at each internal node to the child whose
// Beta draw is largest, until a leaf is reached.
inline TreeChoice hts_select(const HtsState& state, const ClusterTree& tree, Rng& rng) {
  TreeChoice choice;
  NodeId v = tree.root();
  choice.path.push_back(v);
  while (!tree.is_leaf(v)) {
    RandomTieArgmax best(rng);
    for (NodeId c : tree.children(v)) best.offer(c, state.node_beliefs[c].sample(rng));
    v = best.best();
    choice.path.push_back(v);
  }
  choice.arm = tree.arm_of(v);
  return choice;
}

// Applies the Beta update to every node on the root-to-leaf path.
inline void hts_update(HtsState& state, const ClusterTree& tree, std::span<const NodeId> path, double reward) {
  if (!tree.is_root_to_leaf_path(path)) throw ContractViolation("hts_update: not a root-to-leaf path");
  require_unit_reward(reward, "hts_update");
  for (NodeId v : path) state.node_beliefs[v].update(reward);
}

// Statistic used by TSMax to elect the arm that represents its cluster.
enum class TsMaxStatistic {
  posterior_mean,  // s / (s + f)
  empirical_mean,  // (s - 1) / (s + f - 2); unplayed arms count as 1/2
};

inline double tsmax_score(const BetaBelief& b, TsMaxStatistic statistic) {
  if (statistic == TsMaxStatistic::posterior_mean) return b.mean();
  const double n = b.observations();
  return n > 0.0 ? (b.successes() - 1.0) / n : 0.5;
}

// TSMax: each cluster is represented by its best-looking arm (ties to the
// lowest index); the cluster draw comes from that arm's belief. The arm is
// then chosen by plain Thompson sampling inside the winning cluster.
inline ClusterChoice tsmax_select(std::span<const BetaBelief> arm_beliefs, const DisjointClustering& clustering,
                                  Rng& rng, TsMaxStatistic statistic = TsMaxStatistic::posterior_mean) {
  RandomTieArgmax best_cluster(rng);
  for (ClusterId c = 0; c < clustering.cluster_count(); ++c) {
    const auto& members = clustering.members(c);
    ArmId representative = members.front();
    double best_score = tsmax_score(arm_beliefs[representative], statistic);
    for (ArmId a : members) {
      const double score = tsmax_score(arm_beliefs[a], statistic);
      if (score > best_score) {
        best_score = score;
        representative = a;
      }
    }
    best_cluster.offer(c, arm_beliefs[representative].sample(rng));
  }
  const ClusterId cluster = best_cluster.best();
  return {cluster, ts_select_among(arm_beliefs, clustering.members(cluster), rng)};
}

// ---------------------------------------------------------------------------
// Policy objects
// ---------------------------------------------------------------------------

class ThompsonSampling final : public Policy {
 public:
  explicit ThompsonSampling(std::size_t n_arms) : beliefs_(n_arms) {}

  std::string_view key() const noexcept override { return "ts"; }

  Selection select(std::size_t, Rng& rng) override { return {ts_select(beliefs_, rng), std::nullopt, {}}; }

  void update(const Selection& s, double reward) override { beliefs_.at(s.arm).update(reward); }

  const std::vector<BetaBelief>& beliefs() const noexcept { return beliefs_; }

 private:
  std::vector<BetaBelief> beliefs_;
};

class ThompsonSamplingClustered final : public Policy {
 public:
  explicit ThompsonSamplingClustered(DisjointClustering clustering)
      : clustering_(std::move(clustering)), state_(TscState::fresh(clustering_)) {}

  std::string_view key() const noexcept override { return "tsc"; }

  Selection select(std::size_t, Rng& rng) override {
    const auto choice = tsc_select(state_, clustering_, rng);
    return {choice.arm, choice.cluster, {choice.cluster}};
  }

  void update(const Selection& s, double reward) override {
    if (!s.cluster) throw ContractViolation("tsc: selection carries no cluster");
    tsc_update(state_, clustering_, *s.cluster, s.arm, reward);
  }

  const TscState& state() const noexcept { return state_; }
  const DisjointClustering& clustering() const noexcept { return clustering_; }

 private:
  DisjointClustering clustering_;
  TscState state_;
};

class HierarchicalThompsonSampling final : public Policy {
 public:
  explicit HierarchicalThompsonSampling(ClusterTree tree) : tree_(std::move(tree)), state_(HtsState::fresh(tree_)) {}

  std::string_view key() const noexcept override { return "hts"; }

  Selection select(std::size_t, Rng& rng) override {
    auto choice = hts_select(state_, tree_, rng);
    Selection s;
    s.arm = choice.arm;
    s.path = std::move(choice.path);
    if (s.path.size() > 1) s.cluster = s.path[1];
    return s;
  }

  void update(const Selection& s, double reward) override { hts_update(state_, tree_, s.path, reward); }

  const HtsState& state() const noexcept { return state_; }
  const ClusterTree& tree() const noexcept { return tree_; }

 private:
  ClusterTree tree_;
  HtsState state_;
};

class TsMax final : public Policy {
 public:
  explicit TsMax(DisjointClustering clustering, TsMaxStatistic statistic = TsMaxStatistic::posterior_mean)
      : clustering_(std::move(clustering)), beliefs_(clustering_.arm_count()), statistic_(statistic) {}

  std::string_view key() const noexcept override { return "tsmax"; }

  Selection select(std::size_t, Rng& rng) override {
    const auto choice = tsmax_select(beliefs_, clustering_, rng, statistic_);
    return {choice.arm, choice.cluster, {choice.cluster}};
  }

  void update(const Selection& s, double reward) override { beliefs_.at(s.arm).update(reward); }

  const std::vector<BetaBelief>& beliefs() const noexcept { return beliefs_; }

 private:
  DisjointClustering clustering_;
  std::vector<BetaBelief> beliefs_;
  TsMaxStatistic statistic_;
};

}  // namespace clusterbandit
