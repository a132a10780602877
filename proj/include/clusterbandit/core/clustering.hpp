#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace clusterbandit {

using ArmId = std::size_t;
using ClusterId = std::size_t;
using NodeId = std::size_t;

// Partition of arms into clusters. Cluster ids are dense: 0 .. cluster_count()-1,
// each non-empty.
class DisjointClustering {
 public:
  DisjointClustering() = default;

  explicit DisjointClustering(std::vector<ClusterId> assignment) : assignment_(std::move(assignment)) {
    if (assignment_.empty()) throw std::domain_error("DisjointClustering: no arms");
    const ClusterId k = *std::max_element(assignment_.begin(), assignment_.end()) + 1;
    members_.assign(k, {});
    for (ArmId a = 0; a < assignment_.size(); ++a) members_[assignment_[a]].push_back(a);
    for (ClusterId c = 0; c < k; ++c) {
      if (members_[c].empty()) {
        throw std::domain_error("DisjointClustering: cluster " + std::to_string(c) + " is empty");
      }
    }
  }

  static DisjointClustering singletons(std::size_t n_arms) {
    std::vector<ClusterId> a(n_arms);
    for (std::size_t i = 0; i < n_arms; ++i) a[i] = i;
    return DisjointClustering(std::move(a));
  }

  static DisjointClustering single_cluster(std::size_t n_arms) {
    return DisjointClustering(std::vector<ClusterId>(n_arms, 0));
  }

  // Relabels arbitrary (possibly sparse) labels to dense ids in order of
  // first appearance.
  static DisjointClustering from_labels(std::span<const std::size_t> labels) {
    std::map<std::size_t, ClusterId> dense;
    std::vector<ClusterId> a;
    a.reserve(labels.size());
    for (auto label : labels) {
      auto [it, inserted] = dense.emplace(label, dense.size());
      a.push_back(it->second);
    }
    return DisjointClustering(std::move(a));
  }

  std::size_t arm_count() const noexcept { return assignment_.size(); }
  std::size_t cluster_count() const noexcept { return members_.size(); }

  ClusterId cluster_of(ArmId arm) const {
    if (arm >= assignment_.size()) throw std::domain_error("DisjointClustering: unknown arm id");
    return assignment_[arm];
  }

  const std::vector<ArmId>& members(ClusterId cluster) const {
    if (cluster >= members_.size()) throw std::domain_error("DisjointClustering: unknown cluster id");
    return members_[cluster];
  }

  bool contains(ClusterId cluster, ArmId arm) const {
    return arm < assignment_.size() && cluster < members_.size() && assignment_[arm] == cluster;
  }

  const std::vector<ClusterId>& assignment() const noexcept { return assignment_; }

  friend bool operator==(const DisjointClustering& a, const DisjointClustering& b) {
    return a.assignment_ == b.assignment_;
  }

 private:
  std::vector<ClusterId> assignment_;
  std::vector<std::vector<ArmId>> members_;
};

// Rooted tree whose leaves are arms. Node 0 is the root; children are kept in
// increasing node-id order.
class ClusterTree {
 public:
  static constexpr NodeId no_parent = std::numeric_limits<NodeId>::max();

  ClusterTree() : ClusterTree({no_parent}, {ArmId{0}}) {}

  ClusterTree(std::vector<NodeId> parents, std::vector<std::optional<ArmId>> leaf_arms)
      : parent_(std::move(parents)), arm_(std::move(leaf_arms)) {
    const std::size_t n = parent_.size();
    if (n == 0 || arm_.size() != n) throw std::domain_error("ClusterTree: parent/arm tables disagree");
    if (parent_[0] != no_parent) throw std::domain_error("ClusterTree: node 0 must be the root");
    children_.assign(n, {});
    for (NodeId v = 1; v < n; ++v) {
      if (parent_[v] == no_parent || parent_[v] >= n || parent_[v] == v) {
        throw std::domain_error("ClusterTree: node " + std::to_string(v) + " has an invalid parent");
      }
      children_[parent_[v]].push_back(v);
    }
    // Depths by BFS from the root; unreachable nodes indicate a cycle.
    depth_.assign(n, no_parent);
    depth_[0] = 0;
    std::vector<NodeId> queue{0};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      for (NodeId c : children_[v]) {
        depth_[c] = depth_[v] + 1;
        queue.push_back(c);
      }
    }
    if (queue.size() != n) throw std::domain_error("ClusterTree: not every node is reachable from the root");

    std::size_t n_arms = 0;
    for (NodeId v = 0; v < n; ++v) {
      const bool leaf = children_[v].empty();
      if (leaf && !arm_[v]) throw std::domain_error("ClusterTree: leaf " + std::to_string(v) + " has no arm");
      if (!leaf && arm_[v]) throw std::domain_error("ClusterTree: internal node " + std::to_string(v) + " carries an arm");
      if (leaf) n_arms = std::max(n_arms, *arm_[v] + 1);
    }
    leaf_of_.assign(n_arms, no_parent);
    for (NodeId v = 0; v < n; ++v) {
      if (!arm_[v]) continue;
      if (leaf_of_[*arm_[v]] != no_parent) {
        throw std::domain_error("ClusterTree: arm " + std::to_string(*arm_[v]) + " appears on two leaves");
      }
      leaf_of_[*arm_[v]] = v;
    }
    for (ArmId a = 0; a < n_arms; ++a) {
      if (leaf_of_[a] == no_parent) throw std::domain_error("ClusterTree: arm " + std::to_string(a) + " has no leaf");
    }
    max_depth_ = *std::max_element(depth_.begin(), depth_.end());
  }

  // Root with every arm as a direct child.
  static ClusterTree flat(std::size_t n_arms) {
    if (n_arms == 1) return ClusterTree();
    std::vector<NodeId> parents{no_parent};
    std::vector<std::optional<ArmId>> arms{std::nullopt};
    for (ArmId a = 0; a < n_arms; ++a) {
      parents.push_back(0);
      arms.push_back(a);
    }
    return ClusterTree(std::move(parents), std::move(arms));
  }

  // Root -> one node per cluster -> arm leaves.
  static ClusterTree from_clustering(const DisjointClustering& clustering) {
    std::vector<NodeId> parents{no_parent};
    std::vector<std::optional<ArmId>> arms{std::nullopt};
    for (ClusterId c = 0; c < clustering.cluster_count(); ++c) {
      parents.push_back(0);
      arms.push_back(std::nullopt);
    }
    for (ClusterId c = 0; c < clustering.cluster_count(); ++c) {
      for (ArmId a : clustering.members(c)) {
        parents.push_back(1 + c);
        arms.push_back(a);
      }
    }
    return ClusterTree(std::move(parents), std::move(arms));
  }

  NodeId root() const noexcept { return 0; }
  std::size_t node_count() const noexcept { return parent_.size(); }
  std::size_t arm_count() const noexcept { return leaf_of_.size(); }
  // Depth of the deepest leaf (0 when the root is itself a leaf).
  std::size_t depth() const noexcept { return max_depth_; }

  NodeId parent(NodeId v) const { return parent_.at(v); }
  const std::vector<NodeId>& children(NodeId v) const { return children_.at(v); }
  bool is_leaf(NodeId v) const { return children_.at(v).empty(); }
  std::size_t node_depth(NodeId v) const { return depth_.at(v); }

  ArmId arm_of(NodeId leaf) const {
    if (leaf >= arm_.size() || !arm_[leaf]) throw std::domain_error("ClusterTree: node is not a leaf with an arm");
    return *arm_[leaf];
  }

  NodeId leaf_of(ArmId arm) const {
    if (arm >= leaf_of_.size()) throw std::domain_error("ClusterTree: unknown arm id");
    return leaf_of_[arm];
  }

  const std::vector<NodeId>& parents() const noexcept { return parent_; }
  const std::vector<std::optional<ArmId>>& leaf_arms() const noexcept { return arm_; }

  std::vector<ArmId> arms_under(NodeId v) const {
    std::vector<ArmId> out;
    std::vector<NodeId> stack{v};
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      if (arm_.at(u)) out.push_back(*arm_[u]);
      for (auto it = children_[u].rbegin(); it != children_[u].rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  // Root-to-leaf node sequence ending at the arm's leaf.
  std::vector<NodeId> path_to(ArmId arm) const {
    std::vector<NodeId> path;
    for (NodeId v = leaf_of(arm); v != no_parent; v = parent_[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
  }

  bool is_root_to_leaf_path(std::span<const NodeId> path) const {
    if (path.empty() || path.front() != root()) return false;
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (path[i] >= node_count() || parent_[path[i]] != path[i - 1]) return false;
    }
    return is_leaf(path.back());
  }

  // Keeps the top `levels` levels of internal structure; every internal node
  // at depth `levels` adopts all leaves below it as direct children.
  // levels = 0 yields the flat tree, levels >= depth()-1 the tree unchanged.
  ClusterTree truncated(std::size_t levels) const {
    std::vector<NodeId> parents{no_parent};
    std::vector<std::optional<ArmId>> arms{arm_[0]};
    struct Item {
      NodeId old_node;
      NodeId new_node;
    };
    std::vector<Item> queue{{0, 0}};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Item item = queue[head];
      if (is_leaf(item.old_node)) continue;
      if (depth_[item.old_node] >= levels) {
        for (ArmId a : arms_under(item.old_node)) {
          parents.push_back(item.new_node);
          arms.push_back(a);
        }
        continue;
      }
      for (NodeId c : children_[item.old_node]) {
        const NodeId fresh = parents.size();
        parents.push_back(item.new_node);
        arms.push_back(arm_[c]);
        queue.push_back({c, fresh});
      }
    }
    return ClusterTree(std::move(parents), std::move(arms));
  }

  // Disjoint clustering given by the ancestors at the requested depth. Leaves
  // shallower than that depth form singleton clusters. Clusters are numbered
  // by increasing node id of the defining node.
  DisjointClustering clustering_at_level(std::size_t level) const {
    std::vector<NodeId> anchor(arm_count());
    for (ArmId a = 0; a < arm_count(); ++a) {
      NodeId v = leaf_of_[a];
      while (depth_[v] > level) v = parent_[v];
      anchor[a] = v;
    }
    std::vector<NodeId> distinct = anchor;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<ClusterId> assignment(arm_count());
    for (ArmId a = 0; a < arm_count(); ++a) {
      assignment[a] = static_cast<ClusterId>(
          std::lower_bound(distinct.begin(), distinct.end(), anchor[a]) - distinct.begin());
    }
    return DisjointClustering(std::move(assignment));
  }

  friend bool operator==(const ClusterTree& a, const ClusterTree& b) {
    return a.parent_ == b.parent_ && a.arm_ == b.arm_;
  }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::optional<ArmId>> arm_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::size_t> depth_;
  std::vector<NodeId> leaf_of_;
  std::size_t max_depth_ = 0;
};

}  // namespace clusterbandit
