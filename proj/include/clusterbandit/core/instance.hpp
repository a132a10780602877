#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/core/random.hpp"

namespace clusterbandit {

struct BernoulliArm {
  ArmId id = 0;
  double mean = 0.0;
};

// Bernoulli arms with an optional disjoint clustering and/or cluster tree.
// Both structures may be present at once, e.g. a k-means clustering for the
// two-level policies alongside an agglomerative tree for the tree policies.
class BanditInstance {
 public:
  BanditInstance() = default;

  explicit BanditInstance(std::vector<double> means, std::optional<DisjointClustering> clustering = std::nullopt,
                          std::optional<ClusterTree> tree = std::nullopt)
      : means_(std::move(means)), clustering_(std::move(clustering)), tree_(std::move(tree)) {
    if (means_.empty()) throw std::domain_error("BanditInstance: at least one arm is required");
    for (std::size_t a = 0; a < means_.size(); ++a) {
      if (!(means_[a] >= 0.0 && means_[a] <= 1.0)) {
        throw std::domain_error("BanditInstance: mean of arm " + std::to_string(a) + " outside [0, 1]");
      }
    }
    if (clustering_ && clustering_->arm_count() != means_.size()) {
      throw std::domain_error("BanditInstance: clustering covers a different number of arms");
    }
    if (tree_ && tree_->arm_count() != means_.size()) {
      throw std::domain_error("BanditInstance: tree covers a different number of arms");
    }
    mu_star_ = *std::max_element(means_.begin(), means_.end());
    for (ArmId a = 0; a < means_.size(); ++a) {
      if (means_[a] == mu_star_) optimal_.push_back(a);
    }
  }

  std::size_t arm_count() const noexcept { return means_.size(); }
  const std::vector<double>& means() const noexcept { return means_; }

  double mean(ArmId arm) const {
    check_arm(arm);
    return means_[arm];
  }

  BernoulliArm arm(ArmId id) const { return {id, mean(id)}; }

  const std::optional<DisjointClustering>& clustering() const noexcept { return clustering_; }
  const std::optional<ClusterTree>& tree() const noexcept { return tree_; }

  double optimal_mean() const noexcept { return mu_star_; }
  // Lowest-indexed arm attaining the maximal mean.
  ArmId optimal_arm() const noexcept { return optimal_.front(); }
  const std::vector<ArmId>& optimal_arms() const noexcept { return optimal_; }
  bool has_unique_optimum() const noexcept { return optimal_.size() == 1; }

  // Gap to the best mean; computed against the maximum even under ties.
  double regret_of(ArmId arm) const { return mu_star_ - mean(arm); }

  double draw_reward(ArmId arm, Rng& rng) const {
    const double p = mean(arm);
    return rng.uniform() < p ? 1.0 : 0.0;
  }

  BanditInstance with_clustering(DisjointClustering clustering) const {
    return BanditInstance(means_, std::move(clustering), tree_);
  }
  BanditInstance with_tree(ClusterTree tree) const { return BanditInstance(means_, clustering_, std::move(tree)); }

  friend bool operator==(const BanditInstance& a, const BanditInstance& b) {
    return a.means_ == b.means_ && a.clustering_ == b.clustering_ && a.tree_ == b.tree_;
  }

 private:
  void check_arm(ArmId arm) const {
    if (arm >= means_.size()) throw std::domain_error("BanditInstance: unknown arm id " + std::to_string(arm));
  }

  std::vector<double> means_;
  std::optional<DisjointClustering> clustering_;
  std::optional<ClusterTree> tree_;
  double mu_star_ = 0.0;
  std::vector<ArmId> optimal_;
};

inline double regret_of(const BanditInstance& instance, ArmId arm) { return instance.regret_of(arm); }

inline double draw_reward(const BanditInstance& instance, ArmId arm, Rng& rng) {
  return instance.draw_reward(arm, rng);
}

}  // namespace clusterbandit
