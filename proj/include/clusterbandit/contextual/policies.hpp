#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clusterbandit/contextual/linear_belief.hpp"
#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/core/random.hpp"
#include "clusterbandit/policies/policy.hpp"

namespace clusterbandit {

class ContextualPolicy {
 public:
  virtual ~ContextualPolicy() = default;

  virtual std::string_view key() const noexcept = 0;
  virtual Selection select(const ContextVector& x, Rng& rng) = 0;
  virtual void update(const Selection& selection, const ContextVector& x, double reward) = 0;
};

inline std::vector<LinearBelief> fresh_linear_beliefs(std::size_t count, std::size_t dim, double v) {
  return std::vector<LinearBelief>(count, LinearBelief(dim, v));
}

template <typename Range>
std::size_t lin_sample_argmax(std::span<const LinearBelief> beliefs, const Range& candidates, const ContextVector& x,
                              Rng& rng) {
  RandomTieArgmax best(rng);
  for (std::size_t i : candidates) best.offer(i, beliefs[i].sample(x, rng));
  return best.best();
}

template <typename Range>
std::size_t lin_ucb_argmax(std::span<const LinearBelief> beliefs, const Range& candidates, const ContextVector& x,
                           double alpha, Rng& rng) {
  RandomTieArgmax best(rng);
  for (std::size_t i : candidates) best.offer(i, beliefs[i].ucb(x, alpha));
  return best.best();
}

namespace detail {
inline std::vector<std::size_t> iota_ids(std::size_t n) {
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  return ids;
}
}  // namespace detail

inline ArmId lints_select(std::span<const LinearBelief> arm_beliefs, const ContextVector& x, Rng& rng) {
  return lin_sample_argmax(arm_beliefs, detail::iota_ids(arm_beliefs.size()), x, rng);
}

inline ClusterChoice lintsc_select(std::span<const LinearBelief> cluster_beliefs,
                                   std::span<const LinearBelief> arm_beliefs, const DisjointClustering& clustering,
                                   const ContextVector& x, Rng& rng) {
  const ClusterId cluster = lin_sample_argmax(cluster_beliefs, detail::iota_ids(cluster_beliefs.size()), x, rng);
  const ArmId arm = lin_sample_argmax(arm_beliefs, clustering.members(cluster), x, rng);
  return {cluster, arm};
}

// The chosen cluster's and arm's beliefs both absorb (x, r); nothing else moves.
inline void lintsc_update(std::span<LinearBelief> cluster_beliefs, std::span<LinearBelief> arm_beliefs,
                          const DisjointClustering& clustering, ClusterId cluster, ArmId arm, const ContextVector& x,
                          double reward) {
  if (!clustering.contains(cluster, arm)) {
    throw ContractViolation("lintsc_update: arm " + std::to_string(arm) + " is not in cluster " +
                            std::to_string(cluster));
  }
  cluster_beliefs[cluster].update(x, reward);
  arm_beliefs[arm].update(x, reward);
}

inline ArmId linucb_select(std::span<const LinearBelief> arm_beliefs, const ContextVector& x, double alpha, Rng& rng) {
  return lin_ucb_argmax(arm_beliefs, detail::iota_ids(arm_beliefs.size()), x, alpha, rng);
}

inline ClusterChoice linucbc_select(std::span<const LinearBelief> cluster_beliefs,
                                    std::span<const LinearBelief> arm_beliefs, const DisjointClustering& clustering,
                                    const ContextVector& x, double alpha, Rng& rng) {
  const ClusterId cluster = lin_ucb_argmax(cluster_beliefs, detail::iota_ids(cluster_beliefs.size()), x, alpha, rng);
  const ArmId arm = lin_ucb_argmax(arm_beliefs, clustering.members(cluster), x, alpha, rng);
  return {cluster, arm};
}

class LinTs final : public ContextualPolicy {
 public:
  LinTs(std::size_t n_arms, std::size_t dim, double v = 1.0) : beliefs_(fresh_linear_beliefs(n_arms, dim, v)) {}

  std::string_view key() const noexcept override { return "lints"; }

  Selection select(const ContextVector& x, Rng& rng) override { return {lints_select(beliefs_, x, rng), std::nullopt, {}}; }

  void update(const Selection& s, const ContextVector& x, double reward) override { beliefs_.at(s.arm).update(x, reward); }

  const std::vector<LinearBelief>& beliefs() const noexcept { return beliefs_; }

 private:
  std::vector<LinearBelief> beliefs_;
};

class LinTsClustered final : public ContextualPolicy {
 public:
  LinTsClustered(DisjointClustering clustering, std::size_t dim, double v = 1.0)
      : clustering_(std::move(clustering)),
        cluster_beliefs_(fresh_linear_beliefs(clustering_.cluster_count(), dim, v)),
        arm_beliefs_(fresh_linear_beliefs(clustering_.arm_count(), dim, v)) {}

  std::string_view key() const noexcept override { return "lintsc"; }

  Selection select(const ContextVector& x, Rng& rng) override {
    const auto c = lintsc_select(cluster_beliefs_, arm_beliefs_, clustering_, x, rng);
    return {c.arm, c.cluster, {c.cluster}};
  }

  void update(const Selection& s, const ContextVector& x, double reward) override {
    if (!s.cluster) throw ContractViolation("lintsc: selection carries no cluster");
    lintsc_update(cluster_beliefs_, arm_beliefs_, clustering_, *s.cluster, s.arm, x, reward);
  }

  const std::vector<LinearBelief>& cluster_beliefs() const noexcept { return cluster_beliefs_; }
  const std::vector<LinearBelief>& arm_beliefs() const noexcept { return arm_beliefs_; }

 private:
  DisjointClustering clustering_;
  std::vector<LinearBelief> cluster_beliefs_;
  std::vector<LinearBelief> arm_beliefs_;
};

class LinUcb final : public ContextualPolicy {
 public:
  LinUcb(std::size_t n_arms, std::size_t dim, double alpha = 2.0)
      : beliefs_(fresh_linear_beliefs(n_arms, dim, 1.0)), alpha_(alpha) {
    if (!(alpha >= 0.0)) throw std::domain_error("LinUcb: alpha must be non-negative");
  }

  std::string_view key() const noexcept override { return "linucb"; }

  Selection select(const ContextVector& x, Rng& rng) override {
    return {linucb_select(beliefs_, x, alpha_, rng), std::nullopt, {}};
  }

  void update(const Selection& s, const ContextVector& x, double reward) override { beliefs_.at(s.arm).update(x, reward); }

 private:
  std::vector<LinearBelief> beliefs_;
  double alpha_;
};

class LinUcbClustered final : public ContextualPolicy {
 public:
  LinUcbClustered(DisjointClustering clustering, std::size_t dim, double alpha = 2.0)
      : clustering_(std::move(clustering)),
        cluster_beliefs_(fresh_linear_beliefs(clustering_.cluster_count(), dim, 1.0)),
        arm_beliefs_(fresh_linear_beliefs(clustering_.arm_count(), dim, 1.0)),
        alpha_(alpha) {
    if (!(alpha >= 0.0)) throw std::domain_error("LinUcbClustered: alpha must be non-negative");
  }

  std::string_view key() const noexcept override { return "linucbc"; }

  Selection select(const ContextVector& x, Rng& rng) override {
    const auto c = linucbc_select(cluster_beliefs_, arm_beliefs_, clustering_, x, alpha_, rng);
    return {c.arm, c.cluster, {c.cluster}};
  }

  void update(const Selection& s, const ContextVector& x, double reward) override {
    if (!s.cluster || !clustering_.contains(*s.cluster, s.arm)) {
      throw ContractViolation("linucbc: arm is not in the selected cluster");
    }
    cluster_beliefs_[*s.cluster].update(x, reward);
    arm_beliefs_[s.arm].update(x, reward);
  }

 private:
  DisjointClustering clustering_;
  std::vector<LinearBelief> cluster_beliefs_;
  std::vector<LinearBelief> arm_beliefs_;
  double alpha_;
};

}  // namespace clusterbandit
