#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "clusterbandit/core/clustering.hpp"

namespace clusterbandit {

struct TraceStep {
  std::size_t t = 0;  // 1-based round
  ArmId arm = 0;
  double reward = 0.0;
  double instant_regret = 0.0;
  double cumulative_regret = 0.0;
  std::uint32_t path_offset = 0;
  std::uint32_t path_length = 0;
};

// Per-round record of one simulation. Cluster paths (the cluster chosen by a
// two-level policy, or the root-to-leaf node sequence of a tree policy) are
// stored flat to keep long traces compact.
class SimulationTrace {
 public:
  SimulationTrace() = default;
  explicit SimulationTrace(std::uint64_t seed, std::size_t expected_horizon = 0) : seed_(seed) {
    steps_.reserve(expected_horizon);
  }

  void record(ArmId arm, std::span<const std::size_t> cluster_path, double reward, double instant_regret) {
    TraceStep step;
    step.t = steps_.size() + 1;
    step.arm = arm;
    step.reward = reward;
    step.instant_regret = instant_regret;
    step.cumulative_regret = cumulative_ + instant_regret;
    cumulative_ = step.cumulative_regret;
    step.path_offset = static_cast<std::uint32_t>(path_nodes_.size());
    step.path_length = static_cast<std::uint32_t>(cluster_path.size());
    path_nodes_.insert(path_nodes_.end(), cluster_path.begin(), cluster_path.end());
    steps_.push_back(step);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t horizon() const noexcept { return steps_.size(); }
  const std::vector<TraceStep>& steps() const noexcept { return steps_; }
  const TraceStep& step(std::size_t i) const { return steps_.at(i); }

  std::span<const std::size_t> cluster_path(std::size_t i) const {
    const auto& s = steps_.at(i);
    return std::span<const std::size_t>(path_nodes_).subspan(s.path_offset, s.path_length);
  }

  double final_regret() const noexcept { return steps_.empty() ? 0.0 : steps_.back().cumulative_regret; }

  std::vector<double> cumulative_regret_curve() const {
    std::vector<double> curve;
    curve.reserve(steps_.size());
    for (const auto& s : steps_) curve.push_back(s.cumulative_regret);
    return curve;
  }

  // N_{a,T}
  std::vector<std::size_t> arm_pull_counts(std::size_t n_arms) const {
    std::vector<std::size_t> counts(n_arms, 0);
    for (const auto& s : steps_) ++counts.at(s.arm);
    return counts;
  }

  // N_{C,T} for a clustering, derived from the played arms.
  std::vector<std::size_t> cluster_pull_counts(const DisjointClustering& clustering) const {
    std::vector<std::size_t> counts(clustering.cluster_count(), 0);
    for (const auto& s : steps_) ++counts[clustering.cluster_of(s.arm)];
    return counts;
  }

  // Canonical text form; two traces are byte-identical iff these agree.
  std::string serialize() const {
    std::ostringstream out;
    out.precision(17);
    out << "seed," << seed_ << '\n';
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      const auto& s = steps_[i];
      out << s.t << ',' << s.arm << ',';
      auto path = cluster_path(i);
      for (std::size_t j = 0; j < path.size(); ++j) out << (j ? "/" : "") << path[j];
      out << ',' << s.reward << ',' << s.cumulative_regret << '\n';
    }
    return out.str();
  }

 private:
  std::uint64_t seed_ = 0;
  std::vector<TraceStep> steps_;
  std::vector<std::size_t> path_nodes_;
  double cumulative_ = 0.0;
};

}  // namespace clusterbandit
