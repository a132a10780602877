#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "clusterbandit/contextual/linear_belief.hpp"
#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/core/random.hpp"

namespace clusterbandit {

enum class ContextDistribution {
  uniform_unit_cube,  // x ~ U([0,1]^d)
  standard_normal,    // x ~ N(0, I_d)
};

inline ContextVector gen_context(std::size_t dim, Rng& rng,
                                 ContextDistribution dist = ContextDistribution::uniform_unit_cube) {
  if (dim == 0) throw std::domain_error("gen_context: dimension must be at least 1");
  ContextVector x(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = dist == ContextDistribution::uniform_unit_cube ? rng.uniform() : rng.normal();
  }
  return x;
}

// Linear contextual bandit with clustered arms: arm j has coefficients
// theta_j (row j of `thetas`) and expected reward theta_j^T x. A round's
// reward is uniform on the signed interval between 0 and 2 theta_j^T x.
class ContextualInstance {
 public:
  ContextualInstance() = default;

  ContextualInstance(Eigen::MatrixXd thetas, DisjointClustering clustering,
                     ContextDistribution context = ContextDistribution::uniform_unit_cube)
      : thetas_(std::move(thetas)), clustering_(std::move(clustering)), context_(context) {
    if (thetas_.rows() == 0 || thetas_.cols() == 0) throw std::domain_error("ContextualInstance: empty coefficients");
    if (static_cast<std::size_t>(thetas_.rows()) != clustering_.arm_count()) {
      throw std::domain_error("ContextualInstance: clustering covers a different number of arms");
    }
    if (!thetas_.allFinite()) throw std::domain_error("ContextualInstance: non-finite coefficients");
  }

  std::size_t arm_count() const noexcept { return static_cast<std::size_t>(thetas_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(thetas_.cols()); }
  const Eigen::MatrixXd& thetas() const noexcept { return thetas_; }
  const DisjointClustering& clustering() const noexcept { return clustering_; }
  ContextDistribution context_distribution() const noexcept { return context_; }

  ContextVector draw_context(Rng& rng) const { return gen_context(dim(), rng, context_); }

  double expected_reward(ArmId arm, const ContextVector& x) const {
    check(arm, x);
    return thetas_.row(static_cast<Eigen::Index>(arm)).dot(x);
  }

  // One uniform draw per call regardless of the arm, so that paired runs
  // share their reward noise.
  double draw_reward(ArmId arm, const ContextVector& x, Rng& rng) const {
    return 2.0 * expected_reward(arm, x) * rng.uniform();
  }

  double best_expected_reward(const ContextVector& x) const {
    check(0, x);
    return (thetas_ * x).maxCoeff();
  }

  double regret_of(ArmId arm, const ContextVector& x) const { return best_expected_reward(x) - expected_reward(arm, x); }

 private:
  void check(ArmId arm, const ContextVector& x) const {
    if (arm >= arm_count()) throw std::domain_error("ContextualInstance: unknown arm id " + std::to_string(arm));
    if (static_cast<std::size_t>(x.size()) != dim()) throw std::domain_error("ContextualInstance: context dimension mismatch");
  }

  Eigen::MatrixXd thetas_;
  DisjointClustering clustering_;
  ContextDistribution context_ = ContextDistribution::uniform_unit_cube;
};

}  // namespace clusterbandit
