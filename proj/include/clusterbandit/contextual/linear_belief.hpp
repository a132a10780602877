#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "clusterbandit/core/random.hpp"

namespace clusterbandit {

using ContextVector = Eigen::VectorXd;

// Gaussian posterior over a d-dimensional coefficient vector: precision B,
// response f, mean mu = B^{-1} f and sampling scale v. B starts at the
// identity, f and mu at zero.
//
// B^{-1} is kept up to date with Sherman-Morrison rank-one updates and
// recomputed from B by a Cholesky solve every `resync_interval` updates.
class LinearBelief {
 public:
  static constexpr std::size_t resync_interval = 1000;

  explicit LinearBelief(std::size_t dim, double v = 1.0)
      : b_(Eigen::MatrixXd::Identity(as_index(dim), as_index(dim))),
        b_inv_(Eigen::MatrixXd::Identity(as_index(dim), as_index(dim))),
        f_(Eigen::VectorXd::Zero(as_index(dim))),
        mu_(Eigen::VectorXd::Zero(as_index(dim))),
        v_(v) {
    if (!(v > 0.0)) throw std::domain_error("LinearBelief: v must be positive");
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(f_.size()); }
  const Eigen::MatrixXd& precision() const noexcept { return b_; }
  const Eigen::MatrixXd& covariance() const noexcept { return b_inv_; }
  const Eigen::VectorXd& response() const noexcept { return f_; }
  const Eigen::VectorXd& mean() const noexcept { return mu_; }
  double scale() const noexcept { return v_; }
  std::size_t update_count() const noexcept { return updates_; }

  double predict(const ContextVector& x) const {
    check(x);
    return mu_.dot(x);
  }

  // x^T B^{-1} x
  double uncertainty(const ContextVector& x) const {
    check(x);
    const Eigen::Index d = x.size();
    double q = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      double col = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) col += b_inv_(i, j) * x[i];
      q += xj * col;
    }
    return std::max(0.0, q);
  }

  // Draw from N(mu^T x, v x^T B^{-1} x).
  double sample(const ContextVector& x, Rng& rng) const {
    const double var = v_ * uncertainty(x);
    const double m = mu_.dot(x);
    if (var == 0.0) return m;
    return m + std::sqrt(var) * rng.normal();
  }

  double ucb(const ContextVector& x, double alpha) const {
    return predict(x) + alpha * std::sqrt(uncertainty(x));
  }

  void update(const ContextVector& x, double reward) {
    check(x);
    if (!std::isfinite(reward) || !x.allFinite()) {
      throw std::domain_error("LinearBelief::update: non-finite reward or context");
    }
    b_.noalias() += x * x.transpose();
    f_.noalias() += reward * x;
    ++updates_;
    if (updates_ % resync_interval == 0) {
      resync();
    } else {
      const Eigen::VectorXd bx = b_inv_ * x;
      const double denom = 1.0 + x.dot(bx);
      b_inv_.noalias() -= (bx * bx.transpose()) / denom;
      mu_.noalias() = b_inv_ * f_;
    }
  }

  // Recomputes B^{-1} and mu from B and f directly.
  void resync() {
    Eigen::LLT<Eigen::MatrixXd> llt(b_);
    b_inv_ = llt.solve(Eigen::MatrixXd::Identity(b_.rows(), b_.cols()));
    mu_ = llt.solve(f_);
  }

 private:
  static Eigen::Index as_index(std::size_t dim) {
    if (dim == 0) throw std::domain_error("LinearBelief: dimension must be at least 1");
    return static_cast<Eigen::Index>(dim);
  }

  void check(const ContextVector& x) const {
    if (x.size() != f_.size()) throw std::domain_error("LinearBelief: context dimension mismatch");
  }

  Eigen::MatrixXd b_;
  Eigen::MatrixXd b_inv_;
  Eigen::VectorXd f_;
  Eigen::VectorXd mu_;
  double v_;
  std::size_t updates_ = 0;
};

inline double lin_sample(const LinearBelief& belief, const ContextVector& x, Rng& rng) {
  return belief.sample(x, rng);
}

inline LinearBelief lin_update(LinearBelief belief, const ContextVector& x, double reward) {
  belief.update(x, reward);
  return belief;
}

}  // namespace clusterbandit
