#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "clusterbandit/core/random.hpp"

namespace clusterbandit {

inline void require_unit_reward(double reward, const char* where) {
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::domain_error(std::string(where) + ": reward must lie in [0, 1], got " +
                            std::to_string(reward));
  }
}

// Beta(s, f) posterior over a Bernoulli mean. Pseudo-counts are real valued
// so that fractional rewards in [0, 1] update them linearly; the prior is
// Beta(1, 1).
class BetaBelief {
 public:
  BetaBelief() = default;

  BetaBelief(double successes, double failures) : s_(successes), f_(failures) {
    if (!(successes >= 1.0) || !(failures >= 1.0) || !std::isfinite(successes) ||
        !std::isfinite(failures)) {
      throw std::domain_error("BetaBelief: pseudo-counts must be finite and >= 1");
    }
  }

  double successes() const noexcept { return s_; }
  double failures() const noexcept { return f_; }
  double mean() const noexcept { return s_ / (s_ + f_); }
  // Number of observations folded in beyond the prior.
  double observations() const noexcept { return s_ + f_ - 2.0; }

  void update(double reward) {
    require_unit_reward(reward, "BetaBelief::update");
    s_ += reward;
    f_ += 1.0 - reward;
  }

  [[nodiscard]] BetaBelief updated(double reward) const {
    BetaBelief next = *this;
    next.update(reward);
    return next;
  }

  double sample(Rng& rng) const { return rng.beta(s_, f_); }

  friend bool operator==(const BetaBelief&, const BetaBelief&) = default;

 private:
  double s_ = 1.0;
  double f_ = 1.0;
};

inline double sample_beta(const BetaBelief& belief, Rng& rng) { return belief.sample(rng); }

inline BetaBelief beta_update(const BetaBelief& belief, double reward) {
  return belief.updated(reward);
}

}  // namespace clusterbandit
