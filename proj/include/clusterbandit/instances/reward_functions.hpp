#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clusterbandit {

// Smooth mean-reward landscapes over arm features.
enum class RewardFunction {
  sin_product,      // 1/2 (sin 13x sin 27x + 1), x in [0,1]
  gaussian_mix_1d,  // 1/2 (exp(-(0.1-x)^2/0.05) + exp(-(0.9-x)^2/0.8)), x in [0,1]
  bump_2d,          // 1/2 e^{-100(0.2-x1)^2} + 1/5 e^{-100(0.7-x1)^2} + 1/5 e^{-100(0.7-x2)^2}
};

inline std::size_t feature_dim(RewardFunction fn) { return fn == RewardFunction::bump_2d ? 2 : 1; }

inline double evaluate(RewardFunction fn, std::span<const double> x) {
  if (x.size() != feature_dim(fn)) throw std::domain_error("reward function: wrong feature dimension");
  switch (fn) {
    case RewardFunction::sin_product:
      return 0.5 * (std::sin(13.0 * x[0]) * std::sin(27.0 * x[0]) + 1.0);
    case RewardFunction::gaussian_mix_1d: {
      const double a = 0.1 - x[0];
      const double b = 0.9 - x[0];
      return 0.5 * (std::exp(-a * a / 0.05) + std::exp(-b * b / 0.8));
    }
    case RewardFunction::bump_2d: {
      const double a = 0.2 - x[0];
      const double b = 0.7 - x[0];
      const double c = 0.7 - x[1];
      return 0.5 * std::exp(-100.0 * a * a) + 0.2 * std::exp(-100.0 * b * b) + 0.2 * std::exp(-100.0 * c * c);
    }
  }
  throw std::logic_error("reward function: unhandled case");
}

inline double evaluate(RewardFunction fn, double x) { return evaluate(fn, std::span<const double>(&x, 1)); }

inline std::string_view to_string(RewardFunction fn) {
  switch (fn) {
    case RewardFunction::sin_product: return "sin-product";
    case RewardFunction::gaussian_mix_1d: return "gaussian-mix-1d";
    case RewardFunction::bump_2d: return "bump-2d";
  }
  return "unknown";
}

inline RewardFunction parse_reward_function(std::string_view name) {
  if (name == "sin-product") return RewardFunction::sin_product;
  if (name == "gaussian-mix-1d") return RewardFunction::gaussian_mix_1d;
  if (name == "bump-2d") return RewardFunction::bump_2d;
  throw std::invalid_argument("unknown reward function '" + std::string(name) +
                              "' (expected sin-product, gaussian-mix-1d or bump-2d)");
}

}  // namespace clusterbandit
