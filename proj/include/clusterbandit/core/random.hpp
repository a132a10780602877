#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>

namespace clusterbandit {

// Sub-streams derived from one master seed. Instance generation, policy
// sampling, reward draws and contexts each get their own engine so that
// swapping the policy never perturbs the instance or the environment.
enum class Stream : std::uint64_t {
  instance = 0x1,
  policy = 0x2,
  reward = 0x3,
  context = 0x4,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, Stream stream) {
  std::uint64_t state = master_seed ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  return splitmix64(state);
}

// Seeded random stream. Distributions are implemented here rather than taken
// from <random> so that draws are identical across standard libraries.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_stream(std::uint64_t master_seed, Stream stream) {
    return Rng(derive_seed(master_seed, stream));
  }

  engine_type& engine() noexcept { return engine_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection keeps it unbiased.
  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Gamma(shape, 1), Marsaglia-Tsang. Shapes below one use the
  // Gamma(shape + 1) * U^(1/shape) boost.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("Rng::gamma: shape must be positive");
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a, b) as a ratio of two gamma draws.
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  engine_type engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Index of the largest value; ties are broken uniformly at random. The
// stream is only consumed when a tie actually occurs.
inline std::size_t argmax_random_tie(std::span<const double> values, Rng& rng) {
  if (values.empty()) throw std::invalid_argument("argmax_random_tie: empty input");
  std::size_t best = 0;
  std::size_t ties = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) {
      best = i;
      ties = 1;
    } else if (values[i] == values[best]) {
      ++ties;
      if (rng.index(ties) == 0) best = i;
    }
  }
  return best;
}

// Streaming form of argmax_random_tie for callers that compute scores on the
// fly without materializing them.
class RandomTieArgmax {
 public:
  explicit RandomTieArgmax(Rng& rng) : rng_(&rng) {}

  void offer(std::size_t candidate, double score) {
    if (!has_value_ || score > best_score_) {
      best_ = candidate;
      best_score_ = score;
      ties_ = 1;
      has_value_ = true;
    } else if (score == best_score_) {
      ++ties_;
      if (rng_->index(ties_) == 0) best_ = candidate;
    }
  }

  bool empty() const noexcept { return !has_value_; }
  std::size_t best() const {
    if (!has_value_) throw std::logic_error("RandomTieArgmax: no candidates offered");
    return best_;
  }
  double best_score() const noexcept { return best_score_; }

 private:
  Rng* rng_;
  std::size_t best_ = 0;
  double best_score_ = -std::numeric_limits<double>::infinity();
  std::size_t ties_ = 0;
  bool has_value_ = false;
};

}  // namespace clusterbandit
