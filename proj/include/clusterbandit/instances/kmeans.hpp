#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "clusterbandit/core/random.hpp"

namespace clusterbandit {

// Row i of a FeatureMatrix is the feature vector of point i.
using FeatureMatrix = Eigen::MatrixXd;

struct KMeansResult {
  std::vector<std::size_t> labels;  // dense, 0 .. k-1, every label used
  FeatureMatrix centroids;
  double distortion = 0.0;  // sum of squared distances to assigned centroids
  std::size_t iterations = 0;
  std::vector<double> distortion_history;  // after each assignment step
};

struct KMeansOptions {
  std::size_t max_iterations = 100;
};

namespace detail {

inline double squared_distance(const FeatureMatrix& a, Eigen::Index i, const FeatureMatrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

// k-means++ seeding: first centre uniform, then proportional to the squared
// distance from the nearest chosen centre.
inline FeatureMatrix kmeanspp_seeds(const FeatureMatrix& points, std::size_t k, Rng& rng) {
  const Eigen::Index n = points.rows();
  FeatureMatrix centres(static_cast<Eigen::Index>(k), points.cols());
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  Eigen::Index pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (double v : d2) total += v;
      if (total > 0.0) {
        double target = rng.uniform() * total;
        pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
          target -= d2[static_cast<std::size_t>(i)];
          if (target < 0.0 && d2[static_cast<std::size_t>(i)] > 0.0) {
            pick = i;
            break;
          }
        }
        while (d2[static_cast<std::size_t>(pick)] == 0.0 && pick > 0) --pick;
      } else {
        // Every remaining point coincides with a centre; take an unused one.
        std::vector<Eigen::Index> unused;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!chosen[static_cast<std::size_t>(i)]) unused.push_back(i);
        }
        pick = unused[rng.index(unused.size())];
      }
    }
    chosen[static_cast<std::size_t>(pick)] = true;
    centres.row(static_cast<Eigen::Index>(c)) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] =
          std::min(d2[static_cast<std::size_t>(i)], squared_distance(points, i, centres, static_cast<Eigen::Index>(c)));
    }
  }
  return centres;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding. Stops when assignments are
// stable or after `max_iterations` assignment steps. A cluster that empties
// is re-seeded with the point farthest from its current centre.
inline KMeansResult kmeans(const FeatureMatrix& points, std::size_t k, Rng& rng, KMeansOptions options = {}) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k == 0) throw std::domain_error("kmeans: k must be positive");
  if (k > n) throw std::domain_error("kmeans: k exceeds the number of points");

  KMeansResult result;
  result.centroids = detail::kmeanspp_seeds(points, k, rng);
  result.labels.assign(n, std::numeric_limits<std::size_t>::max());
  std::vector<double> dist(n, 0.0);

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    bool changed = false;
    double distortion = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = detail::squared_distance(points, static_cast<Eigen::Index>(i), result.centroids,
                                                  static_cast<Eigen::Index>(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (result.labels[i] != best) changed = true;
      result.labels[i] = best;
      dist[i] = best_d;
      distortion += best_d;
    }

    // Empty clusters steal the worst-served point.
    std::vector<std::size_t> counts(k, 0);
    for (auto l : result.labels) ++counts[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (counts[result.labels[i]] > 1 && (counts[result.labels[far]] <= 1 || dist[i] > dist[far])) far = i;
      }
      distortion -= dist[far];
      --counts[result.labels[far]];
      result.labels[far] = c;
      ++counts[c];
      dist[far] = 0.0;
      changed = true;
    }

    result.distortion_history.push_back(distortion);
    result.distortion = distortion;
    result.iterations = iter + 1;

    // Update step.
    result.centroids.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      result.centroids.row(static_cast<Eigen::Index>(result.labels[i])) += points.row(static_cast<Eigen::Index>(i));
    }
    for (std::size_t c = 0; c < k; ++c) result.centroids.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);

    if (!changed) break;
  }

  // Distortion against the final centroids.
  result.distortion = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.distortion += detail::squared_distance(points, static_cast<Eigen::Index>(i), result.centroids,
                                                  static_cast<Eigen::Index>(result.labels[i]));
  }
  return result;
}

}  // namespace clusterbandit
