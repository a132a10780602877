#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/instances/kmeans.hpp"

namespace clusterbandit {

enum class Linkage { single, complete, average };

inline std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "unknown";
}

inline Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  throw std::invalid_argument("unknown linkage '" + std::string(name) + "' (expected single, complete or average)");
}

// Cluster ids 0..n-1 are the points; merge i creates cluster n+i.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0.0;
};

struct Dendrogram {
  std::vector<Merge> merges;
  ClusterTree tree;
};

namespace detail {

// Lance-Williams update for the distance from k to the union of i and j.
inline double linkage_update(Linkage l, double dik, double djk, std::size_t ni, std::size_t nj) {
  switch (l) {
    case Linkage::single: return std::min(dik, djk);
    case Linkage::complete: return std::max(dik, djk);
    case Linkage::average:
      return (static_cast<double>(ni) * dik + static_cast<double>(nj) * djk) / static_cast<double>(ni + nj);
  }
  return dik;
}

}  // namespace detail

// Bottom-up agglomeration with Euclidean point distances. Nearest-neighbour
// caching keeps the typical cost near O(n^2). Ties go to the lower index.
inline Dendrogram agglomerate(const FeatureMatrix& features, Linkage linkage = Linkage::single) {
  const auto n = static_cast<std::size_t>(features.rows());
  if (n < 2) throw std::domain_error("agglomerative clustering needs at least two points");
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (features.row(static_cast<Eigen::Index>(i)) - features.row(static_cast<Eigen::Index>(j))).norm();
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  // slot s holds cluster id[s]; inactive slots are skipped.
  std::vector<bool> active(n, true);
  std::vector<std::size_t> id(n), size(n, 1);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  std::vector<std::size_t> nn(n, 0);
  std::vector<double> nn_dist(n, inf);

  auto refresh = [&](std::size_t i) {
    nn_dist[i] = inf;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (dist[i * n + j] < nn_dist[i]) {
        nn_dist[i] = dist[i * n + j];
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  Dendrogram out;
  out.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && (a == n || nn_dist[i] < nn_dist[a])) a = i;
    }
    std::size_t b = nn[a];
    if (b < a) std::swap(a, b);
    const double d_ab = dist[a * n + b];
    std::size_t lo = id[a], hi = id[b];
    if (lo > hi) std::swap(lo, hi);
    out.merges.push_back({lo, hi, d_ab});

    // Slot a becomes the merged cluster; slot b is retired.
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double d = detail::linkage_update(linkage, dist[a * n + k], dist[b * n + k], size[a], size[b]);
      dist[a * n + k] = d;
      dist[k * n + a] = d;
    }
    active[b] = false;
    size[a] += size[b];
    id[a] = n + step;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k]) continue;
      if (k == a || nn[k] == a || nn[k] == b) {
        refresh(k);
      } else if (dist[k * n + a] < nn_dist[k]) {
        nn_dist[k] = dist[k * n + a];
        nn[k] = a;
      }
    }
  }

  // Relabel breadth-first from the last merge so the root is node 0.
  const std::size_t total = 2 * n - 1;
  std::vector<NodeId> parents(total, ClusterTree::no_parent);
  std::vector<std::optional<ArmId>> leaf_arms(total);
  std::vector<std::size_t> queue{total - 1};  // cluster ids in node order
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t cid = queue[head];
    if (cid < n) {
      leaf_arms[head] = cid;
      continue;
    }
    const Merge& m = out.merges[cid - n];
    for (std::size_t child : {m.left, m.right}) {
      parents[queue.size()] = head;
      queue.push_back(child);
    }
  }
  out.tree = ClusterTree(std::move(parents), std::move(leaf_arms));
  return out;
}

inline ClusterTree gen_agglomerative_tree(const FeatureMatrix& features, Linkage linkage = Linkage::single) {
  return agglomerate(features, linkage).tree;
}

}  // namespace clusterbandit
