#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "clusterbandit/core/errors.hpp"
#include "clusterbandit/instances/generators.hpp"

namespace clusterbandit {

struct SortedTreeSpec {
  std::size_t n_arms = 256;
  friend bool operator==(const SortedTreeSpec&, const SortedTreeSpec&) = default;
};

struct KMeansSpec {
  std::size_t n_arms = 100;
  std::size_t n_clusters = 10;
  RewardFunction reward_fn = RewardFunction::sin_product;
  friend bool operator==(const KMeansSpec&, const KMeansSpec&) = default;
};

struct KMeansTreeSpec {
  std::size_t n_arms = 5000;
  std::size_t branching = 15;
  std::size_t depth = 3;
  RewardFunction reward_fn = RewardFunction::sin_product;
  friend bool operator==(const KMeansTreeSpec&, const KMeansTreeSpec&) = default;
};

struct KMeansAgglomerativeSpec {
  std::size_t n_arms = 500;
  std::size_t n_clusters = 20;
  RewardFunction reward_fn = RewardFunction::bump_2d;
  Linkage linkage = Linkage::single;
  friend bool operator==(const KMeansAgglomerativeSpec&, const KMeansAgglomerativeSpec&) = default;
};

struct UniformSpec {
  std::size_t n_arms = 50;
  std::size_t n_clusters = 10;
  friend bool operator==(const UniformSpec&, const UniformSpec&) = default;
};

// A fixed instance, replayed as is for every seed.
struct ExplicitBandit {
  BanditInstance instance;
  friend bool operator==(const ExplicitBandit&, const ExplicitBandit&) = default;
};

struct ExplicitContextual {
  ContextualInstance instance;
  friend bool operator==(const ExplicitContextual& a, const ExplicitContextual& b) {
    return a.instance.thetas() == b.instance.thetas() && a.instance.clustering() == b.instance.clustering() &&
           a.instance.context_distribution() == b.instance.context_distribution();
  }
};

using InstanceSpec = std::variant<StrongDominanceSpec, SortedTreeSpec, KMeansSpec, KMeansTreeSpec,
                                  KMeansAgglomerativeSpec, UniformSpec, ContextualSpec, ExplicitBandit, ExplicitContextual>;

using AnyInstance = std::variant<BanditInstance, ContextualInstance>;

inline bool is_contextual(const InstanceSpec& spec) {
  return std::holds_alternative<ContextualSpec>(spec) || std::holds_alternative<ExplicitContextual>(spec);
}

inline AnyInstance generate(const InstanceSpec& spec, Rng& rng) {
  return std::visit(
      [&](const auto& s) -> AnyInstance {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, StrongDominanceSpec>) {
          return gen_strong_dominance(s, rng);
        } else if constexpr (std::is_same_v<S, SortedTreeSpec>) {
          return gen_sorted_binary_tree(s.n_arms, rng);
        } else if constexpr (std::is_same_v<S, KMeansSpec>) {
          return gen_kmeans_instance(s.n_arms, s.n_clusters, s.reward_fn, rng);
        } else if constexpr (std::is_same_v<S, KMeansTreeSpec>) {
          return gen_kmeans_tree(s.n_arms, s.branching, s.depth, s.reward_fn, rng);
        } else if constexpr (std::is_same_v<S, KMeansAgglomerativeSpec>) {
          return gen_kmeans_agglomerative(s.n_arms, s.n_clusters, s.reward_fn, s.linkage, rng);
        } else if constexpr (std::is_same_v<S, UniformSpec>) {
          return gen_uniform_instance(s.n_arms, s.n_clusters, rng);
        } else if constexpr (std::is_same_v<S, ContextualSpec>) {
          return gen_contextual(s, rng);
        } else if constexpr (std::is_same_v<S, ExplicitBandit>) {
          return s.instance;
        } else {
          return s.instance;
        }
      },
      spec);
}

// ---- JSON ----------------------------------------------------------------

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* name, const std::string& where) {
  if (!j.is_object() || !j.contains(name)) throw ConfigError(where + ": missing field '" + name + "'");
  return j.at(name);
}

inline std::size_t size_field(const nlohmann::json& j, const char* name, const std::string& where) {
  const auto& v = field(j, name, where);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + ": field '" + name + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

inline std::size_t size_field_or(const nlohmann::json& j, const char* name, std::size_t fallback, const std::string& where) {
  return j.contains(name) ? size_field(j, name, where) : fallback;
}

inline double number_field(const nlohmann::json& j, const char* name, const std::string& where) {
  const auto& v = field(j, name, where);
  if (!v.is_number()) throw ConfigError(where + ": field '" + name + "' must be a number");
  return v.get<double>();
}

inline std::string string_field(const nlohmann::json& j, const char* name, const std::string& where) {
  const auto& v = field(j, name, where);
  if (!v.is_string()) throw ConfigError(where + ": field '" + name + "' must be a string");
  return v.get<std::string>();
}

template <class F>
auto rethrow_as_config(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline std::string_view to_string(ContextDistribution d) {
  return d == ContextDistribution::uniform_unit_cube ? "uniform" : "normal";
}

inline ContextDistribution parse_context(const std::string& s, const std::string& where) {
  if (s == "uniform") return ContextDistribution::uniform_unit_cube;
  if (s == "normal") return ContextDistribution::standard_normal;
  throw ConfigError(where + ": field 'context' must be \"uniform\" or \"normal\"");
}

}  // namespace detail

inline nlohmann::json tree_to_json(const ClusterTree& tree) {
  nlohmann::json parents = nlohmann::json::array();
  nlohmann::json arms = nlohmann::json::array();
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    parents.push_back(v == tree.root() ? nlohmann::json(nullptr) : nlohmann::json(tree.parent(v)));
    arms.push_back(tree.is_leaf(v) ? nlohmann::json(tree.arm_of(v)) : nlohmann::json(nullptr));
  }
  return {{"parents", parents}, {"leaf_arms", arms}};
}

inline ClusterTree tree_from_json(const nlohmann::json& j) {
  const std::string where = "tree";
  const auto& p = detail::field(j, "parents", where);
  const auto& a = detail::field(j, "leaf_arms", where);
  if (!p.is_array() || !a.is_array()) throw ConfigError("tree: 'parents' and 'leaf_arms' must be arrays");
  std::vector<NodeId> parents;
  std::vector<std::optional<ArmId>> arms;
  for (const auto& v : p) parents.push_back(v.is_null() ? ClusterTree::no_parent : v.get<NodeId>());
  for (const auto& v : a) arms.push_back(v.is_null() ? std::nullopt : std::optional<ArmId>(v.get<ArmId>()));
  return detail::rethrow_as_config(where, [&] { return ClusterTree(std::move(parents), std::move(arms)); });
}

inline nlohmann::json to_json(const BanditInstance& inst) {
  nlohmann::json j{{"type", "bandit"}, {"means", inst.means()}};
  if (inst.clustering()) j["clustering"] = inst.clustering()->assignment();
  if (inst.tree()) j["tree"] = tree_to_json(*inst.tree());
  return j;
}

inline nlohmann::json to_json(const ContextualInstance& inst) {
  nlohmann::json thetas = nlohmann::json::array();
  for (Eigen::Index r = 0; r < inst.thetas().rows(); ++r) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < inst.thetas().cols(); ++c) row.push_back(inst.thetas()(r, c));
    thetas.push_back(row);
  }
  return {{"type", "contextual"},
          {"thetas", thetas},
          {"clustering", inst.clustering().assignment()},
          {"context", detail::to_string(inst.context_distribution())}};
}

inline nlohmann::json to_json(const AnyInstance& inst) {
  return std::visit([](const auto& i) { return to_json(i); }, inst);
}

inline AnyInstance instance_from_json(const nlohmann::json& j) {
  const std::string where = "instance";
  const std::string type = j.contains("type") ? detail::string_field(j, "type", where) : "bandit";
  if (type == "bandit") {
    const auto means = detail::rethrow_as_config(where + ".means", [&] { return detail::field(j, "means", where).get<std::vector<double>>(); });
    std::optional<DisjointClustering> clustering;
    std::optional<ClusterTree> tree;
    if (j.contains("clustering")) {
      auto labels = detail::rethrow_as_config(where + ".clustering", [&] { return j.at("clustering").get<std::vector<ClusterId>>(); });
      clustering = detail::rethrow_as_config(where + ".clustering", [&] { return DisjointClustering(std::move(labels)); });
    }
    if (j.contains("tree")) tree = tree_from_json(j.at("tree"));
    return detail::rethrow_as_config(where, [&] { return BanditInstance(means, clustering, tree); });
  }
  if (type == "contextual") {
    const auto rows = detail::rethrow_as_config(where + ".thetas", [&] {
      return detail::field(j, "thetas", where).get<std::vector<std::vector<double>>>();
    });
    if (rows.empty() || rows.front().empty()) throw ConfigError("instance: field 'thetas' must be a non-empty matrix");
    Eigen::MatrixXd thetas(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.front().size()) throw ConfigError("instance: rows of 'thetas' differ in length");
      for (std::size_t c = 0; c < rows[r].size(); ++c) thetas(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    auto labels = detail::rethrow_as_config(where + ".clustering", [&] {
      return detail::field(j, "clustering", where).get<std::vector<ClusterId>>();
    });
    const auto context = j.contains("context") ? detail::parse_context(detail::string_field(j, "context", where), where)
                                               : ContextDistribution::uniform_unit_cube;
    return detail::rethrow_as_config(where, [&] {
      return ContextualInstance(std::move(thetas), DisjointClustering(std::move(labels)), context);
    });
  }
  throw ConfigError("instance: field 'type' must be \"bandit\" or \"contextual\"");
}

inline nlohmann::json to_json(const InstanceSpec& spec) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, StrongDominanceSpec>) {
          return {{"kind", "strong-dominance"},
                  {"n_arms", s.n_arms},
                  {"n_suboptimal_clusters", s.n_suboptimal_clusters},
                  {"optimal_cluster_size", s.optimal_cluster_size},
                  {"optimal_width", s.optimal_width},
                  {"separation", s.separation}};
        } else if constexpr (std::is_same_v<S, SortedTreeSpec>) {
          return {{"kind", "sorted-binary-tree"}, {"n_arms", s.n_arms}};
        } else if constexpr (std::is_same_v<S, KMeansSpec>) {
          return {{"kind", "kmeans"}, {"n_arms", s.n_arms}, {"n_clusters", s.n_clusters}, {"reward_fn", to_string(s.reward_fn)}};
        } else if constexpr (std::is_same_v<S, KMeansTreeSpec>) {
          return {{"kind", "kmeans-tree"},
                  {"n_arms", s.n_arms},
                  {"branching", s.branching},
                  {"depth", s.depth},
                  {"reward_fn", to_string(s.reward_fn)}};
        } else if constexpr (std::is_same_v<S, KMeansAgglomerativeSpec>) {
          return {{"kind", "kmeans-agglomerative"},
                  {"n_arms", s.n_arms},
                  {"n_clusters", s.n_clusters},
                  {"reward_fn", to_string(s.reward_fn)},
                  {"linkage", to_string(s.linkage)}};
        } else if constexpr (std::is_same_v<S, UniformSpec>) {
          return {{"kind", "uniform"}, {"n_arms", s.n_arms}, {"n_clusters", s.n_clusters}};
        } else if constexpr (std::is_same_v<S, ContextualSpec>) {
          return {{"kind", "contextual"},
                  {"n_arms", s.n_arms},
                  {"n_clusters", s.n_clusters},
                  {"dim", s.dim},
                  {"epsilon", s.epsilon},
                  {"horizon", s.horizon},
                  {"context", detail::to_string(s.context)}};
        } else {
          return {{"kind", "explicit"}, {"instance", to_json(s.instance)}};
        }
      },
      spec);
}

inline InstanceSpec spec_from_json(const nlohmann::json& j) {
  using namespace detail;
  const std::string where = "spec";
  const std::string kind = string_field(j, "kind", where);
  auto reward_fn = [&] {
    return rethrow_as_config(where + ".reward_fn", [&] { return parse_reward_function(string_field(j, "reward_fn", where)); });
  };
  InstanceSpec spec;
  if (kind == "strong-dominance") {
    StrongDominanceSpec s;
    s.n_arms = size_field(j, "n_arms", where);
    s.n_suboptimal_clusters = size_field(j, "n_suboptimal_clusters", where);
    s.optimal_cluster_size = size_field(j, "optimal_cluster_size", where);
    s.optimal_width = number_field(j, "optimal_width", where);
    s.separation = number_field(j, "separation", where);
    rethrow_as_config(where, [&] {
      s.validate();
      return 0;
    });
    spec = s;
  } else if (kind == "sorted-binary-tree") {
    SortedTreeSpec s{size_field(j, "n_arms", where)};
    if (s.n_arms < 2) throw ConfigError("spec: field 'n_arms' must be >= 2");
    spec = s;
  } else if (kind == "kmeans") {
    KMeansSpec s{size_field(j, "n_arms", where), size_field(j, "n_clusters", where), reward_fn()};
    if (s.n_clusters == 0 || s.n_clusters > s.n_arms) throw ConfigError("spec: field 'n_clusters' must be in [1, n_arms]");
    spec = s;
  } else if (kind == "kmeans-tree") {
    KMeansTreeSpec s{size_field(j, "n_arms", where), size_field(j, "branching", where), size_field(j, "depth", where), reward_fn()};
    if (s.branching < 2) throw ConfigError("spec: field 'branching' must be >= 2");
    if (s.depth < 1) throw ConfigError("spec: field 'depth' must be >= 1");
    spec = s;
  } else if (kind == "kmeans-agglomerative") {
    KMeansAgglomerativeSpec s{size_field(j, "n_arms", where), size_field(j, "n_clusters", where), reward_fn(), Linkage::single};
    if (j.contains("linkage")) {
      s.linkage = rethrow_as_config(where + ".linkage", [&] { return parse_linkage(string_field(j, "linkage", where)); });
    }
    if (s.n_arms < 2) throw ConfigError("spec: field 'n_arms' must be >= 2");
    if (s.n_clusters == 0 || s.n_clusters > s.n_arms) throw ConfigError("spec: field 'n_clusters' must be in [1, n_arms]");
    spec = s;
  } else if (kind == "uniform") {
    UniformSpec s{size_field(j, "n_arms", where), size_field(j, "n_clusters", where)};
    if (s.n_clusters == 0 || s.n_clusters > s.n_arms) throw ConfigError("spec: field 'n_clusters' must be in [1, n_arms]");
    spec = s;
  } else if (kind == "contextual") {
    ContextualSpec s;
    s.n_arms = size_field(j, "n_arms", where);
    s.n_clusters = size_field(j, "n_clusters", where);
    s.dim = size_field_or(j, "dim", 5, where);
    s.epsilon = number_field(j, "epsilon", where);
    s.horizon = size_field_or(j, "horizon", 2000, where);
    if (j.contains("context")) s.context = parse_context(string_field(j, "context", where), where);
    rethrow_as_config(where, [&] {
      s.validate();
      return 0;
    });
    spec = s;
  } else if (kind == "explicit") {
    auto inst = instance_from_json(field(j, "instance", where));
    if (auto* b = std::get_if<BanditInstance>(&inst)) {
      spec = ExplicitBandit{std::move(*b)};
    } else {
      spec = ExplicitContextual{std::get<ContextualInstance>(std::move(inst))};
    }
  } else {
    throw ConfigError("spec: unknown kind '" + kind +
                      "' (expected strong-dominance, sorted-binary-tree, kmeans, kmeans-tree, kmeans-agglomerative, "
                      "uniform, contextual or explicit)");
  }
  return spec;
}

}  // namespace clusterbandit
