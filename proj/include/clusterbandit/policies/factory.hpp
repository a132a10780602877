#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "clusterbandit/contextual/instance.hpp"
#include "clusterbandit/contextual/policies.hpp"
#include "clusterbandit/core/errors.hpp"
#include "clusterbandit/core/instance.hpp"
#include "clusterbandit/policies/thompson.hpp"
#include "clusterbandit/policies/ucb.hpp"

namespace clusterbandit {

inline const std::set<std::string, std::less<>>& bandit_policy_keys() {
  static const std::set<std::string, std::less<>> keys{"ts", "tsc", "hts", "tsmax", "ucb1", "ucbc", "uct"};
  return keys;
}

inline const std::set<std::string, std::less<>>& contextual_policy_keys() {
  static const std::set<std::string, std::less<>> keys{"lints", "lintsc", "linucb", "linucbc"};
  return keys;
}

namespace detail {

inline void check_params(std::string_view key, const nlohmann::json& params, std::initializer_list<std::string_view> allowed) {
  if (params.is_null()) return;
  if (!params.is_object()) throw ConfigError("policy '" + std::string(key) + "': params must be an object");
  for (const auto& [name, value] : params.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == name;
    if (!ok) throw ConfigError("policy '" + std::string(key) + "': unknown parameter '" + name + "'");
  }
}

inline double number_param(std::string_view key, const nlohmann::json& params, const char* name, double fallback,
                           bool positive = true) {
  if (params.is_null() || !params.contains(name)) return fallback;
  const auto& v = params.at(name);
  if (!v.is_number()) throw ConfigError("policy '" + std::string(key) + "': parameter '" + name + "' must be a number");
  const double x = v.get<double>();
  if (positive && !(x > 0.0)) throw ConfigError("policy '" + std::string(key) + "': parameter '" + name + "' must be positive");
  return x;
}

// alpha = 0 is allowed and gives the greedy rule.
inline double alpha_param(std::string_view key, const nlohmann::json& params) {
  const double a = number_param(key, params, "alpha", 2.0, false);
  if (!(a >= 0.0)) throw ConfigError("policy '" + std::string(key) + "': parameter 'alpha' must be non-negative");
  return a;
}

// "levels": non-negative integer, or "full" for the whole tree.
inline std::optional<std::size_t> levels_param(std::string_view key, const nlohmann::json& params) {
  if (params.is_null() || !params.contains("levels")) return std::nullopt;
  const auto& v = params.at("levels");
  if (v.is_string() && v.get<std::string>() == "full") return std::nullopt;
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("policy '" + std::string(key) + "': parameter 'levels' must be a non-negative integer or \"full\"");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

inline DisjointClustering clustering_for(std::string_view key, const nlohmann::json& params, const BanditInstance& inst) {
  if (inst.clustering()) return *inst.clustering();
  if (inst.tree()) {
    std::size_t level = 1;
    if (!params.is_null() && params.contains("level")) {
      const auto& v = params.at("level");
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("policy '" + std::string(key) + "': parameter 'level' must be a non-negative integer");
      }
      level = static_cast<std::size_t>(v.get<long long>());
    }
    return inst.tree()->clustering_at_level(level);
  }
  throw ConfigError("policy '" + std::string(key) + "': instance has no clustering or tree");
}

inline ClusterTree tree_for(std::string_view key, const nlohmann::json& params, const BanditInstance& inst) {
  ClusterTree tree;
  if (inst.tree()) {
    tree = *inst.tree();
  } else if (inst.clustering()) {
    tree = ClusterTree::from_clustering(*inst.clustering());
  } else {
    throw ConfigError("policy '" + std::string(key) + "': instance has no tree or clustering");
  }
  if (auto levels = levels_param(key, params)) tree = tree.truncated(*levels);
  return tree;
}

}  // namespace detail

inline std::unique_ptr<Policy> make_policy(std::string_view key, const nlohmann::json& params, const BanditInstance& inst) {
  using namespace detail;
  if (key == "ts") {
    check_params(key, params, {});
    return std::make_unique<ThompsonSampling>(inst.arm_count());
  }
  if (key == "tsc") {
    check_params(key, params, {"level"});
    return std::make_unique<ThompsonSamplingClustered>(clustering_for(key, params, inst));
  }
  if (key == "hts") {
    check_params(key, params, {"levels"});
    return std::make_unique<HierarchicalThompsonSampling>(tree_for(key, params, inst));
  }
  if (key == "tsmax") {
    check_params(key, params, {"level", "statistic"});
    auto stat = TsMaxStatistic::posterior_mean;
    if (!params.is_null() && params.contains("statistic")) {
      const auto& v = params.at("statistic");
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "posterior-mean") {
        stat = TsMaxStatistic::posterior_mean;
      } else if (s == "empirical-mean") {
        stat = TsMaxStatistic::empirical_mean;
      } else {
        throw ConfigError("policy 'tsmax': parameter 'statistic' must be \"posterior-mean\" or \"empirical-mean\"");
      }
    }
    return std::make_unique<TsMax>(clustering_for(key, params, inst), stat);
  }
  if (key == "ucb1") {
    check_params(key, params, {"c"});
    return std::make_unique<Ucb1>(inst.arm_count(), number_param(key, params, "c", 2.0));
  }
  if (key == "ucbc") {
    check_params(key, params, {"c", "level"});
    return std::make_unique<UcbClustered>(clustering_for(key, params, inst), number_param(key, params, "c", 2.0));
  }
  if (key == "uct") {
    check_params(key, params, {"c", "levels"});
    return std::make_unique<Uct>(tree_for(key, params, inst), number_param(key, params, "c", 2.0));
  }
  throw ConfigError("unknown policy '" + std::string(key) + "' (expected one of ts, tsc, hts, tsmax, ucb1, ucbc, uct)");
}

inline std::unique_ptr<ContextualPolicy> make_contextual_policy(std::string_view key, const nlohmann::json& params,
                                                                const ContextualInstance& inst) {
  using namespace detail;
  if (key == "lints") {
    check_params(key, params, {"v"});
    return std::make_unique<LinTs>(inst.arm_count(), inst.dim(), number_param(key, params, "v", 1.0));
  }
  if (key == "lintsc") {
    check_params(key, params, {"v"});
    return std::make_unique<LinTsClustered>(inst.clustering(), inst.dim(), number_param(key, params, "v", 1.0));
  }
  if (key == "linucb") {
    check_params(key, params, {"alpha"});
    return std::make_unique<LinUcb>(inst.arm_count(), inst.dim(), alpha_param(key, params));
  }
  if (key == "linucbc") {
    check_params(key, params, {"alpha"});
    return std::make_unique<LinUcbClustered>(inst.clustering(), inst.dim(), alpha_param(key, params));
  }
  throw ConfigError("unknown contextual policy '" + std::string(key) + "' (expected one of lints, lintsc, linucb, linucbc)");
}

}  // namespace clusterbandit
