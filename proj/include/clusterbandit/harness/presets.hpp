#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "clusterbandit/harness/config.hpp"

namespace clusterbandit {

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "fig-d-sweep",  "fig-w-sweep",     "fig-n-sweep",     "fig-k-sweep", "fig-a-sweep",
      "fig-depth",    "kmeans-small",    "kmeans-large",    "hts-uct",     "ctx-small",
      "ctx-large-eps05", "ctx-large-eps01", "appendix-2d", "appendix-gaussian", "appendix-uniform"};
  return names;
}

namespace detail {

inline std::string fmt_id(const char* prefix, double v) {
  std::ostringstream s;
  s << prefix << v;
  return s.str();
}

inline PolicySpec pol(std::string key, std::string label = {}, nlohmann::json params = nlohmann::json::object()) {
  if (label.empty()) label = key;
  return {std::move(key), std::move(label), std::move(params)};
}

inline ExperimentConfig base_config(std::string name, std::size_t horizon, std::size_t seeds) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.horizon = horizon;
  c.seeds = seed_range(1, seeds);
  c.output_dir = "results/" + c.name;
  return c;
}

inline StrongDominanceSpec sd(std::size_t n, std::size_t k, std::size_t a, double w, double d) {
  StrongDominanceSpec s;
  s.n_arms = n;
  s.n_suboptimal_clusters = k;
  s.optimal_cluster_size = a;
  s.optimal_width = w;
  s.separation = d;
  return s;
}

}  // namespace detail

// Parameters of the published experiments. Where a figure does not state the
// horizon the neighbouring experiments' value is used (see README).
inline ExperimentConfig preset(std::string_view name) {
  using namespace detail;
  const std::vector<PolicySpec> ts_tsc{pol("ts"), pol("tsc")};

  if (name == "fig-d-sweep") {
    auto c = base_config("fig-d-sweep", 3000, 50);
    for (double d : {0.05, 0.1, 0.2, 0.3}) c.points.push_back({fmt_id("d=", d), sd(100, 10, 10, 0.1, d)});
    c.policies = ts_tsc;
    return c;
  }
  if (name == "fig-w-sweep") {
    auto c = base_config("fig-w-sweep", 3000, 50);
    for (double w : {0.0, 0.1, 0.2, 0.3}) c.points.push_back({fmt_id("w=", w), sd(100, 10, 10, w, 0.1)});
    c.policies = ts_tsc;
    return c;
  }
  if (name == "fig-n-sweep") {
    auto c = base_config("fig-n-sweep", 3000, 50);
    for (std::size_t n : {25, 100, 400, 900}) {
      const auto r = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
      c.points.push_back({fmt_id("N=", static_cast<double>(n)), sd(n, r, r, 0.1, 0.1)});
    }
    c.policies = ts_tsc;
    return c;
  }
  if (name == "fig-k-sweep") {
    auto c = base_config("fig-k-sweep", 3000, 50);
    for (std::size_t k : {2, 5, 10, 20, 40}) c.points.push_back({fmt_id("K=", static_cast<double>(k)), sd(100, k, 10, 0.1, 0.1)});
    c.policies = ts_tsc;
    return c;
  }
  if (name == "fig-a-sweep") {
    auto c = base_config("fig-a-sweep", 3000, 50);
    for (std::size_t a : {2, 10, 20, 40, 60, 80}) c.points.push_back({fmt_id("A=", static_cast<double>(a)), sd(100, 10, a, 0.1, 0.1)});
    c.policies = ts_tsc;
    return c;
  }
  if (name == "fig-depth") {
    auto c = base_config("fig-depth", 3000, 50);
    for (std::size_t n : {64, 256, 1024}) c.points.push_back({fmt_id("N=", static_cast<double>(n)), SortedTreeSpec{n}});
    for (int l : {0, 1, 2, 4}) c.policies.push_back(pol("hts", "hts-L" + std::to_string(l), {{"levels", l}}));
    c.policies.push_back(pol("hts", "hts-full", {{"levels", "full"}}));
    return c;
  }
  if (name == "kmeans-small" || name == "kmeans-large") {
    const bool small = name == "kmeans-small";
    auto c = base_config(std::string(name), 3000, 100);
    c.points.push_back({c.name, KMeansSpec{small ? 100u : 1000u, small ? 10u : 32u, RewardFunction::sin_product}});
    c.policies = {pol("ts"), pol("tsc"), pol("ucb1"), pol("ucbc"), pol("tsmax")};
    return c;
  }
  if (name == "hts-uct") {
    auto c = base_config("hts-uct", 3000, 100);
    c.points.push_back({c.name, KMeansTreeSpec{5000, 15, 3, RewardFunction::sin_product}});
    c.policies = {pol("tsc", "tsc", {{"level", 1}}), pol("hts", "hts-L2", {{"levels", 2}}),
                  pol("hts", "hts-L3", {{"levels", 3}}), pol("uct", "uct-L2", {{"levels", 2}}),
                  pol("uct", "uct-L3", {{"levels", 3}})};
    return c;
  }
  if (name == "ctx-small" || name == "ctx-large-eps05" || name == "ctx-large-eps01") {
    auto c = base_config(std::string(name), 2000, 25);
    ContextualSpec s;
    s.n_arms = name == "ctx-small" ? 400 : 900;
    s.n_clusters = name == "ctx-small" ? 20 : 30;
    s.epsilon = name == "ctx-large-eps01" ? 0.1 : 0.5;
    s.horizon = c.horizon;
    c.points.push_back({c.name, s});
    c.policies = {pol("lints", "lints", {{"v", 1.0}}), pol("lintsc", "lintsc", {{"v", 1.0}}),
                  pol("linucb", "linucb", {{"alpha", 2.0}}), pol("linucbc", "linucbc", {{"alpha", 2.0}})};
    return c;
  }
  if (name == "appendix-2d") {
    auto c = base_config("appendix-2d", 20000, 25);
    c.points.push_back({c.name, KMeansAgglomerativeSpec{500, 20, RewardFunction::bump_2d, Linkage::single}});
    c.policies = {pol("tsc"), pol("hts"), pol("uct")};
    return c;
  }
  if (name == "appendix-gaussian") {
    auto c = base_config("appendix-gaussian", 25000, 25);
    c.points.push_back({c.name, KMeansAgglomerativeSpec{50, 5, RewardFunction::gaussian_mix_1d, Linkage::single}});
    c.policies = {pol("tsc"), pol("hts"), pol("uct")};
    return c;
  }
  if (name == "appendix-uniform") {
    auto c = base_config("appendix-uniform", 3000, 25);
    c.points.push_back({c.name, UniformSpec{50, 10}});
    c.policies = ts_tsc;
    return c;
  }
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + std::string(name) + "'; valid presets: " + list);
}

}  // namespace clusterbandit
