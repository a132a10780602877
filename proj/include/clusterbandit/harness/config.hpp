#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clusterbandit/core/errors.hpp"
#include "clusterbandit/instances/spec.hpp"
#include "clusterbandit/policies/factory.hpp"

namespace clusterbandit {

struct PolicySpec {
  std::string key;
  std::string label;  // unique within a config; defaults to the key
  nlohmann::json params = nlohmann::json::object();

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct SweepPoint {
  std::string id;
  InstanceSpec spec;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<SweepPoint> points;
  std::vector<PolicySpec> policies;
  std::size_t horizon = 3000;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "results";
  std::optional<std::size_t> stride;  // unset: 1 up to T = 10^4, then 10
  bool bounds = false;
  double bound_eps = 0.1;
  std::vector<std::string> formats{"csv"};

  std::size_t effective_stride() const {
    if (stride) return *stride;
    return horizon <= 10000 ? 1 : 10;
  }

  void validate() const {
    if (horizon < 1) throw ConfigError("config: field 'horizon' must be >= 1");
    if (points.empty()) throw ConfigError("config: field 'instance' (or 'sweep') must name at least one instance");
    if (policies.empty()) throw ConfigError("config: field 'policies' must list at least one policy");
    if (seeds.empty()) throw ConfigError("config: field 'seeds' must give at least one seed");
    if (stride && *stride == 0) throw ConfigError("config: field 'stride' must be >= 1");
    if (!(bound_eps > 0.0)) throw ConfigError("config: field 'bound_eps' must be positive");
    std::set<std::string> ids, labels;
    bool any_contextual = false, any_bandit = false;
    for (const auto& p : points) {
      if (!ids.insert(p.id).second) throw ConfigError("config: duplicate sweep id '" + p.id + "'");
      (is_contextual(p.spec) ? any_contextual : any_bandit) = true;
    }
    for (const auto& p : policies) {
      if (!labels.insert(p.label).second) throw ConfigError("config: duplicate policy label '" + p.label + "'");
      const bool ctx = contextual_policy_keys().contains(p.key);
      if (!ctx && !bandit_policy_keys().contains(p.key)) {
        throw ConfigError("config: field 'policies' has unknown policy '" + p.key + "'");
      }
      if (ctx && any_bandit) throw ConfigError("config: contextual policy '" + p.key + "' needs a contextual instance");
      if (!ctx && any_contextual) throw ConfigError("config: policy '" + p.key + "' needs a non-contextual instance");
    }
    for (const auto& f : formats) {
      if (f != "csv" && f != "json" && f != "svg") {
        throw ConfigError("config: field 'formats' has unknown format '" + f + "' (expected csv, json or svg)");
      }
    }
  }
};

inline std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = base + i;
  return s;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json sweep = nlohmann::json::array();
  for (const auto& p : c.points) sweep.push_back({{"id", p.id}, {"instance", to_json(p.spec)}});
  nlohmann::json policies = nlohmann::json::array();
  for (const auto& p : c.policies) policies.push_back({{"key", p.key}, {"label", p.label}, {"params", p.params}});
  nlohmann::json j{{"name", c.name},       {"sweep", sweep},   {"policies", policies},   {"horizon", c.horizon},
                   {"seeds", c.seeds},     {"output_dir", c.output_dir}, {"bounds", c.bounds}, {"bound_eps", c.bound_eps},
                   {"formats", c.formats}};
  if (c.stride) j["stride"] = *c.stride;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using namespace detail;
  const std::string where = "config";
  if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
  static const std::set<std::string> known{"name", "instance", "sweep", "policies", "horizon", "seeds", "output_dir",
                                           "stride", "bounds", "bound_eps", "formats"};
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) throw ConfigError("config: unknown field '" + k + "'");
  }

  ExperimentConfig c;
  if (j.contains("name")) c.name = string_field(j, "name", where);
  if (j.contains("instance") == j.contains("sweep")) {
    throw ConfigError("config: give exactly one of fields 'instance' and 'sweep'");
  }
  if (j.contains("instance")) {
    c.points.push_back({c.name, spec_from_json(j.at("instance"))});
  } else {
    const auto& sweep = j.at("sweep");
    if (!sweep.is_array()) throw ConfigError("config: field 'sweep' must be an array");
    for (const auto& p : sweep) c.points.push_back({string_field(p, "id", "config.sweep"), spec_from_json(field(p, "instance", "config.sweep"))});
  }

  const auto& policies = field(j, "policies", where);
  if (!policies.is_array()) throw ConfigError("config: field 'policies' must be an array");
  for (const auto& p : policies) {
    PolicySpec ps;
    if (p.is_string()) {
      ps.key = p.get<std::string>();
    } else {
      ps.key = string_field(p, "key", "config.policies");
      if (p.contains("params")) ps.params = p.at("params");
      if (p.contains("label")) ps.label = string_field(p, "label", "config.policies");
    }
    if (ps.label.empty()) ps.label = ps.key;
    c.policies.push_back(std::move(ps));
  }

  if (j.contains("horizon")) c.horizon = size_field(j, "horizon", where);
  const auto& seeds = field(j, "seeds", where);
  if (seeds.is_array()) {
    for (const auto& s : seeds) {
      if (!s.is_number_unsigned()) throw ConfigError("config: field 'seeds' must hold non-negative integers");
      c.seeds.push_back(s.get<std::uint64_t>());
    }
  } else if (seeds.is_object()) {
    const auto& base = field(seeds, "base", "config.seeds");
    if (!base.is_number_unsigned()) throw ConfigError("config.seeds: field 'base' must be a non-negative integer");
    c.seeds = seed_range(base.get<std::uint64_t>(), size_field(seeds, "count", "config.seeds"));
  } else {
    throw ConfigError("config: field 'seeds' must be a list or {base, count}");
  }
  if (j.contains("output_dir")) c.output_dir = string_field(j, "output_dir", where);
  if (j.contains("stride")) c.stride = size_field(j, "stride", where);
  if (j.contains("bounds")) {
    if (!j.at("bounds").is_boolean()) throw ConfigError("config: field 'bounds' must be true or false");
    c.bounds = j.at("bounds").get<bool>();
  }
  if (j.contains("bound_eps")) c.bound_eps = number_field(j, "bound_eps", where);
  if (j.contains("formats")) {
    const auto& f = j.at("formats");
    if (!f.is_array()) throw ConfigError("config: field 'formats' must be an array");
    c.formats.clear();
    for (const auto& x : f) {
      if (!x.is_string()) throw ConfigError("config: field 'formats' must hold strings");
      c.formats.push_back(x.get<std::string>());
    }
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace clusterbandit
