#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clusterbandit/clusterbandit.hpp"

namespace cb = clusterbandit;

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cb::ConfigError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw cb::ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw cb::ExportError("cannot write '" + out + "'");
  f << text;
}

// Instance from --instance FILE, or generated from --spec FILE / --preset NAME.
struct InstanceSource {
  std::string instance_path;
  std::string spec_path;
  std::string preset;
  std::string point;
  std::uint64_t seed = 1;

  void add_to(CLI::App* app) {
    auto* group = app->add_option_group("source");
    group->add_option("--instance", instance_path, "serialized instance JSON");
    group->add_option("--spec", spec_path, "instance spec JSON");
    group->add_option("--preset", preset, "take the instance spec from a preset");
    group->require_option(1);
    app->add_option("--point", point, "sweep id within the preset (default: first)");
    app->add_option("--seed", seed, "seed used to generate the instance");
  }

  cb::AnyInstance load() const {
    if (!instance_path.empty()) return cb::instance_from_json(read_json(instance_path));
    cb::InstanceSpec spec;
    if (!spec_path.empty()) {
      spec = cb::spec_from_json(read_json(spec_path));
    } else {
      const auto cfg = cb::preset(preset);
      const cb::SweepPoint* chosen = &cfg.points.front();
      if (!point.empty()) {
        chosen = nullptr;
        for (const auto& p : cfg.points) {
          if (p.id == point) chosen = &p;
        }
        if (!chosen) throw cb::ConfigError("preset '" + preset + "' has no sweep id '" + point + "'");
      }
      spec = chosen->spec;
    }
    cb::Rng rng = cb::Rng::for_stream(seed, cb::Stream::instance);
    return cb::generate(spec, rng);
  }
};

nlohmann::json stats_json(const cb::ClusterStats& s) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : s.clusters) {
    clusters.push_back({{"id", c.id},
                        {"size", c.size},
                        {"mu_bar", c.mu_bar},
                        {"mu_under", c.mu_under},
                        {"width", c.width},
                        {"distance", c.distance},
                        {"gap", c.gap},
                        {"gamma", cb::detail::num(c.gamma)},
                        {"optimal", c.optimal}});
  }
  return {{"optimal_cluster", s.optimal_cluster},
          {"optimal_arm", s.optimal_arm},
          {"mu_star", s.mu_star},
          {"optimal_width", s.optimal_width},
          {"optimal_size", s.optimal_size},
          {"suboptimal_count", s.suboptimal_count},
          {"gamma", cb::detail::num(s.gamma)},
          {"min_distance", cb::detail::num(s.min_distance)},
          {"unique_optimum", s.unique_optimum},
          {"optimum_in_one_cluster", s.optimum_in_one_cluster},
          {"clusters", clusters}};
}

void print_summary(const cb::ExperimentResult& r) {
  std::printf("%-24s %-12s %6s %14s %12s\n", "experiment_id", "policy", "runs", "final_mean", "final_std");
  for (const auto& s : r.summaries) {
    std::printf("%-24s %-12s %6zu %14.4f %12.4f\n", s.point_id.c_str(), s.policy.c_str(), s.summary.runs,
                s.summary.final_mean, s.summary.final_std);
  }
  for (const auto& b : r.bounds) {
    std::printf("bound %-20s %-16s mean %.4g over %zu seeds (assumption holds on %zu)\n", b.point_id.c_str(),
                b.name.c_str(), b.mean_value, b.seeds, b.assumption_holds);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered multi-armed bandit experiments"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment from a preset or config file");
  std::string preset_name, config_path, out_dir, format;
  std::size_t seeds = 0, horizon = 0, stride = 0, threads = 0;
  std::uint64_t base_seed = 0;
  bool with_bounds = false, full_resolution = false;
  auto* src = run->add_option_group("source");
  src->add_option("--preset", preset_name, "preset name (see list-presets)");
  src->add_option("--config", config_path, "experiment config JSON");
  src->require_option(1);
  auto* seeds_opt = run->add_option("--seeds", seeds, "number of seeds")->check(CLI::PositiveNumber);
  auto* base_opt = run->add_option("--base-seed", base_seed, "first seed");
  auto* horizon_opt = run->add_option("--horizon", horizon, "horizon T")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--format", format, "csv, json or svg (comma separated)");
  auto* stride_opt = run->add_option("--stride", stride, "CSV logging stride")->check(CLI::PositiveNumber);
  run->add_flag("--full-resolution", full_resolution, "log every round regardless of horizon");
  run->add_flag("--bounds", with_bounds, "compute bound overlays");
  run->add_option("--threads", threads, "worker threads (default: all cores)");

  // generate
  auto* gen = app.add_subcommand("generate", "generate an instance and print it as JSON");
  InstanceSource gen_src;
  std::string gen_out;
  gen_src.add_to(gen);
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // audit
  auto* audit = app.add_subcommand("audit", "dominance checks and cluster statistics");
  InstanceSource audit_src;
  audit_src.add_to(audit);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "regret bound curves for an instance");
  InstanceSource bounds_src;
  std::size_t bounds_horizon = 3000, bounds_points = 20;
  double eps = 0.1;
  bounds_src.add_to(bounds);
  bounds->add_option("--horizon", bounds_horizon, "largest horizon")->check(CLI::Range(2, 1 << 30));
  bounds->add_option("--points", bounds_points, "number of horizons on the curve")->check(CLI::PositiveNumber);
  bounds->add_option("--eps", eps, "epsilon in the (1+eps) factor")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-presets", "list preset experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*list) {
      for (const auto& n : cb::preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (*gen) {
      emit(cb::to_json(gen_src.load()).dump(1) + "\n", gen_out);
      return 0;
    }
    if (*audit) {
      const auto inst = audit_src.load();
      nlohmann::json report;
      if (const auto* b = std::get_if<cb::BanditInstance>(&inst)) {
        if (b->clustering()) {
          const auto sd = cb::verify_strong_dominance(*b);
          nlohmann::json violations = nlohmann::json::array();
          for (const auto& v : sd.violations) {
            violations.push_back({{"cluster", v.cluster}, {"optimal_side_arm", v.optimal_side_arm},
                                  {"other_arm", v.other_arm}, {"margin", v.margin}});
          }
          report["strong_dominance"] = {{"holds", sd.holds}, {"violation_count", sd.violation_count},
                                        {"violations", violations}};
          report["cluster_stats"] = stats_json(sd.stats);
        }
        if (b->tree()) {
          const auto h = cb::audit_hierarchical_dominance(*b);
          nlohmann::json violations = nlohmann::json::array();
          for (const auto& v : h.violations) {
            violations.push_back({{"depth", v.depth}, {"parent", v.parent}, {"optimal_child", v.optimal_child},
                                  {"sibling", v.sibling}, {"distance", v.distance}});
          }
          report["hierarchical_dominance"] = {{"holds", h.holds}, {"violations", violations}};
        }
      } else {
        const auto& c = std::get<cb::ContextualInstance>(inst);
        report["contextual"] = {{"arms", c.arm_count()}, {"dim", c.dim()}, {"clusters", c.clustering().cluster_count()}};
      }
      std::cout << report.dump(1) << "\n";
      return 0;
    }
    if (*bounds) {
      const auto inst = bounds_src.load();
      const auto* b = std::get_if<cb::BanditInstance>(&inst);
      if (!b) throw cb::ConfigError("bounds: contextual instances have no bound curves");
      std::string out = "t,bound,value,assumption_holds\n";
      for (std::size_t i = 1; i <= bounds_points; ++i) {
        const double t = std::max(2.0, static_cast<double>(bounds_horizon) * static_cast<double>(i) /
                                           static_cast<double>(bounds_points));
        for (const auto& v : cb::instance_bounds(*b, t, eps)) {
          out += cb::detail::g17(t) + "," + v.name + "," + (v.unbounded ? std::string("inf") : cb::detail::g17(v.value)) +
                 "," + (v.assumption_holds ? "1" : "0") + "\n";
        }
      }
      std::cout << out;
      return 0;
    }

    // run
    cb::ExperimentConfig cfg = config_path.empty() ? cb::preset(preset_name) : cb::load_config(config_path);
    if (*seeds_opt || *base_opt) {
      const std::uint64_t base = *base_opt ? base_seed : cfg.seeds.front();
      cfg.seeds = cb::seed_range(base, *seeds_opt ? seeds : cfg.seeds.size());
    }
    if (*horizon_opt) cfg.horizon = horizon;
    if (*stride_opt) cfg.stride = stride;
    if (full_resolution) cfg.stride = 1;
    if (with_bounds) cfg.bounds = true;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!format.empty()) {
      cfg.formats.clear();
      std::size_t start = 0;
      while (start <= format.size()) {
        const auto comma = format.find(',', start);
        cfg.formats.push_back(format.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    cfg.validate();
    const auto result = cb::run_experiment(cfg, {threads});
    for (const auto& p : cb::write_outputs(result, cfg.output_dir, cfg.formats)) std::cerr << "wrote " << p.string() << "\n";
    print_summary(result);
    return 0;
  } catch (const cb::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
