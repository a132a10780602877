#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "clusterbandit/analysis/aggregate.hpp"
#include "clusterbandit/analysis/bounds.hpp"
#include "clusterbandit/analysis/cluster_stats.hpp"
#include "clusterbandit/harness/config.hpp"
#include "clusterbandit/harness/simulate.hpp"

namespace clusterbandit {

struct RunRecord {
  std::size_t point = 0;   // index into config.points
  std::size_t policy = 0;  // index into config.policies
  std::uint64_t seed = 0;
  std::vector<double> curve;  // cumulative regret after rounds 1..T
};

struct PolicySummary {
  std::string point_id;
  std::string policy;  // label
  RegretSummary summary;
  std::vector<double> finals;  // per-seed final regret, in seed order

  friend bool operator==(const PolicySummary&, const PolicySummary&) = default;
};

struct BoundSummary {
  std::string point_id;
  std::string name;
  double horizon = 0.0;
  double mean_value = 0.0;  // over seeds with a finite value
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t seeds = 0;
  std::size_t assumption_holds = 0;  // seeds whose instance meets the bound's assumption
  std::size_t unbounded = 0;
  std::string caveat;

  friend bool operator==(const BoundSummary&, const BoundSummary&) = default;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> runs;  // sorted by (point, policy, seed index)
  std::vector<PolicySummary> summaries;
  std::vector<BoundSummary> bounds;

  const PolicySummary& summary(const std::string& point_id, const std::string& label) const {
    for (const auto& s : summaries) {
      if (s.point_id == point_id && s.policy == label) return s;
    }
    throw std::out_of_range("no summary for " + point_id + " / " + label);
  }
};

struct RunOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
};

// Bounds that apply to the instance's structure: the clustered-arm family
// when a disjoint clustering is present, the tree bound when a tree is.
inline std::vector<BoundValue> instance_bounds(const BanditInstance& instance, double horizon, double eps) {
  std::vector<BoundValue> out;
  if (instance.clustering()) {
    const auto stats = cluster_stats(instance);
    out.push_back(tsc_instance_bound(stats, horizon, eps));
    out.push_back(tsc_pinsker_bound(stats, horizon, eps));
    out.push_back(tsc_minimax_bound(stats, horizon));
    out.push_back(minimax_lower_reference(stats, horizon));
    out.push_back(lai_robbins_lower(stats, horizon));
  }
  if (instance.tree()) out.push_back(hts_instance_bound(instance, horizon, eps));
  return out;
}

namespace detail {

template <class Job>
void parallel_for(std::size_t count, std::size_t threads, Job&& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Every policy sees the same instance realization for a given seed: the
// instance comes from the seed's instance stream, independent of policies.
inline ExperimentResult run_experiment(const ExperimentConfig& config, RunOptions options = {}) {
  config.validate();
  const std::size_t n_points = config.points.size();
  const std::size_t n_policies = config.policies.size();
  const std::size_t n_seeds = config.seeds.size();

  std::vector<AnyInstance> instances(n_points * n_seeds);
  detail::parallel_for(instances.size(), options.threads, [&](std::size_t i) {
    const std::size_t p = i / n_seeds, s = i % n_seeds;
    Rng rng = Rng::for_stream(config.seeds[s], Stream::instance);
    instances[i] = detail::rethrow_as_config("config.sweep[" + config.points[p].id + "]",
                                             [&] { return generate(config.points[p].spec, rng); });
  });

  // Fail fast on policy/instance mismatches before the long runs start.
  for (std::size_t p = 0; p < n_points; ++p) {
    for (const auto& pol : config.policies) {
      const auto& inst = instances[p * n_seeds];
      if (const auto* b = std::get_if<BanditInstance>(&inst)) {
        make_policy(pol.key, pol.params, *b);
      } else {
        make_contextual_policy(pol.key, pol.params, std::get<ContextualInstance>(inst));
      }
    }
  }

  ExperimentResult result;
  result.config = config;
  result.runs.resize(n_points * n_policies * n_seeds);
  detail::parallel_for(result.runs.size(), options.threads, [&](std::size_t i) {
    const std::size_t p = i / (n_policies * n_seeds);
    const std::size_t k = (i / n_seeds) % n_policies;
    const std::size_t s = i % n_seeds;
    const auto& pol = config.policies[k];
    const auto& inst = instances[p * n_seeds + s];
    RunRecord& rec = result.runs[i];
    rec.point = p;
    rec.policy = k;
    rec.seed = config.seeds[s];
    if (const auto* b = std::get_if<BanditInstance>(&inst)) {
      auto policy = make_policy(pol.key, pol.params, *b);
      rec.curve = regret_curve(*b, *policy, config.horizon, rec.seed);
    } else {
      const auto& c = std::get<ContextualInstance>(inst);
      auto policy = make_contextual_policy(pol.key, pol.params, c);
      rec.curve = regret_curve(c, *policy, config.horizon, rec.seed);
    }
  });

  for (std::size_t p = 0; p < n_points; ++p) {
    for (std::size_t k = 0; k < n_policies; ++k) {
      std::vector<std::vector<double>> curves;
      PolicySummary ps;
      ps.point_id = config.points[p].id;
      ps.policy = config.policies[k].label;
      for (std::size_t s = 0; s < n_seeds; ++s) {
        const auto& rec = result.runs[(p * n_policies + k) * n_seeds + s];
        curves.push_back(rec.curve);
        ps.finals.push_back(rec.curve.back());
      }
      ps.summary = aggregate_curves(curves);
      result.summaries.push_back(std::move(ps));
    }
  }

  if (config.bounds && config.horizon >= 2) {
    const double horizon = static_cast<double>(config.horizon);
    for (std::size_t p = 0; p < n_points; ++p) {
      std::vector<BoundSummary> per_point;
      for (std::size_t s = 0; s < n_seeds; ++s) {
        const auto* b = std::get_if<BanditInstance>(&instances[p * n_seeds + s]);
        if (!b) break;
        const auto values = instance_bounds(*b, horizon, config.bound_eps);
        if (per_point.empty()) {
          for (const auto& v : values) {
            BoundSummary bs;
            bs.point_id = config.points[p].id;
            bs.name = v.name;
            bs.horizon = horizon;
            bs.min_value = std::numeric_limits<double>::infinity();
            bs.max_value = -std::numeric_limits<double>::infinity();
            bs.caveat = v.caveat;
            per_point.push_back(bs);
          }
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
          auto& bs = per_point[i];
          const auto& v = values[i];
          ++bs.seeds;
          if (v.assumption_holds) ++bs.assumption_holds;
          if (v.unbounded || !std::isfinite(v.value)) {
            ++bs.unbounded;
            continue;
          }
          bs.mean_value += v.value;
          bs.min_value = std::min(bs.min_value, v.value);
          bs.max_value = std::max(bs.max_value, v.value);
        }
      }
      for (auto& bs : per_point) {
        const std::size_t finite = bs.seeds - bs.unbounded;
        if (finite > 0) {
          bs.mean_value /= static_cast<double>(finite);
        } else {
          bs.mean_value = bs.min_value = bs.max_value = std::numeric_limits<double>::infinity();
        }
        result.bounds.push_back(std::move(bs));
      }
    }
  }
  return result;
}

}  // namespace clusterbandit
