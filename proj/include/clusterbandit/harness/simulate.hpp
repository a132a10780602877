#pragma once

#include <cstdint>
#include <vector>

#include "clusterbandit/contextual/instance.hpp"
#include "clusterbandit/contextual/policies.hpp"
#include "clusterbandit/core/instance.hpp"
#include "clusterbandit/core/trace.hpp"
#include "clusterbandit/policies/policy.hpp"

namespace clusterbandit {

// The per-round loop. `on_step(selection, reward, instant_regret)` sees
// every round. Policy sampling, reward noise and contexts each come from
// their own stream of `seed`.
template <class OnStep>
void run_rounds(const BanditInstance& instance, Policy& policy, std::size_t horizon, std::uint64_t seed, OnStep&& on_step) {
  Rng policy_rng = Rng::for_stream(seed, Stream::policy);
  Rng reward_rng = Rng::for_stream(seed, Stream::reward);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const Selection sel = policy.select(t, policy_rng);
    const double reward = instance.draw_reward(sel.arm, reward_rng);
    on_step(sel, reward, instance.regret_of(sel.arm));
    policy.update(sel, reward);
  }
}

template <class OnStep>
void run_rounds(const ContextualInstance& instance, ContextualPolicy& policy, std::size_t horizon, std::uint64_t seed,
                OnStep&& on_step) {
  Rng policy_rng = Rng::for_stream(seed, Stream::policy);
  Rng reward_rng = Rng::for_stream(seed, Stream::reward);
  Rng context_rng = Rng::for_stream(seed, Stream::context);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const ContextVector x = instance.draw_context(context_rng);
    const Selection sel = policy.select(x, policy_rng);
    const double reward = instance.draw_reward(sel.arm, x, reward_rng);
    on_step(sel, reward, instance.regret_of(sel.arm, x));
    policy.update(sel, x, reward);
  }
}

inline SimulationTrace simulate(const BanditInstance& instance, Policy& policy, std::size_t horizon, std::uint64_t seed) {
  SimulationTrace trace(seed, horizon);
  run_rounds(instance, policy, horizon, seed,
             [&](const Selection& s, double r, double regret) { trace.record(s.arm, s.path, r, regret); });
  return trace;
}

inline SimulationTrace simulate_contextual(const ContextualInstance& instance, ContextualPolicy& policy, std::size_t horizon,
                                           std::uint64_t seed) {
  SimulationTrace trace(seed, horizon);
  run_rounds(instance, policy, horizon, seed,
             [&](const Selection& s, double r, double regret) { trace.record(s.arm, s.path, r, regret); });
  return trace;
}

// Same rounds as simulate(), keeping only the cumulative regret curve.
template <class Instance, class P>
std::vector<double> regret_curve(const Instance& instance, P& policy, std::size_t horizon, std::uint64_t seed) {
  std::vector<double> curve;
  curve.reserve(horizon);
  double total = 0.0;
  run_rounds(instance, policy, horizon, seed, [&](const Selection&, double, double regret) {
    total += regret;
    curve.push_back(total);
  });
  return curve;
}

}  // namespace clusterbandit
