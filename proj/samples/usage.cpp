// Runs TS and TSC on one strong-dominance instance and prints final regret.
#include <cstdio>

#include "clusterbandit/clusterbandit.hpp"

namespace cb = clusterbandit;

int main() {
  cb::StrongDominanceSpec spec;  // N=100, K=10, A*=10, w*=0.1, d=0.1
  cb::Rng instance_rng = cb::Rng::for_stream(7, cb::Stream::instance);
  const auto instance = cb::gen_strong_dominance(spec, instance_rng);

  const auto stats = cb::cluster_stats(instance);
  std::printf("mu* = %.3f, w* = %.3f, d = %.3f, gamma = %.3f\n", stats.mu_star, stats.optimal_width,
              stats.min_distance, stats.gamma);

  const std::size_t horizon = 3000;
  cb::ThompsonSampling ts(instance.arm_count());
  cb::ThompsonSamplingClustered tsc(*instance.clustering());
  const auto ts_trace = cb::simulate(instance, ts, horizon, 7);
  const auto tsc_trace = cb::simulate(instance, tsc, horizon, 7);
  std::printf("final regret after %zu rounds: ts %.1f, tsc %.1f\n", horizon, ts_trace.final_regret(),
              tsc_trace.final_regret());

  const auto bound = cb::tsc_instance_bound(stats, static_cast<double>(horizon), 0.1);
  std::printf("leading-term instance bound at T: %.1f (%s)\n", bound.value, bound.caveat.c_str());
  return 0;
}
