#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "clusterbandit/clusterbandit.hpp"
#include "oracles.hpp"

using namespace clusterbandit;

TEST(BetaBelief, StartsAtUniformPrior) {
  BetaBelief b;
  EXPECT_EQ(b.successes(), 1.0);
  EXPECT_EQ(b.failures(), 1.0);
  EXPECT_EQ(b.observations(), 0.0);
}

TEST(BetaBelief, RejectsPseudoCountsBelowOne) {
  EXPECT_THROW(BetaBelief(0.5, 1.0), std::domain_error);
  EXPECT_THROW(BetaBelief(1.0, 0.0), std::domain_error);
  EXPECT_THROW(BetaBelief(1.0, INFINITY), std::domain_error);
}

TEST(BetaUpdate, BinaryAndFractionalRewards) {
  EXPECT_EQ(beta_update(BetaBelief(1, 1), 1.0), BetaBelief(2, 1));
  EXPECT_EQ(beta_update(BetaBelief(1, 1), 0.0), BetaBelief(1, 2));
  EXPECT_EQ(beta_update(BetaBelief(4, 2), 0.5), BetaBelief(4.5, 2.5));
}

TEST(BetaUpdate, RewardOutsideUnitIntervalIsDomainError) {
  EXPECT_THROW(beta_update(BetaBelief(), 1.5), std::domain_error);
  EXPECT_THROW(beta_update(BetaBelief(), -0.1), std::domain_error);
  EXPECT_THROW(beta_update(BetaBelief(), NAN), std::domain_error);
}

TEST(BetaUpdate, PseudoCountConservation) {
  Rng rng(11);
  for (int run = 0; run < 1000; ++run) {
    BetaBelief b;
    const std::size_t t = rng.index(200);
    for (std::size_t i = 0; i < t; ++i) b.update(rng.bernoulli(0.5) ? 1.0 : 0.0);
    ASSERT_EQ(b.successes() + b.failures() - 2.0, static_cast<double>(t));
    ASSERT_GE(b.successes(), 1.0);
    ASSERT_GE(b.failures(), 1.0);
  }
}

TEST(SampleBeta, UniformPriorMean) {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += sample_beta(BetaBelief(1, 1), rng);
  EXPECT_NEAR(sum / 1e5, 0.5, 0.01);
}

TEST(SampleBeta, ConcentratedMean) {
  Rng rng(2);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += sample_beta(BetaBelief(100, 1), rng);
  EXPECT_NEAR(sum / 1e5, 100.0 / 101.0, 0.01);
}

TEST(SampleBeta, DeterministicUnderSeed) {
  Rng a(77), b(77);
  EXPECT_EQ(sample_beta(BetaBelief(3, 7), a), sample_beta(BetaBelief(3, 7), b));
}

class BetaKs : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(BetaKs, EmpiricalCdfMatchesAnalytic) {
  const auto [s, f] = GetParam();
  Rng rng(derive_seed(5, Stream::policy) + static_cast<std::uint64_t>(s * 1000 + f));
  std::vector<double> xs(100000);
  for (auto& x : xs) x = sample_beta(BetaBelief(s, f), rng);
  const double d = oracle::ks_distance(xs, [&](double x) { return oracle::beta_cdf(s, f, x); });
  EXPECT_LE(d, 0.01) << "Beta(" << s << "," << f << ")";
}

INSTANTIATE_TEST_SUITE_P(Shapes, BetaKs,
                         ::testing::Values(std::pair{1.0, 1.0}, std::pair{2.0, 5.0}, std::pair{50.0, 50.0}));

TEST(Rng, StandardNormalKs) {
  Rng rng(3);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = rng.normal();
  EXPECT_LE(oracle::ks_distance(xs, [](double x) { return oracle::normal_cdf(0, 1, x); }), 0.01);
}

TEST(Rng, StreamsAreDistinctAndStable) {
  EXPECT_NE(derive_seed(1, Stream::instance), derive_seed(1, Stream::policy));
  EXPECT_NE(derive_seed(1, Stream::reward), derive_seed(2, Stream::reward));
  EXPECT_EQ(derive_seed(9, Stream::context), derive_seed(9, Stream::context));
}

TEST(Rng, IndexIsInRangeAndRejectsEmpty) {
  Rng rng(4);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.index(7)];
  for (int c : counts) EXPECT_NEAR(c / 70000.0, 1.0 / 7, 0.01);
  EXPECT_THROW(rng.index(0), std::invalid_argument);
}

TEST(Rng, ArgmaxTiesAreUniform) {
  Rng rng(5);
  const std::vector<double> v{0.3, 0.9, 0.9, 0.1, 0.9};
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 30000; ++i) ++counts[argmax_random_tie(v, rng)];
  EXPECT_EQ(counts[0] + counts[3], 0);
  for (int k : {1, 2, 4}) EXPECT_NEAR(counts[k] / 30000.0, 1.0 / 3, 0.02);
}

TEST(DrawReward, DegenerateMeans) {
  BanditInstance inst({1.0, 0.0});
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(draw_reward(inst, 0, rng), 1.0);
    ASSERT_EQ(draw_reward(inst, 1, rng), 0.0);
  }
}

TEST(DrawReward, FrequencyMatchesMean) {
  BanditInstance inst({0.6});
  Rng rng(7);
  double hits = 0;
  for (int i = 0; i < 100000; ++i) hits += draw_reward(inst, 0, rng);
  // binomial sd ~ 0.0015, tolerance is > 6 sd
  EXPECT_NEAR(hits / 1e5, 0.6, 0.01);
}

TEST(DrawReward, UnknownArmIsDomainError) {
  BanditInstance inst({0.5, 0.5});
  Rng rng(8);
  EXPECT_THROW(draw_reward(inst, 2, rng), std::domain_error);
}

TEST(BanditInstance, RejectsMeansOutsideUnitInterval) {
  EXPECT_THROW(BanditInstance({0.5, 1.2}), std::domain_error);
  EXPECT_THROW(BanditInstance(std::vector<double>{}), std::domain_error);
}

TEST(RegretOf, Examples) {
  BanditInstance inst({0.4, 0.6});
  EXPECT_EQ(regret_of(inst, 1), 0.0);
  EXPECT_NEAR(regret_of(inst, 0), 0.2, 1e-15);
}

TEST(RegretOf, TiesComputedAgainstMax) {
  BanditInstance inst({0.7, 0.3, 0.7});
  EXPECT_FALSE(inst.has_unique_optimum());
  EXPECT_EQ(inst.optimal_arms().size(), 2u);
  EXPECT_EQ(regret_of(inst, 0), 0.0);
  EXPECT_EQ(regret_of(inst, 2), 0.0);
  EXPECT_NEAR(regret_of(inst, 1), 0.4, 1e-15);
}

TEST(DisjointClustering, EveryArmInExactlyOneNonEmptyCluster) {
  DisjointClustering c({0, 2, 1, 2, 0});
  EXPECT_EQ(c.cluster_count(), 3u);
  std::size_t total = 0;
  for (ClusterId k = 0; k < c.cluster_count(); ++k) {
    EXPECT_FALSE(c.members(k).empty());
    total += c.members(k).size();
    for (ArmId a : c.members(k)) EXPECT_EQ(c.cluster_of(a), k);
  }
  EXPECT_EQ(total, 5u);
  EXPECT_THROW(DisjointClustering({0, 2}), std::domain_error);
}

TEST(ClusterTree, RejectsMalformedTrees) {
  constexpr auto none = ClusterTree::no_parent;
  // internal node 1 has no children and no arm: a leaf without an arm
  EXPECT_THROW(ClusterTree({none, 0, 0}, {std::nullopt, std::nullopt, ArmId{0}}), std::domain_error);
  // arm 0 on two leaves
  EXPECT_THROW(ClusterTree({none, 0, 0}, {std::nullopt, ArmId{0}, ArmId{0}}), std::domain_error);
  // internal node carrying an arm
  EXPECT_THROW(ClusterTree({none, 0}, {ArmId{1}, ArmId{0}}), std::domain_error);
}

TEST(ClusterTree, FlatAndFromClustering) {
  const auto flat = ClusterTree::flat(4);
  EXPECT_EQ(flat.depth(), 1u);
  EXPECT_EQ(flat.children(0).size(), 4u);
  const DisjointClustering c({0, 1, 1, 0});
  const auto t = ClusterTree::from_clustering(c);
  EXPECT_EQ(t.depth(), 2u);
  EXPECT_EQ(t.clustering_at_level(1), c);
  for (ArmId a = 0; a < 4; ++a) EXPECT_EQ(t.arm_of(t.leaf_of(a)), a);
}

TEST(ClusterTree, TruncationKeepsArmsAndCapsDepth) {
  const auto t = sorted_binary_tree(std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  EXPECT_EQ(t.depth(), 3u);
  for (std::size_t l = 0; l < 4; ++l) {
    const auto tr = t.truncated(l);
    EXPECT_EQ(tr.arm_count(), 8u);
    EXPECT_EQ(tr.depth(), std::min<std::size_t>(l + 1, 3));
    auto under = tr.arms_under(0);
    std::sort(under.begin(), under.end());
    EXPECT_EQ(under, (std::vector<ArmId>{0, 1, 2, 3, 4, 5, 6, 7}));
  }
  EXPECT_EQ(t.truncated(0).children(0).size(), 8u);
  for (std::size_t level = 0; level <= 3; ++level) {
    EXPECT_EQ(t.truncated(2).clustering_at_level(level), t.clustering_at_level(level));
  }
  EXPECT_EQ(t.truncated(1).clustering_at_level(1), t.clustering_at_level(1));
}

TEST(ClusterTree, DepthZeroTree) {
  ClusterTree t;
  EXPECT_EQ(t.depth(), 0u);
  EXPECT_TRUE(t.is_leaf(0));
  EXPECT_EQ(t.arm_of(0), 0u);
}

namespace {

std::vector<std::unique_ptr<Policy>> all_policies(const BanditInstance& inst) {
  std::vector<std::unique_ptr<Policy>> out;
  for (const auto& key : bandit_policy_keys()) out.push_back(make_policy(key, nlohmann::json::object(), inst));
  return out;
}

}  // namespace

TEST(SimulationTrace, RegretAccountingAndLength) {
  Rng gen(12);
  for (int c = 0; c < 40; ++c) {
    const auto inst = gen_strong_dominance(StrongDominanceSpec{30, 3, 5, 0.1, 0.1}, gen).with_tree(
        ClusterTree::from_clustering(DisjointClustering::singletons(30)));
    for (auto& p : all_policies(inst)) {
      const std::size_t horizon = 50 + gen.index(100);
      const auto trace = simulate(inst, *p, horizon, 1000 + c);
      ASSERT_EQ(trace.horizon(), horizon);
      double sum = 0.0, prev = 0.0;
      for (const auto& s : trace.steps()) {
        sum += inst.regret_of(s.arm);
        ASSERT_EQ(s.cumulative_regret, sum) << p->key();
        ASSERT_GE(s.cumulative_regret, prev);
        prev = s.cumulative_regret;
      }
      const auto counts = trace.arm_pull_counts(inst.arm_count());
      ASSERT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), horizon);
    }
  }
}

TEST(SimulationTrace, ByteIdenticalReplay) {
  Rng gen(13);
  const auto inst = gen_strong_dominance(StrongDominanceSpec{40, 4, 6, 0.1, 0.1}, gen);
  for (const auto& key : bandit_policy_keys()) {
    auto p1 = make_policy(key, nlohmann::json::object(), inst);
    auto p2 = make_policy(key, nlohmann::json::object(), inst);
    const auto a = simulate(inst, *p1, 300, 42).serialize();
    const auto b = simulate(inst, *p2, 300, 42).serialize();
    EXPECT_EQ(a, b) << key;
    auto p3 = make_policy(key, nlohmann::json::object(), inst);
    EXPECT_NE(a, simulate(inst, *p3, 300, 43).serialize()) << key;
  }
}

TEST(SimulationTrace, ClusterPullCountsFromArms) {
  const DisjointClustering c({0, 0, 1});
  SimulationTrace t(1);
  const std::vector<std::size_t> none;
  t.record(0, none, 1, 0);
  t.record(2, none, 0, 0.1);
  t.record(1, none, 1, 0);
  EXPECT_EQ(t.cluster_pull_counts(c), (std::vector<std::size_t>{2, 1}));
  EXPECT_NEAR(t.final_regret(), 0.1, 1e-15);
}
