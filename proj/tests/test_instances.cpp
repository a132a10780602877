#include <gtest/gtest.h>

#include <set>

#include "clusterbandit/clusterbandit.hpp"
#include "oracles.hpp"

using namespace clusterbandit;

namespace {

// Per-cluster min and max, computed straight from the means.
struct RawCluster {
  double lo = 2.0, hi = -1.0;
};

std::map<std::size_t, RawCluster> raw_clusters(const BanditInstance& inst) {
  std::map<std::size_t, RawCluster> out;
  for (ArmId a = 0; a < inst.arm_count(); ++a) {
    auto& c = out[inst.clustering()->cluster_of(a)];
    c.lo = std::min(c.lo, inst.mean(a));
    c.hi = std::max(c.hi, inst.mean(a));
  }
  return out;
}

oracle::RawTree raw(const ClusterTree& t) {
  oracle::RawTree r;
  for (NodeId v = 0; v < t.node_count(); ++v) {
    r.parent.push_back(v == t.root() ? ClusterTree::no_parent : t.parent(v));
    r.arm.push_back(t.is_leaf(v) ? std::optional<std::size_t>(t.arm_of(v)) : std::nullopt);
  }
  return r;
}

// Naive O(n^3) agglomeration on the raw point set.
std::vector<double> naive_merge_heights(const FeatureMatrix& x, Linkage l) {
  std::vector<std::vector<int>> cl;
  for (int i = 0; i < x.rows(); ++i) cl.push_back({i});
  auto link = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double mn = 1e300, mx = 0, sum = 0;
    for (int i : a) {
      for (int j : b) {
        const double d = (x.row(i) - x.row(j)).norm();
        mn = std::min(mn, d);
        mx = std::max(mx, d);
        sum += d;
      }
    }
    if (l == Linkage::single) return mn;
    if (l == Linkage::complete) return mx;
    return sum / static_cast<double>(a.size() * b.size());
  };
  std::vector<double> h;
  while (cl.size() > 1) {
    double best = 1e300;
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < cl.size(); ++i) {
      for (std::size_t j = i + 1; j < cl.size(); ++j) {
        const double d = link(cl[i], cl[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    h.push_back(best);
    cl[bi].insert(cl[bi].end(), cl[bj].begin(), cl[bj].end());
    cl.erase(cl.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return h;
}

std::set<std::set<double>> groups_of(const std::vector<double>& pts, const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::set<double>> m;
  for (std::size_t i = 0; i < pts.size(); ++i) m[labels[i]].insert(pts[i]);
  std::set<std::set<double>> out;
  for (auto& [k, g] : m) out.insert(g);
  return out;
}

FeatureMatrix column(const std::vector<double>& v) {
  FeatureMatrix x(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = v[i];
  return x;
}

}  // namespace

// ---------------------------------------------------------------- strong dominance

TEST(StrongDominance, DefaultSpecLevels) {
  Rng rng(1);
  const StrongDominanceSpec spec;  // N=100, K=10, A*=10, w*=0.1, d=0.1
  const auto inst = gen_strong_dominance(spec, rng);
  ASSERT_EQ(inst.arm_count(), 100u);
  const auto c = raw_clusters(inst);
  ASSERT_EQ(c.size(), 11u);
  const auto& opt = c.at(inst.clustering()->cluster_of(inst.optimal_arm()));
  EXPECT_DOUBLE_EQ(inst.optimal_mean(), 0.6);
  EXPECT_NEAR(opt.lo, 0.5, 1e-12);
  double best_other = 0, worst_other = 1;
  for (auto& [k, v] : c) {
    if (&v == &opt) continue;
    best_other = std::max(best_other, v.hi);
    worst_other = std::min(worst_other, v.lo);
  }
  EXPECT_NEAR(best_other, 0.4, 1e-12);
  EXPECT_NEAR(worst_other, 0.3, 1e-12);
  EXPECT_EQ(inst.clustering()->members(inst.clustering()->cluster_of(inst.optimal_arm())).size(), 10u);
  EXPECT_TRUE(verify_strong_dominance(inst).holds);
}

TEST(StrongDominance, ZeroWidthGivesZeroGamma) {
  Rng rng(2);
  StrongDominanceSpec spec;
  spec.optimal_width = 0.0;
  const auto inst = gen_strong_dominance(spec, rng);
  const auto s = cluster_stats(inst);
  EXPECT_EQ(s.optimal_width, 0.0);
  EXPECT_EQ(s.gamma, 0.0);
  EXPECT_FALSE(s.unique_optimum);
  EXPECT_TRUE(s.optimum_in_one_cluster);
}

TEST(StrongDominance, InvalidSpecsRejected) {
  Rng rng(3);
  StrongDominanceSpec spec;
  spec.optimal_width = 0.3;
  spec.separation = 0.3;
  EXPECT_THROW(gen_strong_dominance(spec, rng), std::domain_error);
  spec = {};
  spec.n_arms = 15;  // 5 arms for 10 sub-optimal clusters
  EXPECT_THROW(gen_strong_dominance(spec, rng), std::domain_error);
  spec = {};
  spec.separation = 0.0;
  EXPECT_THROW(gen_strong_dominance(spec, rng), std::domain_error);
}

TEST(StrongDominance, ParametersHitExactlyAgainstPairwiseOracle) {
  Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    StrongDominanceSpec spec;
    spec.n_suboptimal_clusters = 1 + rng.index(12);
    spec.optimal_cluster_size = 2 + rng.index(10);
    spec.n_arms = spec.optimal_cluster_size + spec.n_suboptimal_clusters + rng.index(60);
    spec.optimal_width = rng.uniform(0.0, 0.3);
    spec.separation = rng.uniform(0.01, 0.5 - spec.optimal_width);
    const auto inst = gen_strong_dominance(spec, rng);

    const auto c = raw_clusters(inst);
    const auto copt = inst.clustering()->cluster_of(inst.optimal_arm());
    EXPECT_NEAR(c.at(copt).hi - c.at(copt).lo, spec.optimal_width, 1e-12);
    for (auto& [k, v] : c) {
      if (k == copt) continue;
      EXPECT_NEAR(c.at(copt).lo - v.hi, spec.separation, 1e-12);
    }
    EXPECT_EQ(inst.clustering()->members(copt).size(), spec.optimal_cluster_size);
    EXPECT_EQ(inst.clustering()->cluster_count(), spec.n_suboptimal_clusters + 1);
    EXPECT_TRUE(oracle::dominance_violations(inst.means(), inst.clustering()->assignment()).empty());
    EXPECT_TRUE(verify_strong_dominance(inst).holds);
    for (double m : inst.means()) {
      ASSERT_GE(m, 0.0);
      ASSERT_LE(m, 1.0);
    }
  }
}

TEST(StrongDominance, OptimalArmPositionVaries) {
  std::set<ArmId> seen;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    seen.insert(gen_strong_dominance(StrongDominanceSpec{}, rng).optimal_arm());
  }
  EXPECT_GT(seen.size(), 5u);
}

TEST(AssignUniformNonempty, EveryClusterUsed) {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 1 + rng.index(20);
    const std::size_t n = k + rng.index(50);
    const auto labels = assign_uniform_nonempty(n, k, rng);
    ASSERT_EQ(labels.size(), n);
    std::set<std::size_t> used(labels.begin(), labels.end());
    EXPECT_EQ(used.size(), k);
    EXPECT_LT(*used.rbegin(), k);
  }
}

// ---------------------------------------------------------------- sorted tree

TEST(SortedBinaryTree, FourArmExample) {
  const std::vector<double> means{0.2, 0.7, 0.3, 0.5};
  const auto t = sorted_binary_tree(means);
  ASSERT_EQ(t.children(t.root()).size(), 2u);
  const auto left = t.arms_under(t.children(t.root())[0]);
  const auto right = t.arms_under(t.children(t.root())[1]);
  EXPECT_EQ(std::set<ArmId>(left.begin(), left.end()), (std::set<ArmId>{0, 2}));
  EXPECT_EQ(std::set<ArmId>(right.begin(), right.end()), (std::set<ArmId>{1, 3}));
  EXPECT_EQ(t.depth(), 2u);
  const BanditInstance inst(means, std::nullopt, t);
  EXPECT_TRUE(audit_hierarchical_dominance(inst).holds);
}

TEST(SortedBinaryTree, GeneratedInstancesSatisfyHierarchy) {
  Rng rng(6);
  for (std::size_t n : {2u, 3u, 7u, 16u, 33u, 256u}) {
    const auto inst = gen_sorted_binary_tree(n, rng);
    const auto& t = *inst.tree();
    EXPECT_EQ(t.arm_count(), n);
    EXPECT_EQ(t.depth(), static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))));
    EXPECT_TRUE(inst.has_unique_optimum());
    for (double m : inst.means()) {
      EXPECT_GE(m, 0.1);
      EXPECT_LT(m, 0.8);
    }
    // Left subtree entirely below right subtree at every internal node.
    for (NodeId v = 0; v < t.node_count(); ++v) {
      if (t.is_leaf(v)) continue;
      const auto ch = t.children(v);
      ASSERT_EQ(ch.size(), 2u);
      double left_max = 0, right_min = 1;
      for (ArmId a : t.arms_under(ch[0])) left_max = std::max(left_max, inst.mean(a));
      for (ArmId a : t.arms_under(ch[1])) right_min = std::min(right_min, inst.mean(a));
      EXPECT_LT(left_max, right_min);
    }
    EXPECT_TRUE(audit_hierarchical_dominance(inst).holds);
  }
}

// ---------------------------------------------------------------- reward functions

TEST(RewardFunctions, ReferencePoints) {
  EXPECT_NEAR(evaluate(RewardFunction::sin_product, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(evaluate(RewardFunction::gaussian_mix_1d, 0.1), 0.5 * (1 + std::exp(-0.8)), 1e-15);
  EXPECT_NEAR(evaluate(RewardFunction::gaussian_mix_1d, 0.1), 0.724664, 1e-6);
  const double p[2] = {0.2, 0.7};
  // The first and third bumps peak here, the second contributes 0.2 e^{-25}.
  EXPECT_NEAR(evaluate(RewardFunction::bump_2d, p), 0.7 + 0.2 * std::exp(-25.0), 1e-15);
}

TEST(RewardFunctions, MatchLongDoubleOracle) {
  Rng rng(7);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    const double xy[2] = {x, y};
    worst = std::max(worst, std::abs(evaluate(RewardFunction::sin_product, x) - static_cast<double>(oracle::sin_product(x))));
    worst = std::max(worst, std::abs(evaluate(RewardFunction::gaussian_mix_1d, x) - static_cast<double>(oracle::gaussian_mix(x))));
    worst = std::max(worst, std::abs(evaluate(RewardFunction::bump_2d, xy) - static_cast<double>(oracle::bump(x, y))));
    for (auto fn : {RewardFunction::sin_product, RewardFunction::gaussian_mix_1d}) {
      const double v = evaluate(fn, x);
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(RewardFunctions, NamesAndDimensions) {
  for (auto fn : {RewardFunction::sin_product, RewardFunction::gaussian_mix_1d, RewardFunction::bump_2d}) {
    EXPECT_EQ(parse_reward_function(to_string(fn)), fn);
  }
  EXPECT_THROW(parse_reward_function("cosine"), std::invalid_argument);
  EXPECT_EQ(feature_dim(RewardFunction::bump_2d), 2u);
  const double one[1] = {0.5};
  EXPECT_THROW(evaluate(RewardFunction::bump_2d, one), std::domain_error);
}

// ---------------------------------------------------------------- k-means

TEST(KMeans, TwoObviousGroups) {
  const std::vector<double> pts{0.0, 0.01, 0.99, 1.0};
  Rng rng(8);
  const auto r = kmeans(column(pts), 2, rng);
  EXPECT_EQ(groups_of(pts, r.labels), (std::set<std::set<double>>{{0.0, 0.01}, {0.99, 1.0}}));
  EXPECT_NEAR(r.distortion, 4 * 0.005 * 0.005, 1e-12);
}

TEST(KMeans, KEqualsNGivesSingletons) {
  Rng rng(9);
  const auto x = draw_features(12, RewardFunction::bump_2d, rng);
  const auto r = kmeans(x, 12, rng);
  EXPECT_EQ(std::set<std::size_t>(r.labels.begin(), r.labels.end()).size(), 12u);
  EXPECT_NEAR(r.distortion, 0.0, 1e-15);
}

TEST(KMeans, DistortionNonIncreasing) {
  Rng rng(10);
  for (int rep = 0; rep < 30; ++rep) {
    const auto x = draw_features(200, rep % 2 ? RewardFunction::bump_2d : RewardFunction::sin_product, rng);
    const auto r = kmeans(x, 2 + rng.index(15), rng);
    ASSERT_FALSE(r.distortion_history.empty());
    for (std::size_t i = 1; i < r.distortion_history.size(); ++i) {
      EXPECT_LE(r.distortion_history[i], r.distortion_history[i - 1] + 1e-12);
    }
    EXPECT_NEAR(r.distortion, r.distortion_history.back(), 1e-12);
    EXPECT_LE(r.iterations, 100u);
  }
}

TEST(KMeans, TooManyClustersRejected) {
  Rng rng(11);
  EXPECT_THROW(kmeans(column({0.1, 0.2}), 3, rng), std::domain_error);
  EXPECT_THROW(kmeans(column({0.1, 0.2}), 0, rng), std::domain_error);
}

TEST(KMeans, SeparatedGroupsMatchExhaustivePartition) {
  Rng rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> pts;
    const std::size_t na = 2 + rng.index(4), nb = 2 + rng.index(4);
    for (std::size_t i = 0; i < na; ++i) pts.push_back(rng.uniform(0.0, 0.2));
    for (std::size_t i = 0; i < nb; ++i) pts.push_back(rng.uniform(0.8, 1.0));
    const auto best = oracle::best_two_partition(pts);
    const auto r = kmeans(column(pts), 2, rng);
    EXPECT_EQ(groups_of(pts, r.labels), std::set<std::set<double>>(best.begin(), best.end()));
  }
}

// ---------------------------------------------------------------- agglomerative

TEST(Agglomerative, TwoPoints) {
  const auto d = agglomerate(column({0.1, 0.4}));
  ASSERT_EQ(d.merges.size(), 1u);
  EXPECT_NEAR(d.merges[0].distance, 0.3, 1e-15);
  EXPECT_EQ(d.tree.node_count(), 3u);
  EXPECT_EQ(d.tree.depth(), 1u);
  EXPECT_EQ(d.tree.children(0).size(), 2u);
}

TEST(Agglomerative, NearestPairMergesFirst) {
  const auto d = agglomerate(column({0.0, 0.1, 0.9}));
  ASSERT_EQ(d.merges.size(), 2u);
  EXPECT_EQ(d.merges[0].left, 0u);
  EXPECT_EQ(d.merges[0].right, 1u);
  EXPECT_NEAR(d.merges[0].distance, 0.1, 1e-15);
  EXPECT_NEAR(d.merges[1].distance, 0.8, 1e-15);
  // Arm 2 hangs off the root; arms 0 and 1 share a subtree.
  const auto& t = d.tree;
  EXPECT_EQ(t.parent(t.leaf_of(2)), t.root());
  EXPECT_EQ(t.parent(t.leaf_of(0)), t.parent(t.leaf_of(1)));
}

TEST(Agglomerative, HeightsMatchNaiveOracle) {
  Rng rng(13);
  for (auto l : {Linkage::single, Linkage::complete, Linkage::average}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto x = draw_features(5 + rng.index(30), rep % 2 ? RewardFunction::bump_2d : RewardFunction::sin_product, rng);
      const auto d = agglomerate(x, l);
      const auto h = naive_merge_heights(x, l);
      ASSERT_EQ(d.merges.size(), h.size());
      for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(d.merges[i].distance, h[i], 1e-12) << to_string(l);
      EXPECT_EQ(d.tree.arm_count(), static_cast<std::size_t>(x.rows()));
      EXPECT_EQ(d.tree.node_count(), 2 * static_cast<std::size_t>(x.rows()) - 1);
    }
  }
  EXPECT_EQ(parse_linkage("average"), Linkage::average);
  EXPECT_THROW(parse_linkage("ward"), std::invalid_argument);
}

// ---------------------------------------------------------------- k-means trees

TEST(KMeansTree, DepthOneMatchesFlatKMeans) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    Rng a(s), b(s);
    const auto flat = gen_kmeans_instance(200, 8, RewardFunction::sin_product, a);
    const auto tree = gen_kmeans_tree(200, 8, 1, RewardFunction::sin_product, b);
    EXPECT_EQ(flat.means(), tree.means());
    EXPECT_EQ(tree.tree()->clustering_at_level(1), *flat.clustering());
  }
}

TEST(KMeansTree, ShapeOfDeepTree) {
  Rng rng(14);
  const auto inst = gen_kmeans_tree(5000, 15, 3, RewardFunction::sin_product, rng);
  const auto& t = *inst.tree();
  EXPECT_EQ(t.arm_count(), 5000u);
  EXPECT_EQ(t.children(t.root()).size(), 15u);
  EXPECT_LE(t.depth(), 4u);
  EXPECT_GE(t.depth(), 3u);
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (!t.is_leaf(v)) EXPECT_LE(t.children(v).size(), v == t.root() ? 15u : std::max<std::size_t>(15, t.arms_under(v).size()));
  }
  // Internal nodes above the last k-means level branch 15 ways.
  for (NodeId c : t.children(t.root())) {
    if (t.arms_under(c).size() > 15) EXPECT_EQ(t.children(c).size(), 15u);
  }
}

TEST(KMeansAgglomerative, CarriesBothStructures) {
  Rng rng(15);
  const auto inst = gen_kmeans_agglomerative(120, 10, RewardFunction::bump_2d, Linkage::single, rng);
  ASSERT_TRUE(inst.clustering());
  ASSERT_TRUE(inst.tree());
  EXPECT_EQ(inst.clustering()->cluster_count(), 10u);
  EXPECT_EQ(inst.tree()->arm_count(), 120u);
}

// ---------------------------------------------------------------- dominance audit

TEST(VerifyStrongDominance, UniformInstancesMatchOracle) {
  Rng rng(16);
  int failures = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = gen_uniform_instance(50, 10, rng);
    const auto rep_ = verify_strong_dominance(inst, 100000);
    const auto o = oracle::dominance_violations(inst.means(), inst.clustering()->assignment());
    EXPECT_EQ(rep_.violation_count, o.size());
    EXPECT_EQ(rep_.holds, o.empty());
    std::set<oracle::PairViolation> got;
    for (const auto& v : rep_.violations) {
      got.insert({v.cluster, v.optimal_side_arm, v.other_arm});
      EXPECT_LE(v.margin, 0.0);
      EXPECT_DOUBLE_EQ(v.margin, inst.mean(v.optimal_side_arm) - inst.mean(v.other_arm));
    }
    EXPECT_EQ(got, o);
    failures += !rep_.holds;
  }
  EXPECT_GT(failures, 90);
}

TEST(VerifyStrongDominance, ReportCapRespected) {
  Rng rng(17);
  const auto inst = gen_uniform_instance(200, 2, rng);
  const auto r = verify_strong_dominance(inst, 3);
  EXPECT_LE(r.violations.size(), 3u);
  EXPECT_GE(r.violation_count, r.violations.size());
}

TEST(VerifyStrongDominance, SingleClusterHoldsVacuously) {
  const BanditInstance inst({0.2, 0.9, 0.5}, DisjointClustering::single_cluster(3));
  const auto r = verify_strong_dominance(inst);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.violation_count, 0u);
}

// ---------------------------------------------------------------- specs and JSON

namespace {

std::vector<InstanceSpec> sample_specs() {
  ContextualSpec cs;
  cs.n_arms = 30;
  cs.n_clusters = 3;
  cs.dim = 2;
  return {StrongDominanceSpec{},
          SortedTreeSpec{16},
          KMeansSpec{40, 4, RewardFunction::gaussian_mix_1d},
          KMeansTreeSpec{60, 3, 2, RewardFunction::sin_product},
          KMeansAgglomerativeSpec{30, 3, RewardFunction::bump_2d, Linkage::average},
          UniformSpec{20, 4},
          cs};
}

}  // namespace

TEST(InstanceSpec, GenerationIsDeterministicPerSeed) {
  for (const auto& spec : sample_specs()) {
    Rng a(42), b(42), c(43);
    const auto x = to_json(generate(spec, a)).dump();
    EXPECT_EQ(x, to_json(generate(spec, b)).dump());
    EXPECT_NE(x, to_json(generate(spec, c)).dump());
  }
}

TEST(InstanceSpec, JsonRoundTrip) {
  for (const auto& spec : sample_specs()) {
    const auto j = to_json(spec);
    const auto back = spec_from_json(j);
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(is_contextual(back), is_contextual(spec));
    Rng rng(44);
    const auto inst = generate(spec, rng);
    const auto ij = to_json(inst);
    EXPECT_EQ(to_json(instance_from_json(ij)), ij);
  }
}

TEST(InstanceSpec, ExplicitInstanceRoundTrip) {
  const BanditInstance inst({0.1, 0.5, 0.3}, DisjointClustering({0, 1, 1}), ClusterTree::flat(3));
  const InstanceSpec spec = ExplicitBandit{inst};
  const auto back = spec_from_json(to_json(spec));
  ASSERT_TRUE(std::holds_alternative<ExplicitBandit>(back));
  EXPECT_EQ(std::get<ExplicitBandit>(back).instance, inst);
}

TEST(InstanceSpec, TreeJsonRoundTrip) {
  Rng rng(45);
  const auto t = *gen_sorted_binary_tree(9, rng).tree();
  EXPECT_EQ(tree_from_json(tree_to_json(t)), t);
  nlohmann::json bad = tree_to_json(t);
  bad["leaf_arms"][0] = 0;  // root carrying an arm
  EXPECT_THROW(tree_from_json(bad), ConfigError);
}

TEST(InstanceSpec, BadJsonRaisesConfigError) {
  using nlohmann::json;
  EXPECT_THROW(spec_from_json(json{{"kind", "bogus"}}), ConfigError);
  EXPECT_THROW(spec_from_json(json{{"kind", "kmeans"}, {"n_arms", 10}, {"n_clusters", 3}, {"reward_fn", "cos"}}), ConfigError);
  EXPECT_THROW(spec_from_json(json{{"kind", "kmeans"}, {"n_arms", 10}, {"n_clusters", 11}, {"reward_fn", "sin-product"}}),
               ConfigError);
  EXPECT_THROW(spec_from_json(json{{"kind", "uniform"}, {"n_arms", 10}}), ConfigError);
  EXPECT_THROW(spec_from_json(json{{"kind", "strong-dominance"},
                                   {"n_arms", 100},
                                   {"n_suboptimal_clusters", 10},
                                   {"optimal_cluster_size", 10},
                                   {"optimal_width", 0.4},
                                   {"separation", 0.4}}),
               ConfigError);
  EXPECT_THROW(instance_from_json(json{{"type", "bandit"}, {"means", {0.5, 1.5}}}), ConfigError);
}
