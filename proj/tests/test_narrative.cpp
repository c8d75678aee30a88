#include <gtest/gtest.h>

#include "test_support.hpp"

namespace cs = cigstream;

TEST(ActBoundary, WeightedMean) {
  const std::vector<double> t{1000, 2000}, y{1, 3};
  const auto b = cs::act_boundary(t, y, {0, 3000});
  EXPECT_DOUBLE_EQ(b.seconds, 1750);
  EXPECT_EQ(b.shots_in_interval, 2u);
  EXPECT_FALSE(b.fallback);
}

TEST(ActBoundary, SingleSpike) {
  const std::vector<double> t{1400, 1500, 1600}, y{0, 7, 0};
  EXPECT_DOUBLE_EQ(cs::act_boundary(t, y, {1320, 2400}).seconds, 1500);
}

TEST(ActBoundary, UniformMassGivesMidpoint) {
  std::vector<double> t, y;
  for (double s = 1000; s <= 2000; s += 10) {
    t.push_back(s);
    y.push_back(1);
  }
  EXPECT_NEAR(cs::act_boundary(t, y, {1000, 2000}).seconds, 1500, 1e-9);
}

TEST(ActBoundary, ShotsOutsideIntervalIgnored) {
  const std::vector<double> t{100, 1500, 1700, 5000}, y{50, 1, 1, 50};
  EXPECT_DOUBLE_EQ(cs::act_boundary(t, y, {1320, 2400}).seconds, 1600);
}

TEST(ActBoundary, NoMassFallsBackToMidpoint) {
  const std::vector<double> t{1500, 1600}, y{0, 0};
  const auto b = cs::act_boundary(t, y, {1320, 2400});
  EXPECT_TRUE(b.fallback);
  EXPECT_DOUBLE_EQ(b.seconds, 1860);
  const auto empty = cs::act_boundary({}, {}, {1320, 2400});
  EXPECT_TRUE(empty.fallback);
  EXPECT_EQ(empty.shots_in_interval, 0u);
}

TEST(ActBoundary, TimeSumDenominatorMode) {
  const std::vector<double> t{1000, 2000}, y{1, 3};
  const auto b = cs::act_boundary(t, y, {0, 3000}, cs::BoundaryMode::paper);
  EXPECT_DOUBLE_EQ(b.seconds, 7000.0 / 3000.0);
}

TEST(ActBoundary, CentroidStaysInsideInterval) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 7200), w(0, 10);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> t(40), y(40);
    for (auto& x : t) x = u(rng);
    std::sort(t.begin(), t.end());
    for (auto& x : y) x = std::floor(w(rng));
    const cs::Interval iv{1320, 2400};
    const auto b = cs::act_boundary(t, y, iv);
    EXPECT_GE(b.seconds, iv.lo);
    EXPECT_LE(b.seconds, iv.hi);
  }
}

TEST(ThreeAct, DefaultIntervals) {
  EXPECT_DOUBLE_EQ(cs::default_act1_interval().lo, 1320);
  EXPECT_DOUBLE_EQ(cs::default_act1_interval().hi, 2400);
  const auto b2 = cs::default_act2_interval(7200);
  EXPECT_DOUBLE_EQ(b2.lo, 5160);
  EXPECT_DOUBLE_EQ(b2.hi, 6360);
}

TEST(ThreeAct, UniformMassGivesIntervalMidpoints) {
  std::vector<double> t, y;
  for (double s = 0; s <= 7200; s += 10) {
    t.push_back(s);
    y.push_back(2);
  }
  const auto acts = cs::three_act_segment(t, y, 7200, cs::StreamConfig{});
  EXPECT_NEAR(acts.first.seconds, 1860, 1e-9);
  EXPECT_NEAR(acts.second.seconds, 5760, 1e-9);
  EXPECT_TRUE(acts.ordered());
}

TEST(ThreeAct, BaselineMode) {
  cs::StreamConfig cfg;
  cfg.boundary_mode = cs::BoundaryMode::baseline;
  const auto acts = cs::three_act_segment({}, {}, 6600, cfg);
  EXPECT_DOUBLE_EQ(acts.first.seconds, 1500);
  EXPECT_DOUBLE_EQ(acts.second.seconds, 6600 - 1500);
}

TEST(ThreeAct, ShortMovieNeedsExplicitIntervals) {
  cs::StreamConfig cfg;
  EXPECT_THROW(cs::three_act_segment({}, {}, 1800, cfg), cs::ConfigError);
  cfg.act1_interval = cs::Interval{300, 600};
  cfg.act2_interval = cs::Interval{1200, 1500};
  const std::vector<double> t{400, 1300}, y{1, 1};
  const auto acts = cs::three_act_segment(t, y, 1800, cfg);
  EXPECT_DOUBLE_EQ(acts.first.seconds, 400);
  EXPECT_DOUBLE_EQ(acts.second.seconds, 1300);
}

TEST(ThreeAct, IntervalOutsideMovieIsConfigError) {
  cs::StreamConfig cfg;
  cfg.act2_interval = cs::Interval{6000, 8000};
  EXPECT_THROW(cs::three_act_segment({}, {}, 7200, cfg), cs::ConfigError);
  EXPECT_THROW(cs::three_act_segment({}, {}, 0, cs::StreamConfig{}), cs::ConfigError);
}

TEST(Centrality, TwoNodeEdge) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const auto s = cs::eigenvector_centrality(a);
  EXPECT_NEAR(s.importance(0), 0.5, 1e-12);
  EXPECT_NEAR(s.importance(1), 0.5, 1e-12);
  EXPECT_NEAR(s.eigenvalue, 1.0, 1e-12);
  EXPECT_TRUE(s.converged);
}

TEST(Centrality, SingleNode) {
  Eigen::MatrixXd a(1, 1);
  a << 2;
  const auto s = cs::eigenvector_centrality(a);
  EXPECT_DOUBLE_EQ(s.importance(0), 1.0);
  EXPECT_NEAR(s.eigenvalue, 2.0, 1e-12);
}

TEST(Centrality, ThreeNodePath) {
  Eigen::MatrixXd a(3, 3);
  a << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const auto s = cs::eigenvector_centrality(a);
  EXPECT_NEAR(s.importance(0), 0.2929, 1e-3);
  EXPECT_NEAR(s.importance(1), 0.4142, 1e-3);
  EXPECT_NEAR(s.importance(2), 0.2929, 1e-3);
  EXPECT_NEAR(s.importance(0), 1.0 / (2.0 + std::sqrt(2.0)), 1e-9);
  EXPECT_NEAR(s.eigenvalue, std::sqrt(2.0), 1e-9);
  EXPECT_LT(s.residual(a), 1e-8);
}

TEST(Centrality, AllZeroIsUniformAndFlagged) {
  const auto s = cs::eigenvector_centrality(Eigen::MatrixXd::Zero(4, 4));
  EXPECT_TRUE(s.all_zero);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s.importance(i), 0.25);
}

TEST(Centrality, DominantComponentWins) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(0, 1) = a(1, 0) = 2;
  a(2, 3) = a(3, 2) = 1;
  const auto s = cs::eigenvector_centrality(a);
  EXPECT_NEAR(s.importance(0), 0.5, 1e-8);
  EXPECT_NEAR(s.importance(1), 0.5, 1e-8);
  EXPECT_NEAR(s.importance(2), 0.0, 1e-8);
  EXPECT_NEAR(s.eigenvalue, 2.0, 1e-8);
}

TEST(Centrality, RejectsBadInput) {
  EXPECT_THROW(cs::eigenvector_centrality(Eigen::MatrixXd(0, 0)), std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_THROW(cs::eigenvector_centrality(asym), std::invalid_argument);
  Eigen::MatrixXd neg(2, 2);
  neg << 0, -1, -1, 0;
  EXPECT_THROW(cs::eigenvector_centrality(neg), std::invalid_argument);
}

TEST(Centrality, IterationCapReported) {
  Eigen::MatrixXd a(3, 3);
  a << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const auto s = cs::eigenvector_centrality(a, {1e-10, 2});
  EXPECT_FALSE(s.converged);
  EXPECT_EQ(s.iterations, 2);
}

TEST(Centrality, MatchesOracleOnRandomMatrices) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) a(p, q) = a(q, p) = static_cast<double>(rng() % 6);
    a(0, n - 1) = a(n - 1, 0) = a(0, n - 1) + 1;  // never all zero
    const auto s = cs::eigenvector_centrality(a);
    const auto o = cs::oracle_dominant_eig(a);
    ASSERT_TRUE(o.ok) << o.residual;
    EXPECT_LT((s.centrality - o.vector).lpNorm<Eigen::Infinity>(), 1e-6) << a;
    EXPECT_NEAR(s.eigenvalue, o.eigenvalue, 1e-6 * o.eigenvalue);
  }
}

TEST(Centrality, ScalingKeepsRanking) {
  Eigen::MatrixXd a(4, 4);
  a << 3, 5, 0, 1, 5, 0, 2, 2, 0, 2, 1, 0, 1, 2, 0, 4;
  const auto base = cs::eigenvector_centrality(a);
  for (const double k : {2.0, 7.0, 1000.0}) {
    const auto scaled = cs::eigenvector_centrality(k * a);
    EXPECT_EQ(cs::rank_characters(scaled, 4), cs::rank_characters(base, 4));
    EXPECT_EQ(scaled.importance, base.importance);
  }
}

TEST(Rank, OrdersByImportance) {
  const std::vector<double> s{0.7, 0.3};
  EXPECT_EQ(cs::rank_characters(s, 1), std::vector<cs::ClusterId>{0});
  const std::vector<double> tie{0.5, 0.5};
  EXPECT_EQ(cs::rank_characters(tie, 2), (std::vector<cs::ClusterId>{0, 1}));
  const std::vector<double> three{0.2, 0.5, 0.3};
  EXPECT_EQ(cs::rank_characters(three, 10), (std::vector<cs::ClusterId>{1, 2, 0}));
  EXPECT_THROW(cs::rank_characters(three, 0), std::invalid_argument);
}
