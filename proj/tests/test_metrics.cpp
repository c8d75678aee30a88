#include <gtest/gtest.h>

#include "test_support.hpp"

namespace cs = cigstream;
using Counts = std::vector<std::vector<std::size_t>>;

namespace {

cs::Contingency from_labels(std::vector<cs::ClusterId> pred, std::vector<std::string> truth) {
  return cs::make_contingency(pred, truth);
}

}  // namespace

TEST(Contingency, CountsPairs) {
  const auto t = from_labels({0, 0, 1, 1, 1}, {"a", "b", "b", "b", "a"});
  EXPECT_EQ(t.total, 5u);
  EXPECT_EQ(t.counts, (Counts{{1, 1}, {1, 2}}));
  EXPECT_EQ(t.classes, (std::vector<std::string>{"a", "b"}));
}

TEST(Contingency, RejectsEmptyAndMisaligned) {
  EXPECT_THROW(from_labels({}, {}), std::invalid_argument);
  EXPECT_THROW(from_labels({0, 1}, {"a"}), std::invalid_argument);
}

TEST(Accuracy, PerfectClustering) {
  EXPECT_DOUBLE_EQ(cs::clustering_accuracy(from_labels({3, 3, 8}, {"x", "x", "y"})), 100);
}

TEST(Accuracy, OneClusterTwoEqualClasses) {
  EXPECT_DOUBLE_EQ(cs::clustering_accuracy(from_labels({0, 0, 0, 0}, {"a", "a", "b", "b"})), 50);
}

TEST(Accuracy, TwoByTwoTable) {
  const Counts c{{5, 1}, {2, 4}};
  EXPECT_DOUBLE_EQ(cs::clustering_accuracy(cs::contingency_from_counts(c)), 75);
  EXPECT_DOUBLE_EQ(cs::testing::brute_force_accuracy(c), 75);
}

TEST(Accuracy, OverClusteringPenalized) {
  // Four clusters for two classes: only two can be matched.
  const Counts c{{3, 0}, {3, 0}, {0, 3}, {0, 3}};
  EXPECT_DOUBLE_EQ(cs::clustering_accuracy(cs::contingency_from_counts(c)), 50);
}

TEST(Accuracy, MatchesPermutationSearch) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t rows = 1 + rng() % 6;
    const std::size_t cols = 1 + rng() % 6;
    Counts c(rows, std::vector<std::size_t>(cols));
    std::size_t total = 0;
    for (auto& r : c)
      for (auto& v : r) total += v = rng() % 9;
    if (total == 0) c[0][0] = 1;
    EXPECT_NEAR(cs::clustering_accuracy(cs::contingency_from_counts(c)),
                cs::testing::brute_force_accuracy(c), 1e-12);
  }
}

TEST(Vmeasure, PerfectClustering) {
  const auto s = cs::homogeneity_completeness_v(from_labels({0, 0, 1}, {"a", "a", "b"}));
  EXPECT_DOUBLE_EQ(s.homogeneity, 1);
  EXPECT_DOUBLE_EQ(s.completeness, 1);
  EXPECT_DOUBLE_EQ(s.v_measure, 1);
}

TEST(Vmeasure, SingleClusterTwoClasses) {
  const auto s = cs::homogeneity_completeness_v(from_labels({0, 0, 0, 0}, {"a", "b", "a", "b"}));
  EXPECT_DOUBLE_EQ(s.homogeneity, 0);
  EXPECT_DOUBLE_EQ(s.completeness, 1);
  EXPECT_DOUBLE_EQ(s.v_measure, 0);
}

TEST(Vmeasure, TwoSmallClusters) {
  // Clusters {A,A,B} and {B,B}; reference value computed independently.
  const auto s = cs::homogeneity_completeness_v(from_labels({0, 0, 0, 1, 1}, {"A", "A", "B", "B", "B"}));
  EXPECT_NEAR(s.homogeneity, 0.432538, 1e-6);
  EXPECT_NEAR(s.completeness, 0.432538, 1e-6);
  EXPECT_NEAR(s.v_measure, 0.432538, 1e-6);
  const auto o = cs::testing::entropy_oracle({{2, 1}, {0, 2}});
  EXPECT_NEAR(s.homogeneity, o.homogeneity, 1e-12);
}

TEST(Vmeasure, SingleClassSingleCluster) {
  const auto s = cs::homogeneity_completeness_v(from_labels({4, 4}, {"a", "a"}));
  EXPECT_DOUBLE_EQ(s.homogeneity, 1);
  EXPECT_DOUBLE_EQ(s.completeness, 1);
  EXPECT_DOUBLE_EQ(s.v_measure, 1);
}

TEST(Vmeasure, InvariantToRelabeling) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cs::ClusterId> pred(30);
    std::vector<std::string> truth(30);
    for (std::size_t i = 0; i < 30; ++i) {
      pred[i] = rng() % 4;
      truth[i] = std::string(1, static_cast<char>('a' + rng() % 3));
    }
    auto pred2 = pred;
    for (auto& p : pred2) p = 10 - p;
    auto truth2 = truth;
    for (auto& t : truth2) t = "z" + t;
    const auto a = cs::homogeneity_completeness_v(cs::make_contingency(pred, truth));
    const auto b = cs::homogeneity_completeness_v(cs::make_contingency(pred2, truth2));
    EXPECT_NEAR(a.homogeneity, b.homogeneity, 1e-12);
    EXPECT_NEAR(a.completeness, b.completeness, 1e-12);
    EXPECT_NEAR(cs::clustering_accuracy(cs::make_contingency(pred, truth)),
                cs::clustering_accuracy(cs::make_contingency(pred2, truth2)), 1e-12);
    if (a.homogeneity + a.completeness > 0) {
      EXPECT_NEAR(a.v_measure, 2 * a.homogeneity * a.completeness / (a.homogeneity + a.completeness), 1e-12);
    }
    for (const double v : {a.homogeneity, a.completeness, a.v_measure}) {
      EXPECT_GE(v, 0);
      EXPECT_LE(v, 1);
    }
  }
}

TEST(Report, PerfectRunAndPurityTable) {
  const std::vector<cs::ClusterId> pred{0, 0, 1, 1, 2};
  const std::vector<std::string> truth{"a", "a", "b", "b", "c"};
  const auto r = cs::benchmark_report("toy", pred, truth);
  EXPECT_DOUBLE_EQ(r.accuracy, 100);
  EXPECT_DOUBLE_EQ(r.scores.v_measure, 1);
  EXPECT_EQ(r.cluster_count, 3u);
  ASSERT_EQ(r.clusters.size(), 3u);
  EXPECT_EQ(r.clusters[1].majority_label, "b");
  EXPECT_EQ(r.clusters[1].matched_label, "b");
  EXPECT_DOUBLE_EQ(r.clusters[2].purity, 1);
  EXPECT_NE(r.to_text().find("accuracy      100.00 %"), std::string::npos);
  EXPECT_EQ(r.to_csv().substr(0, 7), "dataset");
}

TEST(Report, UnmatchedClusterHasNoLabel) {
  const std::vector<cs::ClusterId> pred{0, 0, 1};
  const std::vector<std::string> truth{"a", "a", "a"};
  const auto r = cs::benchmark_report("toy", pred, truth);
  EXPECT_EQ(r.clusters[0].matched_label, "a");
  EXPECT_TRUE(r.clusters[1].matched_label.empty());
  EXPECT_NEAR(r.accuracy, 200.0 / 3.0, 1e-12);
}

TEST(Report, EmptyPredictionsRejected) {
  EXPECT_THROW(cs::benchmark_report("x", {}, {}), std::invalid_argument);
}
