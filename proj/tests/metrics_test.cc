#include "fairsc/metrics.h"

#include <gtest/gtest.h>

#include "fairsc/error.h"
#include "oracle.h"

namespace fairsc {
namespace {

TEST(Misclassification, Examples) {
  const Clustering truth{2, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}};
  EXPECT_EQ(misclassification_error(truth, truth), 0.0);
  Clustering swapped = truth;
  for (int& l : swapped.labels) l = 1 - l;
  EXPECT_EQ(misclassification_error(swapped, truth), 0.0);
  Clustering one_off = truth;
  one_off.labels[0] = 1;
  EXPECT_DOUBLE_EQ(misclassification_error(one_off, truth), 0.1);
}

TEST(Misclassification, Errors) {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code([] { misclassification_error(Clustering{2, {0, 1}}, Clustering{2, {0, 1, 1}}); }),
            ErrorCode::kLengthMismatch);
  EXPECT_EQ(code([] { misclassification_error(Clustering{3, {0, 1, 2}}, Clustering{2, {0, 1, 1}}); }),
            ErrorCode::kKMismatch);
}

TEST(Misclassification, MatchesBruteForceAndInvariances) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + trial % 6;
    const std::size_t n = static_cast<std::size_t>(k) + static_cast<std::size_t>(trial) % 25;
    std::uniform_int_distribution<int> label(0, k - 1);
    std::vector<int> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = label(rng);
      truth[i] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    const double e = misclassification_error(Clustering{k, pred}, Clustering{k, truth});
    EXPECT_EQ(e, oracle::brute_force_error(pred, truth, k));
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
    if (n % static_cast<std::size_t>(k) == 0) EXPECT_LE(e, (k - 1.0) / k + 1e-15);

    std::vector<int> sigma(static_cast<std::size_t>(k));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::vector<int> p2 = pred, t2 = truth;
    for (int& l : p2) l = sigma[static_cast<std::size_t>(l)];
    EXPECT_EQ(misclassification_error(Clustering{k, p2}, Clustering{k, truth}), e);
    for (int& l : t2) l = sigma[static_cast<std::size_t>(l)];
    EXPECT_EQ(misclassification_error(Clustering{k, pred}, Clustering{k, t2}), e);
  }
}

TEST(Assignment, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> value(-5, 20);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 6;
    std::vector<std::vector<double>> w(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
    for (auto& row : w)
      for (double& x : row) x = value(rng);
    const auto assign = max_weight_assignment(w);
    ASSERT_EQ(assign.size(), static_cast<std::size_t>(k));
    std::vector<int> used = assign;
    std::sort(used.begin(), used.end());
    for (int i = 0; i < k; ++i) EXPECT_EQ(used[static_cast<std::size_t>(i)], i);
    double got = 0.0;
    for (int i = 0; i < k; ++i) got += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1e300;
    do {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(got, best);
  }
}

TEST(Report, TwoCliquesExact) {
  const Graph g(oracle::cliques({4, 4}));
  const GroupAssignment groups(2, {0, 1, 0, 1, 0, 1, 0, 1});
  const Clustering c{2, {0, 0, 0, 0, 1, 1, 1, 1}};
  const ClusteringReport r = report(g, c, groups, &c);
  ASSERT_TRUE(r.error.has_value());
  EXPECT_EQ(*r.error, 0.0);
  EXPECT_EQ(r.balance.average, 1.0);
  EXPECT_EQ(r.ratio_cut, 0.0);
  EXPECT_EQ(r.ncut, 0.0);

  Clustering swapped = c;
  for (int& l : swapped.labels) l = 1 - l;
  const ClusteringReport s = report(g, swapped, groups, &c);
  EXPECT_EQ(*s.error, *r.error);
  EXPECT_EQ(s.balance.average, r.balance.average);
  EXPECT_EQ(s.ratio_cut, r.ratio_cut);
  EXPECT_EQ(s.ncut, r.ncut);
}

TEST(Report, K4) {
  const Graph g(oracle::cliques({4}));
  const ClusteringReport r = report(g, Clustering{2, {0, 0, 1, 1}}, GroupAssignment(2, {0, 1, 0, 1}));
  EXPECT_FALSE(r.error.has_value());
  EXPECT_DOUBLE_EQ(r.ratio_cut, 4.0);
  EXPECT_NEAR(r.ncut, 4.0 / 3.0, 1e-15);
  EXPECT_EQ(r.balance.average, 1.0);
}

TEST(Report, ZeroVolumeGivesNanNcut) {
  const Graph g = Graph::empty(4);
  const ClusteringReport r = report(g, Clustering{2, {0, 0, 1, 1}}, GroupAssignment(2, {0, 1, 0, 1}));
  EXPECT_EQ(r.ratio_cut, 0.0);
  EXPECT_TRUE(std::isnan(r.ncut));
}

}  // namespace
}  // namespace fairsc
