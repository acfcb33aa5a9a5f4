#include "fairsc/sbm.h"

#include <gtest/gtest.h>

#include "fairsc/error.h"
#include "fairsc/linalg.h"
#include "fairsc/metrics.h"
#include "fairsc/spectral.h"
#include "oracle.h"

namespace fairsc {
namespace {

const SbmValidation kLoose{false};

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

double max_sorted_gap(std::vector<double> a, const Eigen::VectorXd& b) {
  a = sorted(a);
  std::vector<double> c(b.data(), b.data() + b.size());
  c = sorted(c);
  EXPECT_EQ(a.size(), c.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), c.size()); ++i) worst = std::max(worst, std::abs(a[i] - c[i]));
  return worst;
}

TEST(Config, ValidationAndBalance) {
  FairSbmConfig cfg = FairSbmConfig::balanced(12, 2, 3, 0.4, 0.3, 0.2, 0.1);
  EXPECT_NO_THROW(validate(cfg));
  EXPECT_TRUE(is_balanced(cfg));
  EXPECT_EQ(block_size(cfg, 1, 2), 2u);
  cfg.b = 0.5;
  EXPECT_THROW(validate(cfg), Error);
  EXPECT_NO_THROW(validate(cfg, kLoose));
  cfg.b = 1.5;
  EXPECT_THROW(validate(cfg, kLoose), Error);
  EXPECT_THROW(FairSbmConfig::balanced(10, 2, 3, 0.4, 0.3, 0.2, 0.1), Error);

  FairSbmConfig uneven;
  uneven.cluster_sizes = {4, 8};
  uneven.group_fractions = {0.25, 0.75};
  uneven.a = 0.4, uneven.b = 0.3, uneven.c = 0.2, uneven.d = 0.1;
  EXPECT_NO_THROW(validate(uneven));
  EXPECT_FALSE(is_balanced(uneven));
  EXPECT_EQ(block_size(uneven, 1, 1), 6u);
  uneven.group_fractions = {0.3, 0.7};
  EXPECT_THROW(validate(uneven), Error);  // 0.3 * 4 is not integral
  uneven.group_fractions = {0.25, 0.5};
  EXPECT_THROW(validate(uneven), Error);  // fractions must sum to 1
}

TEST(Sample, ExtremeProbabilities) {
  Rng rng(1);
  const auto zero = sample_fair_sbm(FairSbmConfig::balanced(12, 2, 2, 0, 0, 0, 0), rng, kLoose);
  EXPECT_EQ(zero.graph.edge_count(), 0u);
  const auto one = sample_fair_sbm(FairSbmConfig::balanced(12, 2, 2, 1, 1, 1, 1), rng, kLoose);
  EXPECT_EQ(one.graph.edge_count(), 66u);
}

// With a single class switched on, edges appear exactly on that class.
TEST(Sample, PairClassesMatchReturnedLabels) {
  for (int cls = 0; cls < 4; ++cls) {
    double p[4] = {0, 0, 0, 0};
    p[cls] = 1.0;
    Rng rng(static_cast<std::uint64_t>(cls));
    const auto s = sample_fair_sbm(FairSbmConfig::balanced(24, 3, 2, p[0], p[1], p[2], p[3]), rng, kLoose);
    for (std::size_t i = 0; i < 24; ++i)
      for (std::size_t j = 0; j < 24; ++j) {
        if (i == j) continue;
        const bool same_cluster = s.truth.labels[i] == s.truth.labels[j];
        const bool same_group = s.groups[i] == s.groups[j];
        const int expected = same_cluster ? (same_group ? 0 : 2) : (same_group ? 1 : 3);
        EXPECT_EQ(s.graph.weight(i, j) > 0, expected == cls);
      }
  }
}

TEST(Sample, TruthAndGroupsAreConsistentAndPermuted) {
  const FairSbmConfig cfg = FairSbmConfig::balanced(60, 3, 2, 0.5, 0.4, 0.3, 0.2);
  Rng rng(5);
  const auto s = sample_fair_sbm(cfg, rng);
  EXPECT_EQ(s.truth.cluster_sizes(), (std::vector<std::size_t>{20, 20, 20}));
  EXPECT_EQ(s.groups.group_sizes(), (std::vector<std::size_t>{30, 30}));
  EXPECT_TRUE(is_proportional(s.truth, s.groups));
  EXPECT_NE(s.truth.labels, canonical_truth(cfg).labels);
}

TEST(Sample, EdgeFrequenciesMatchProbabilities) {
  const FairSbmConfig cfg = FairSbmConfig::balanced(1000, 2, 2, 0.25, 0.2, 0.15, 0.1);
  Rng rng(2024);
  const auto s = sample_fair_sbm(cfg, rng);
  double edges[4] = {0, 0, 0, 0}, pairs[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < 1000; ++i)
    for (std::size_t j = i + 1; j < 1000; ++j) {
      const bool sc = s.truth.labels[i] == s.truth.labels[j];
      const bool sg = s.groups[i] == s.groups[j];
      const int cls = sc ? (sg ? 0 : 2) : (sg ? 1 : 3);
      pairs[cls] += 1;
      edges[cls] += s.graph.weight(i, j);
    }
  const double prob[4] = {0.25, 0.2, 0.15, 0.1};
  for (int c = 0; c < 4; ++c) {
    const double se = std::sqrt(prob[c] * (1 - prob[c]) / pairs[c]);
    EXPECT_LE(std::abs(edges[c] / pairs[c] - prob[c]), 3 * se) << c;
  }
}

TEST(Sample, Determinism) {
  const FairSbmConfig cfg = FairSbmConfig::balanced(40, 2, 2, 0.5, 0.4, 0.3, 0.2);
  Rng a(3), b(3);
  const auto x = sample_fair_sbm(cfg, a);
  const auto y = sample_fair_sbm(cfg, b);
  EXPECT_EQ(x.graph.weights(), y.graph.weights());
  EXPECT_EQ(x.truth.labels, y.truth.labels);
  EXPECT_EQ(x.groups.labels(), y.groups.labels());
}

TEST(ExpectedAdjacency, Examples) {
  const FairSbmConfig cfg = FairSbmConfig::balanced(8, 2, 2, 0.8, 0.6, 0.4, 0.2);
  const Eigen::MatrixXd w = expected_adjacency(cfg);
  EXPECT_EQ(w(0, 1), 0.8);
  EXPECT_EQ(w(0, 2), 0.4);
  EXPECT_EQ(w(0, 4), 0.6);
  EXPECT_EQ(w(0, 6), 0.2);
  EXPECT_EQ(w, w.transpose());
  EXPECT_EQ(w.diagonal(), Eigen::VectorXd::Zero(8));

  const Eigen::MatrixXd single = expected_adjacency(FairSbmConfig::balanced(5, 1, 1, 0.3, 0.2, 0.1, 0.0), kLoose);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Constant(5, 5, 0.3);
  expected.diagonal().setZero();
  EXPECT_EQ(single, expected);

  FairSbmConfig uneven;
  uneven.cluster_sizes = {4, 8};
  uneven.group_fractions = {0.5, 0.5};
  uneven.a = 0.4, uneven.b = 0.3, uneven.c = 0.2, uneven.d = 0.1;
  try {
    expected_adjacency(uneven);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnbalanced);
  }
}

TEST(TheoreticalSpectrum, SmallExample) {
  const FairSbmConfig cfg = FairSbmConfig::balanced(8, 2, 2, 0.8, 0.6, 0.4, 0.2);
  const SpectrumOracle o = theoretical_spectrum(cfg);
  const std::vector<double> expected = {4.0, 1.6, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0};
  ASSERT_EQ(o.adjacency.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(o.adjacency[i], expected[i], 1e-12);
  EXPECT_NEAR(o.lambda1, 4.0, 1e-12);
  // Independent dense check.
  const auto j = oracle::jacobi_eigen(expected_adjacency(cfg) + 0.8 * Eigen::MatrixXd::Identity(8, 8));
  EXPECT_LE(max_sorted_gap(expected, j.values), 1e-10);
  EXPECT_EQ(o.rank, 3);
}

TEST(TheoreticalSpectrum, OracleAgreementOnAllSmallBalancedConfigs) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int configs = 0;
  for (std::size_t n = 2; n <= 200; n += (n < 60 ? 1 : 12)) {
    for (int k = 1; k <= 5; ++k)
      for (int h = 1; h <= 4; ++h) {
        if (n % static_cast<std::size_t>(k * h) != 0 || static_cast<std::size_t>(k * h) > n) continue;
        if ((configs++) % 3 != 0) continue;
        double p[4];
        for (double& x : p) x = u(rng);
        std::sort(p, p + 4, std::greater<>());
        const FairSbmConfig cfg = FairSbmConfig::balanced(n, k, h, p[0], p[1], p[2], p[3]);
        const SpectrumOracle o = theoretical_spectrum(cfg);
        const Eigen::MatrixXd wt = expected_adjacency(cfg) + cfg.a * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const Eigen::VectorXd got = n <= 40 ? oracle::jacobi_eigen(wt).values : symmetric_eigen(wt).values;
        EXPECT_LE(max_sorted_gap(o.adjacency, got), 1e-8) << "n=" << n << " k=" << k << " h=" << h;
      }
  }
  EXPECT_GT(configs, 100);
}

TEST(TheoreticalSpectrum, OrderingsOnRandomConfigs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double p[4];
    for (double& x : p) x = u(rng);
    std::sort(p, p + 4, std::greater<>());
    const int k = 2 + trial % 4, h = 2 + trial % 3;
    const SpectrumOracle o = theoretical_spectrum(FairSbmConfig::balanced(static_cast<std::size_t>(k * h * 3), k, h, p[0], p[1], p[2], p[3]));
    EXPECT_GT(o.lambda1, o.lambda_group);
    EXPECT_GT(o.lambda_group, 0.0);
    EXPECT_GT(o.lambda_cluster, std::abs(o.lambda_mixed));
  }
}

TEST(TheoreticalSpectrum, RankDropWhenDifferencesMatch) {
  // a - c = b - d
  const FairSbmConfig cfg = FairSbmConfig::balanced(36, 3, 2, 0.7, 0.5, 0.4, 0.2);
  const SpectrumOracle o = theoretical_spectrum(cfg);
  EXPECT_NEAR(o.lambda_mixed, 0.0, 1e-12);
  EXPECT_EQ(o.rank, 3 + 2 - 1);
  const Eigen::MatrixXd wt = expected_adjacency(cfg) + 0.7 * Eigen::MatrixXd::Identity(36, 36);
  const auto j = oracle::jacobi_eigen(wt);
  EXPECT_EQ((j.values.array().abs() > 1e-8 * j.values.cwiseAbs().maxCoeff()).count(), 4);
}

TEST(TheoreticalSpectrum, Errors) {
  EXPECT_THROW(theoretical_spectrum(FairSbmConfig::balanced(8, 2, 2, 0.2, 0.6, 0.4, 0.2)), Error);
  FairSbmConfig uneven;
  uneven.cluster_sizes = {4, 8};
  uneven.group_fractions = {0.5, 0.5};
  uneven.a = 0.4, uneven.b = 0.3, uneven.c = 0.2, uneven.d = 0.1;
  EXPECT_THROW(theoretical_spectrum(uneven), Error);
}

// Each centred group indicator is an eigenvector of W~ with eigenvalue
// lambda_2, so F's columns live in the lambda_2..lambda_h eigenspace.
TEST(ConstraintSpace, FairnessColumnsAreGroupEigenvectors) {
  for (auto [n, k, h] : {std::tuple{24, 2, 2}, {60, 3, 2}, {120, 4, 3}, {36, 2, 3}}) {
    const FairSbmConfig cfg = FairSbmConfig::balanced(static_cast<std::size_t>(n), k, h, 0.8, 0.6, 0.4, 0.2);
    const SpectrumOracle o = theoretical_spectrum(cfg);
    const Eigen::MatrixXd wt = expected_adjacency(cfg) + cfg.a * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd f = fairness_matrix(canonical_groups(cfg));
    EXPECT_LE((wt * f - o.lambda_group * f).cwiseAbs().maxCoeff(), 1e-12);
    // f^(s) - (1/h) 1 = ((h-1)/h) v_{1+s} with v_{1+s} = 1 on V_s and -1/(h-1) elsewhere.
    for (int s = 0; s < h - 1; ++s) {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = canonical_groups(cfg)[static_cast<std::size_t>(i)] == s ? 1.0 : -1.0 / (h - 1);
      EXPECT_LE((f.col(s) - (h - 1.0) / h * v).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(ConstrainedLaplacian, LowestEigenvaluesMatchClosedForm) {
  for (auto [n, k, h] : {std::tuple{24, 2, 2}, {60, 3, 2}, {120, 4, 3}, {48, 4, 2}}) {
    const FairSbmConfig cfg = FairSbmConfig::balanced(static_cast<std::size_t>(n), k, h, 0.8, 0.6, 0.4, 0.2);
    const SpectrumOracle o = theoretical_spectrum(cfg);
    const Eigen::MatrixXd z = nullspace_basis(fairness_matrix(canonical_groups(cfg)).transpose());
    const Eigen::MatrixXd m = z.transpose() * expected_laplacian(cfg) * z;
    const auto j = oracle::jacobi_eigen(m);
    ASSERT_EQ(o.constrained_lowest.size(), static_cast<std::size_t>(k));
    EXPECT_NEAR(o.constrained_lowest[0], 0.0, 0.0);
    for (int i = 0; i < k; ++i) EXPECT_NEAR(j.values(i), o.constrained_lowest[static_cast<std::size_t>(i)], 1e-8);
    EXPECT_GT(j.values(k) - j.values(k - 1), 1e-3);
    EXPECT_LE(max_sorted_gap(o.constrained_laplacian, j.values), 1e-8);
  }
}

TEST(ExpectedLaplacian, ConstantDegree) {
  const FairSbmConfig cfg = FairSbmConfig::balanced(24, 2, 3, 0.8, 0.6, 0.4, 0.2);
  const Eigen::MatrixXd l = expected_laplacian(cfg);
  const double lambda1 = theoretical_spectrum(cfg).lambda1;
  EXPECT_LE((l.diagonal().array() - (lambda1 - 0.8)).abs().maxCoeff(), 1e-12);
  EXPECT_LE(l.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CanonicalEmbedding, OrthonormalAndRowDistances) {
  for (auto [n, k] : {std::pair{8, 2}, {12, 3}, {20, 5}}) {
    const Eigen::MatrixXd t = canonical_embedding(static_cast<std::size_t>(n), k);
    EXPECT_LE((t.transpose() * t - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-12);
    const int block = n / k;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double dist = (t.row(i) - t.row(j)).norm();
        if (i / block == j / block) {
          EXPECT_EQ(dist, 0.0);
        } else {
          EXPECT_NEAR(dist, std::sqrt(2.0 * k / n), 1e-12);
        }
      }
  }
  const Eigen::MatrixXd t = canonical_embedding(8, 2);
  EXPECT_NEAR((t.row(0) - t.row(7)).norm(), 0.70710678118654752, 1e-12);
  EXPECT_THROW(canonical_embedding(9, 2), Error);
}

// T spans the k-dimensional bottom eigenspace of Z^T L Z lifted back by Z.
TEST(CanonicalEmbedding, SpansConstrainedEigenspace) {
  const FairSbmConfig cfg = FairSbmConfig::balanced(60, 3, 2, 0.8, 0.6, 0.4, 0.2);
  const Eigen::MatrixXd z = nullspace_basis(fairness_matrix(canonical_groups(cfg)).transpose());
  const EigenPairs e = smallest_eigenpairs(z.transpose() * expected_laplacian(cfg) * z, 3);
  const Eigen::MatrixXd h = z * e.vectors;
  const Eigen::MatrixXd t = canonical_embedding(60, 3);
  EXPECT_LE((oracle::projector(h) - oracle::projector(t)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Perturb, Extremes) {
  const GroupAssignment g(2, {0, 0, 1, 1, 0, 1});
  Rng rng(1);
  EXPECT_EQ(perturb_groups(g, 0.0, rng).labels(), g.labels());
  const GroupAssignment all = perturb_groups(g, 1.0, rng);
  EXPECT_EQ(all.h(), 1);
  EXPECT_EQ(all.labels(), std::vector<int>(6, 0));
  EXPECT_THROW(perturb_groups(GroupAssignment(3, {0, 1, 2}), 0.5, rng), Error);
  EXPECT_THROW(perturb_groups(g, 1.5, rng), Error);
}

TEST(Perturb, BinomialConcentration) {
  std::vector<int> labels(2000);
  for (std::size_t i = 0; i < 2000; ++i) labels[i] = static_cast<int>(i % 2);
  const GroupAssignment g(2, labels);
  Rng rng(12);
  const GroupAssignment p = perturb_groups(g, 0.5, rng);
  std::size_t moved = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    if (labels[i] == 1) EXPECT_EQ(p[i], 1);
    if (labels[i] == 0 && p[i] == 1) ++moved;
  }
  EXPECT_LE(std::abs(static_cast<double>(moved) - 500.0), 3 * std::sqrt(1000 * 0.25));
}

TEST(Counterexample, DeterministicPattern) {
  Rng rng(0);
  const PlantedGraph p = counterexample_graph(1, 1.0, 0.0, rng);
  ASSERT_EQ(p.graph.size(), 12u);
  // Blocks of three: C1∩V1, C1∩V2, C2∩V1, C2∩V2.
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      if (i == j) continue;
      const bool same_cluster = i / 6 == j / 6;
      const bool both_v2 = (i / 3) % 2 == 1 && (j / 3) % 2 == 1;
      EXPECT_EQ(p.graph.weight(i, j), same_cluster || both_v2 ? 1.0 : 0.0);
    }
  EXPECT_EQ(p.truth.labels, (std::vector<int>{0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(p.groups.labels(), (std::vector<int>{0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1}));
  EXPECT_THROW(counterexample_graph(1, 0.1, 0.2, rng), Error);
  EXPECT_THROW(counterexample_graph(0, 0.9, 0.1, rng), Error);
}

}  // namespace
}  // namespace fairsc
