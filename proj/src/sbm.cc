#include "fairsc/sbm.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairsc/error.h"

namespace fairsc {

namespace {

constexpr double kFractionTol = 1e-9;

bool is_integral(double x) { return std::abs(x - std::round(x)) <= kFractionTol * std::max(1.0, std::abs(x)); }

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kConfig, std::string(name) + " must lie in [0,1]");
  }
}

// Pair-class probability from cluster/group coincidence.
double pair_probability(const FairSbmConfig& cfg, bool same_cluster, bool same_group) {
  if (same_cluster) return same_group ? cfg.a : cfg.c;
  return same_group ? cfg.b : cfg.d;
}

double closed_form_lambda1(const FairSbmConfig& cfg) {
  const double scale = static_cast<double>(cfg.n()) / static_cast<double>(cfg.k() * cfg.h());
  const double hm1 = cfg.h() - 1;
  return scale * ((cfg.a + hm1 * cfg.c) + (cfg.k() - 1) * (cfg.b + hm1 * cfg.d));
}

void require_balanced(const FairSbmConfig& cfg) {
  if (!is_balanced(cfg)) {
    throw Error(ErrorCode::kUnbalanced, "closed forms need |C_l| = n/k and eta_s = 1/h");
  }
}

}  // namespace

std::size_t FairSbmConfig::n() const {
  return std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
}

FairSbmConfig FairSbmConfig::balanced(std::size_t n, int k, int h, double a, double b, double c,
                                      double d) {
  if (k < 1 || h < 1) throw Error(ErrorCode::kConfig, "k and h must be positive");
  const auto kh = static_cast<std::size_t>(k) * static_cast<std::size_t>(h);
  if (n == 0 || n % kh != 0) {
    throw Error(ErrorCode::kConfig,
                "n=" + std::to_string(n) + " is not a positive multiple of k*h=" + std::to_string(kh));
  }
  FairSbmConfig cfg;
  cfg.cluster_sizes.assign(static_cast<std::size_t>(k), n / static_cast<std::size_t>(k));
  cfg.group_fractions.assign(static_cast<std::size_t>(h), 1.0 / static_cast<double>(h));
  cfg.a = a;
  cfg.b = b;
  cfg.c = c;
  cfg.d = d;
  return cfg;
}

void validate(const FairSbmConfig& cfg, const SbmValidation& opts) {
  if (cfg.cluster_sizes.empty()) throw Error(ErrorCode::kConfig, "need at least one cluster");
  if (cfg.group_fractions.empty()) throw Error(ErrorCode::kConfig, "need at least one group");
  for (auto size : cfg.cluster_sizes) {
    if (size == 0) throw Error(ErrorCode::kConfig, "cluster sizes must be positive");
  }
  double total = 0.0;
  for (double eta : cfg.group_fractions) {
    if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::kConfig, "group fractions must lie in (0,1]");
    total += eta;
  }
  if (std::abs(total - 1.0) > kFractionTol) {
    throw Error(ErrorCode::kConfig, "group fractions must sum to 1");
  }
  for (auto size : cfg.cluster_sizes) {
    for (double eta : cfg.group_fractions) {
      if (!is_integral(eta * static_cast<double>(size))) {
        throw Error(ErrorCode::kConfig, "eta_s * |C_l| must be integral (|C_l|=" +
                                            std::to_string(size) + ")");
      }
    }
  }
  check_probability(cfg.a, "a");
  check_probability(cfg.b, "b");
  check_probability(cfg.c, "c");
  check_probability(cfg.d, "d");
  if (opts.strict_probabilities && !(cfg.a > cfg.b && cfg.b > cfg.c && cfg.c > cfg.d)) {
    throw Error(ErrorCode::kConfig, "probabilities must satisfy a > b > c > d >= 0");
  }
}

bool is_balanced(const FairSbmConfig& cfg) {
  if (cfg.cluster_sizes.empty() || cfg.group_fractions.empty()) return false;
  const std::size_t n = cfg.n();
  const auto k = static_cast<std::size_t>(cfg.k());
  const auto h = static_cast<std::size_t>(cfg.h());
  if (n % (k * h) != 0) return false;
  for (auto size : cfg.cluster_sizes) {
    if (size != n / k) return false;
  }
  for (double eta : cfg.group_fractions) {
    if (std::abs(eta - 1.0 / static_cast<double>(h)) > kFractionTol) return false;
  }
  return true;
}

std::size_t block_size(const FairSbmConfig& cfg, int cluster, int group) {
  const double size = cfg.group_fractions[static_cast<std::size_t>(group)] *
                      static_cast<double>(cfg.cluster_sizes[static_cast<std::size_t>(cluster)]);
  return static_cast<std::size_t>(std::llround(size));
}

Clustering canonical_truth(const FairSbmConfig& cfg) {
  Clustering truth{cfg.k(), {}};
  for (int l = 0; l < cfg.k(); ++l) {
    truth.labels.insert(truth.labels.end(), cfg.cluster_sizes[static_cast<std::size_t>(l)], l);
  }
  return truth;
}

GroupAssignment canonical_groups(const FairSbmConfig& cfg) {
  std::vector<int> labels;
  for (int l = 0; l < cfg.k(); ++l) {
    for (int s = 0; s < cfg.h(); ++s) labels.insert(labels.end(), block_size(cfg, l, s), s);
  }
  return GroupAssignment(cfg.h(), std::move(labels));
}

PlantedGraph sample_fair_sbm(const FairSbmConfig& cfg, Rng& rng, const SbmValidation& opts) {
  validate(cfg, opts);
  const Clustering truth = canonical_truth(cfg);
  const GroupAssignment groups = canonical_groups(cfg);
  const std::size_t n = truth.size();

  // position[i] is the output index of canonical vertex i.
  std::vector<std::size_t> position(n);
  std::iota(position.begin(), position.end(), std::size_t{0});
  std::shuffle(position.begin(), position.end(), rng);

  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = pair_probability(cfg, truth.labels[i] == truth.labels[j], groups[i] == groups[j]);
      if (unit(rng) < p) {
        const auto pi = static_cast<Eigen::Index>(position[i]);
        const auto pj = static_cast<Eigen::Index>(position[j]);
        w(pi, pj) = 1.0;
        w(pj, pi) = 1.0;
      }
    }
  }

  std::vector<int> truth_labels(n);
  std::vector<int> group_labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth_labels[position[i]] = truth.labels[i];
    group_labels[position[i]] = groups[i];
  }
  return {Graph(std::move(w)), Clustering{cfg.k(), std::move(truth_labels)},
          GroupAssignment(cfg.h(), std::move(group_labels))};
}

Eigen::MatrixXd expected_adjacency(const FairSbmConfig& cfg, const SbmValidation& opts) {
  validate(cfg, opts);
  require_balanced(cfg);
  const Clustering truth = canonical_truth(cfg);
  const GroupAssignment groups = canonical_groups(cfg);
  const auto n = static_cast<Eigen::Index>(truth.size());
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(j);
      w(i, j) = i == j ? 0.0
                       : pair_probability(cfg, truth.labels[a] == truth.labels[b], groups[a] == groups[b]);
    }
  }
  return w;
}

Eigen::MatrixXd expected_laplacian(const FairSbmConfig& cfg, const SbmValidation& opts) {
  const Eigen::MatrixXd w = expected_adjacency(cfg, opts);
  const double degree = closed_form_lambda1(cfg) - cfg.a;
  Eigen::MatrixXd l = -w;
  l.diagonal().setConstant(degree);
  return l;
}

SpectrumOracle theoretical_spectrum(const FairSbmConfig& cfg) {
  validate(cfg);
  require_balanced(cfg);
  const double n = static_cast<double>(cfg.n());
  const int k = cfg.k();
  const int h = cfg.h();
  const double scale = n / static_cast<double>(k * h);
  const double a = cfg.a, b = cfg.b, c = cfg.c, d = cfg.d;
  const double hm1 = h - 1;

  SpectrumOracle o;
  o.lambda1 = closed_form_lambda1(cfg);
  o.lambda_group = scale * ((a - c) + (k - 1) * (b - d));
  o.lambda_cluster = scale * ((a + hm1 * c) - (b + hm1 * d));
  o.lambda_mixed = scale * ((a - c) - (b - d));

  const std::size_t size = cfg.n();
  const auto groups_extra = static_cast<std::size_t>(h - 1);
  const auto clusters_extra = static_cast<std::size_t>(k - 1);
  const auto mixed = groups_extra * clusters_extra;
  const std::size_t zeros = size - static_cast<std::size_t>(k * h);

  o.adjacency.push_back(o.lambda1);
  o.adjacency.insert(o.adjacency.end(), groups_extra, o.lambda_group);
  o.adjacency.insert(o.adjacency.end(), clusters_extra, o.lambda_cluster);
  o.adjacency.insert(o.adjacency.end(), mixed, o.lambda_mixed);
  o.adjacency.insert(o.adjacency.end(), zeros, 0.0);

  o.rank = 1 + static_cast<int>(groups_extra + clusters_extra);
  if (std::abs(o.lambda_mixed) > 1e-12 * o.lambda1) o.rank += static_cast<int>(mixed);

  // Z spans the complement of the lambda_2..lambda_h eigenspace, and
  // Z^T L Z = lambda_1 I - Z^T W~ Z.
  o.constrained_laplacian.push_back(0.0);
  o.constrained_laplacian.insert(o.constrained_laplacian.end(), clusters_extra,
                                 o.lambda1 - o.lambda_cluster);
  o.constrained_laplacian.insert(o.constrained_laplacian.end(), mixed, o.lambda1 - o.lambda_mixed);
  o.constrained_laplacian.insert(o.constrained_laplacian.end(), zeros, o.lambda1);
  std::sort(o.constrained_laplacian.begin(), o.constrained_laplacian.end());

  o.constrained_lowest.push_back(0.0);
  o.constrained_lowest.insert(o.constrained_lowest.end(), clusters_extra, o.lambda1 - o.lambda_cluster);
  return o;
}

Eigen::MatrixXd canonical_embedding(std::size_t n, int k) {
  if (k < 1 || n == 0 || n % static_cast<std::size_t>(k) != 0) {
    throw Error(ErrorCode::kIndivisible, "k=" + std::to_string(k) + " does not divide n=" + std::to_string(n));
  }
  const auto rows = static_cast<Eigen::Index>(n);
  const auto block = rows / k;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows, k);
  t.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  for (int i = 1; i < k; ++i) {
    const double tail = k - i;
    const double q = 1.0 / std::sqrt(static_cast<double>(block) * tail * tail +
                                     static_cast<double>(block) * tail);
    t.col(i).segment(block * (i - 1), block).setConstant(tail * q);
    t.col(i).tail(block * (k - i)).setConstant(-q);
  }
  return t;
}

GroupAssignment perturb_groups(const GroupAssignment& groups, double p, Rng& rng) {
  if (groups.h() != 2) {
    throw Error(ErrorCode::kUnsupportedGroupCount,
                "perturbation is defined for two groups, got h=" + std::to_string(groups.h()));
  }
  check_probability(p, "p");
  std::vector<int> labels = groups.labels();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int& label : labels) {
    if (label == 0 && unit(rng) < p) label = 1;
  }
  return GroupAssignment::compacted(labels);
}

PlantedGraph counterexample_graph(int scale, double a, double b, Rng& rng) {
  if (scale < 1) throw Error(ErrorCode::kConfig, "scale must be >= 1");
  check_probability(a, "a");
  check_probability(b, "b");
  if (!(a > b)) throw Error(ErrorCode::kConfig, "need a > b");
  const auto block = static_cast<std::size_t>(3 * scale);
  const std::size_t n = 4 * block;
  std::vector<int> cluster(n), group(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t which = i / block;  // 0: C1∩V1, 1: C1∩V2, 2: C2∩V1, 3: C2∩V2
    cluster[i] = which < 2 ? 0 : 1;
    group[i] = (which % 2 == 0) ? 0 : 1;
  }
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool strong = cluster[i] == cluster[j] || (group[i] == 1 && group[j] == 1);
      if (unit(rng) < (strong ? a : b)) {
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
      }
    }
  }
  return {Graph(std::move(w)), Clustering{2, std::move(cluster)}, GroupAssignment(2, std::move(group))};
}

}  // namespace fairsc
