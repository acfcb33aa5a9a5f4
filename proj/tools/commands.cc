#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairsc/csv.h"
#include "fairsc/error.h"
#include "fairsc/fairness.h"
#include "fairsc/graph.h"
#include "fairsc/linalg.h"
#include "fairsc/metrics.h"
#include "fairsc/sbm.h"
#include "fairsc/spectral.h"

namespace fairsc::cli {

namespace {

constexpr double kSpectrumTol = 1e-8;
constexpr std::size_t kSpectrumMaxN = 500;

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kIsolatedVertex:
    case ErrorCode::kConvergenceFailure:
    case ErrorCode::kNotPositiveDefinite: return kExitPrecondition;
    default: return kExitInvalid;
  }
}

struct SbmFlags {
  std::optional<std::size_t> n;
  std::optional<int> k;
  std::optional<int> h;
  double a = 0.25;
  double b = 0.2;
  double c = 0.15;
  double d = 0.1;
  std::vector<double> eta;
  std::vector<double> cluster_sizes;
  bool allow_degenerate = false;
};

void add_sbm_options(CLI::App& app, SbmFlags& f) {
  app.add_option("--n", f.n, "vertex count");
  app.add_option("--k", f.k, "cluster count (default 2)");
  app.add_option("--h", f.h, "group count (default 2)");
  app.add_option("--a", f.a, "P(edge | same cluster, same group)")->capture_default_str();
  app.add_option("--b", f.b, "P(edge | other cluster, same group)")->capture_default_str();
  app.add_option("--c", f.c, "P(edge | same cluster, other group)")->capture_default_str();
  app.add_option("--d", f.d, "P(edge | other cluster, other group)")->capture_default_str();
  app.add_option("--eta", f.eta, "group fractions, comma separated (default uniform)")
      ->delimiter(',');
  app.add_option("--cluster-sizes", f.cluster_sizes,
                 "relative cluster sizes, scaled to n (default equal)")
      ->delimiter(',');
}

// Resolves flags into a configuration, optionally overriding n and k.
FairSbmConfig build_config(const SbmFlags& f, std::optional<std::size_t> n_override = {},
                           std::optional<int> k_override = {}) {
  int k = 2;
  if (k_override) {
    k = *k_override;
  } else if (f.k) {
    k = *f.k;
  } else if (!f.cluster_sizes.empty()) {
    k = static_cast<int>(f.cluster_sizes.size());
  }
  int h = f.h ? *f.h : (f.eta.empty() ? 2 : static_cast<int>(f.eta.size()));
  if (k < 1 || h < 1) throw Error(ErrorCode::kConfig, "k and h must be positive");
  if (!f.cluster_sizes.empty() && static_cast<int>(f.cluster_sizes.size()) != k) {
    throw Error(ErrorCode::kConfig, "--cluster-sizes has " + std::to_string(f.cluster_sizes.size()) +
                                        " entries for k=" + std::to_string(k));
  }
  if (!f.eta.empty() && static_cast<int>(f.eta.size()) != h) {
    throw Error(ErrorCode::kConfig,
                "--eta has " + std::to_string(f.eta.size()) + " entries for h=" + std::to_string(h));
  }

  const double weight_sum = std::accumulate(f.cluster_sizes.begin(), f.cluster_sizes.end(), 0.0);
  std::size_t n = 0;
  if (n_override) {
    n = *n_override;
  } else if (f.n) {
    n = *f.n;
  } else if (!f.cluster_sizes.empty()) {
    n = static_cast<std::size_t>(std::llround(weight_sum));
  } else {
    throw Error(ErrorCode::kConfig, "--n is required");
  }

  FairSbmConfig cfg;
  cfg.a = f.a;
  cfg.b = f.b;
  cfg.c = f.c;
  cfg.d = f.d;
  cfg.group_fractions = f.eta.empty() ? std::vector<double>(static_cast<std::size_t>(h), 1.0 / h) : f.eta;
  if (f.cluster_sizes.empty()) {
    if (n % static_cast<std::size_t>(k) != 0) {
      throw Error(ErrorCode::kConfig, "k=" + std::to_string(k) + " does not divide n=" + std::to_string(n));
    }
    cfg.cluster_sizes.assign(static_cast<std::size_t>(k), n / static_cast<std::size_t>(k));
  } else {
    for (double w : f.cluster_sizes) {
      if (!(w > 0.0)) throw Error(ErrorCode::kConfig, "cluster sizes must be positive");
      const double size = w * static_cast<double>(n) / weight_sum;
      if (std::abs(size - std::round(size)) > 1e-9 * std::max(1.0, size)) {
        throw Error(ErrorCode::kConfig, "cluster size " + format_real(size) + " is not integral");
      }
      cfg.cluster_sizes.push_back(static_cast<std::size_t>(std::llround(size)));
    }
  }
  validate(cfg, SbmValidation{!f.allow_degenerate});
  return cfg;
}

const std::vector<std::string> kClusterHeader = {"algo", "k", "h", "n", "error", "balance_avg",
                                                 "ratiocut", "ncut", "runtime_ms"};
const std::vector<std::string> kExperimentHeader = {"sweep_var", "value", "trial", "algo", "error",
                                                    "balance_avg", "ratiocut", "ncut", "runtime_ms"};

struct TimedRun {
  SpectralResult result;
  double runtime_ms = 0.0;
};

TimedRun timed_spectral(Algorithm algorithm, const Graph& g, int k, const GroupAssignment* groups,
                        Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  TimedRun run{run_spectral(algorithm, g, k, groups, rng), 0.0};
  const auto stop = std::chrono::steady_clock::now();
  run.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return run;
}

// ---------------------------------------------------------------- generate

struct GenerateFlags {
  SbmFlags sbm;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  const FairSbmConfig cfg = build_config(f.sbm);
  Rng rng(f.seed);
  const PlantedGraph planted = sample_fair_sbm(cfg, rng, SbmValidation{!f.sbm.allow_degenerate});
  write_file(f.out + ".edges", format_edge_list(planted.graph));
  write_file(f.out + ".groups", format_labels(planted.groups.labels()));
  write_file(f.out + ".truth", format_labels(planted.truth.labels));
  out << "n=" << planted.graph.size() << " edges=" << planted.graph.edge_count() << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------- cluster

struct ClusterFlags {
  std::string graph;
  std::string groups;
  std::string truth;
  std::string algo;
  int k = 2;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::size_t> n;
  bool largest_component = false;
};

template <typename T>
std::vector<T> restrict_to(const std::vector<T>& values, const std::vector<std::size_t>& keep) {
  std::vector<T> out;
  out.reserve(keep.size());
  for (auto i : keep) out.push_back(values[i]);
  return out;
}

int cmd_cluster(const ClusterFlags& f, std::ostream& out, std::ostream& err) {
  const auto algorithm = parse_algorithm(f.algo);
  if (!algorithm) throw Error(ErrorCode::kConfig, "unknown algorithm '" + f.algo + "'");
  if (is_fair(*algorithm) && f.groups.empty()) {
    throw Error(ErrorCode::kConfig, f.algo + " requires --groups");
  }

  std::optional<std::vector<int>> group_labels;
  if (!f.groups.empty()) group_labels = parse_labels(read_file(f.groups));
  std::optional<std::vector<int>> truth_labels;
  if (!f.truth.empty()) truth_labels = parse_labels(read_file(f.truth));

  const std::string edges = read_file(f.graph);
  std::size_t n = 0;
  if (group_labels) {
    n = group_labels->size();
    if (f.n && *f.n != n) throw Error(ErrorCode::kConfig, "--n disagrees with the group file length");
  } else if (f.n) {
    n = *f.n;
  } else {
    n = infer_vertex_count(edges);
  }
  Graph g = parse_graph(edges, n);
  if (truth_labels && truth_labels->size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "truth file has " + std::to_string(truth_labels->size()) +
                                                " labels for n=" + std::to_string(n));
  }

  if (f.largest_component) {
    const auto keep = largest_component(g);
    if (keep.size() != n) {
      err << "largest component keeps " << keep.size() << " of " << n << " vertices\n";
      g = induced_subgraph(g, keep);
      if (group_labels) group_labels = restrict_to(*group_labels, keep);
      if (truth_labels) truth_labels = restrict_to(*truth_labels, keep);
      n = keep.size();
    }
  }

  std::optional<GroupAssignment> groups;
  if (group_labels) {
    groups = f.largest_component ? GroupAssignment::compacted(*group_labels)
                                 : GroupAssignment::from_labels(*group_labels);
  }
  std::optional<Clustering> truth;
  if (truth_labels) {
    truth = Clustering::from_labels(*truth_labels);
    truth->k = std::max(truth->k, 1);
  }

  Rng rng(f.seed);
  const TimedRun run = timed_spectral(*algorithm, g, f.k, groups ? &*groups : nullptr, rng);
  const Clustering& c = run.result.clustering;

  ClusteringReport rep = report(g, c, groups ? *groups : GroupAssignment(1, std::vector<int>(n, 0)),
                                truth ? &*truth : nullptr);
  rep.runtime_ms = run.runtime_ms;

  if (!f.out.empty()) write_file(f.out, format_labels(c.labels));
  out << csv_row(kClusterHeader);
  out << csv_row({f.algo, std::to_string(f.k), groups ? std::to_string(groups->h()) : std::string{},
                  std::to_string(n), format_real(rep.error),
                  groups ? format_real(rep.balance.average) : std::string{},
                  format_real(rep.ratio_cut), format_real(rep.ncut), format_real(rep.runtime_ms)});
  return kExitOk;
}

// -------------------------------------------------------------- experiment

struct ExperimentFlags {
  SbmFlags sbm;
  std::string sweep;
  std::vector<double> values;
  int trials = 1;
  std::vector<std::string> algos;
  std::optional<double> perturb_p;
  std::uint64_t seed = 0;
  std::string out;
  bool no_timing = false;
  int replicates = 10;
};

struct SweepPoint {
  FairSbmConfig cfg;
  std::optional<double> perturb_p;
};

SweepPoint sweep_point(const ExperimentFlags& f, double value) {
  SweepPoint point;
  point.perturb_p = f.perturb_p;
  if (f.sweep == "n") {
    if (value < 1 || value != std::floor(value)) throw Error(ErrorCode::kConfig, "n values must be positive integers");
    point.cfg = build_config(f.sbm, static_cast<std::size_t>(value));
  } else if (f.sweep == "k") {
    if (value < 1 || value != std::floor(value)) throw Error(ErrorCode::kConfig, "k values must be positive integers");
    if (!f.sbm.cluster_sizes.empty()) {
      throw Error(ErrorCode::kConfig, "--cluster-sizes cannot be combined with a k sweep");
    }
    if (!f.sbm.n) throw Error(ErrorCode::kConfig, "--n is required");
    const int k = static_cast<int>(value);
    const int h = f.sbm.h ? *f.sbm.h : (f.sbm.eta.empty() ? 2 : static_cast<int>(f.sbm.eta.size()));
    const auto kh = static_cast<std::size_t>(k) * static_cast<std::size_t>(std::max(h, 1));
    // n = kh * ceil(n_template / kh)
    const std::size_t n = kh * ((*f.sbm.n + kh - 1) / kh);
    point.cfg = build_config(f.sbm, n, k);
  } else if (f.sweep == "p") {
    if (!(value >= 0.0 && value <= 1.0)) throw Error(ErrorCode::kConfig, "p values must lie in [0,1]");
    point.cfg = build_config(f.sbm);
    if (point.cfg.h() != 2) throw Error(ErrorCode::kConfig, "a p sweep needs h=2");
    point.perturb_p = value;
  } else {
    throw Error(ErrorCode::kConfig, "--sweep must be n, k or p");
  }
  return point;
}

int cmd_experiment(const ExperimentFlags& f, std::ostream& out, std::ostream& err) {
  if (f.trials < 1) throw Error(ErrorCode::kConfig, "--trials must be >= 1");
  if (f.values.empty()) throw Error(ErrorCode::kConfig, "--values must not be empty");
  if (f.algos.empty()) throw Error(ErrorCode::kConfig, "--algos must not be empty");
  std::vector<Algorithm> algorithms;
  for (const auto& name : f.algos) {
    const auto a = parse_algorithm(name);
    if (!a) throw Error(ErrorCode::kConfig, "unknown algorithm '" + name + "'");
    algorithms.push_back(*a);
  }
  // Resolve every sweep point up front so configuration errors surface
  // before any work is done.
  std::vector<SweepPoint> points;
  for (double value : f.values) points.push_back(sweep_point(f, value));

  const KMeansOptions km{f.replicates, KMeansOptions{}.max_iter};
  std::string csv = csv_row(kExperimentHeader);
  for (std::size_t v = 0; v < points.size(); ++v) {
    const SweepPoint& point = points[v];
    for (int trial = 0; trial < f.trials; ++trial) {
      const std::uint64_t trial_seed = f.seed + static_cast<std::uint64_t>(trial);
      Rng sample_rng(trial_seed);
      const PlantedGraph planted = sample_fair_sbm(point.cfg, sample_rng, SbmValidation{!f.sbm.allow_degenerate});
      GroupAssignment groups = planted.groups;
      if (point.perturb_p) {
        Rng perturb_rng(mix_seed(trial_seed, 1));
        groups = perturb_groups(groups, *point.perturb_p, perturb_rng);
      }
      for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
        std::vector<std::string> row = {f.sweep, format_real(f.values[v]), std::to_string(trial),
                                        f.algos[ai]};
        try {
          Rng algo_rng(mix_seed(trial_seed, 2));
          const auto start = std::chrono::steady_clock::now();
          const SpectralResult result = run_spectral(algorithms[ai], planted.graph, point.cfg.k(),
                                                     &groups, algo_rng, km);
          const auto stop = std::chrono::steady_clock::now();
          const ClusteringReport rep = report(planted.graph, result.clustering, groups, &planted.truth);
          row.push_back(format_real(rep.error));
          row.push_back(format_real(rep.balance.average));
          row.push_back(format_real(rep.ratio_cut));
          row.push_back(format_real(rep.ncut));
          row.push_back(f.no_timing ? std::string{}
                                    : format_real(std::chrono::duration<double, std::milli>(stop - start).count()));
        } catch (const Error& e) {
          if (exit_status(e.code()) != kExitPrecondition) throw;
          err << "warning: " << f.algos[ai] << " at " << f.sweep << "=" << format_real(f.values[v])
              << " trial " << trial << ": " << e.what() << '\n';
          row.insert(row.end(), 5, std::string{});
        }
        csv += csv_row(row);
      }
    }
  }
  if (f.out.empty()) {
    out << csv;
  } else {
    write_file(f.out, csv);
  }
  return kExitOk;
}

// ---------------------------------------------------------- spectrum-check

double max_sorted_deviation(std::vector<double> expected, const Eigen::VectorXd& observed) {
  std::sort(expected.begin(), expected.end());
  std::vector<double> got(observed.data(), observed.data() + observed.size());
  std::sort(got.begin(), got.end());
  if (got.size() != expected.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - expected[i]));
  return worst;
}

int cmd_spectrum_check(const SbmFlags& f, std::ostream& out) {
  const FairSbmConfig cfg = build_config(f);
  if (!is_balanced(cfg)) throw Error(ErrorCode::kUnbalanced, "spectrum check needs a balanced configuration");
  if (cfg.n() > kSpectrumMaxN) {
    throw Error(ErrorCode::kConfig, "spectrum check is limited to n <= " + std::to_string(kSpectrumMaxN));
  }
  const SpectrumOracle oracle = theoretical_spectrum(cfg);

  const auto n = static_cast<Eigen::Index>(cfg.n());
  const Eigen::MatrixXd shifted = expected_adjacency(cfg) + cfg.a * Eigen::MatrixXd::Identity(n, n);
  const double adjacency_dev = max_sorted_deviation(oracle.adjacency, symmetric_eigen(shifted).values);

  double constrained_dev = 0.0;
  const Eigen::MatrixXd expected_l = expected_laplacian(cfg);
  if (cfg.h() >= 2) {
    const NullspaceBasis z(fairness_matrix(canonical_groups(cfg)).transpose());
    constrained_dev = max_sorted_deviation(oracle.constrained_laplacian,
                                           symmetric_eigen(z.compress(expected_l)).values);
  } else {
    constrained_dev = max_sorted_deviation(oracle.constrained_laplacian, symmetric_eigen(expected_l).values);
  }
  const double worst = std::max(adjacency_dev, constrained_dev);
  const bool pass = worst <= kSpectrumTol;
  out << "n=" << cfg.n() << " k=" << cfg.k() << " h=" << cfg.h() << '\n'
      << "lambda1=" << format_real(oracle.lambda1) << '\n'
      << "adjacency_max_deviation=" << format_real(adjacency_dev) << '\n'
      << "constrained_laplacian_max_deviation=" << format_real(constrained_dev) << '\n'
      << "max_deviation=" << format_real(worst) << '\n'
      << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral clustering with proportionality constraints"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "sample a fair SBM graph");
  add_sbm_options(*generate, gen.sbm);
  generate->add_flag("--allow-degenerate", gen.sbm.allow_degenerate,
                     "only require probabilities in [0,1] (testing)");
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_option("--out", gen.out, "output prefix")->required();

  ClusterFlags cl;
  auto* cluster = app.add_subcommand("cluster", "cluster an edge-list graph");
  cluster->add_option("--graph", cl.graph, "edge-list file")->required();
  cluster->add_option("--groups", cl.groups, "group-label file");
  cluster->add_option("--truth", cl.truth, "ground-truth label file");
  cluster->add_option("--algo,--algos", cl.algo, "sc-u | sc-n | fair-u | fair-n")->required();
  cluster->add_option("--k", cl.k)->capture_default_str();
  cluster->add_option("--seed", cl.seed)->capture_default_str();
  cluster->add_option("--out", cl.out, "label output file");
  cluster->add_option("--n", cl.n, "vertex count (default: group file length or max id + 1)");
  cluster->add_flag("--largest-component", cl.largest_component,
                    "restrict to the largest connected component");

  ExperimentFlags ex;
  auto* experiment = app.add_subcommand("experiment", "run a sweep over synthetic instances");
  add_sbm_options(*experiment, ex.sbm);
  experiment->add_flag("--allow-degenerate", ex.sbm.allow_degenerate);
  experiment->add_option("--sweep", ex.sweep, "n | k | p")->required();
  experiment->add_option("--values", ex.values)->delimiter(',')->required();
  experiment->add_option("--trials", ex.trials)->capture_default_str();
  experiment->add_option("--algos", ex.algos)->delimiter(',')->required();
  experiment->add_option("--perturb-p", ex.perturb_p, "group perturbation for n/k sweeps");
  experiment->add_option("--seed", ex.seed)->capture_default_str();
  experiment->add_option("--out", ex.out, "CSV output file (default stdout)");
  experiment->add_option("--replicates", ex.replicates, "k-means replicates")->capture_default_str();
  experiment->add_flag("--no-timing", ex.no_timing, "leave runtime_ms empty");

  SbmFlags spectrum_flags;
  auto* spectrum = app.add_subcommand("spectrum-check", "compare expected-matrix spectra with closed forms");
  add_sbm_options(*spectrum, spectrum_flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*cluster) return cmd_cluster(cl, out, err);
    if (*experiment) return cmd_experiment(ex, out, err);
    if (*spectrum) return cmd_spectrum_check(spectrum_flags, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_status(e.code());
  }
  return kExitInvalid;
}

}  // namespace fairsc::cli
