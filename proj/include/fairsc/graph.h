#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fairsc {

// Undirected weighted graph with dense symmetric storage. Weights are
// non-negative and the diagonal is zero.
class Graph {
 public:
  Graph() = default;
  explicit Graph(Eigen::MatrixXd weights);

  static Graph empty(std::size_t n);

  std::size_t size() const { return static_cast<std::size_t>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }

  Eigen::VectorXd degrees() const;
  std::size_t edge_count() const;
  bool has_isolated_vertex(double tol = 1e-12) const;

 private:
  Eigen::MatrixXd weights_;
};

// Hard partition of [0, n) into k labelled parts. Labels are 0-based.
struct Clustering {
  int k = 0;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::vector<std::size_t> cluster_sizes() const;

  // Builds a clustering with k = max label + 1.
  static Clustering from_labels(std::vector<int> labels);
};

Eigen::MatrixXd laplacian(const Graph& g);

double ratio_cut(const Graph& g, const Clustering& c);
double ncut(const Graph& g, const Clustering& c);

// Edge-list text: "<i> <j> <w>" per line, '#' comments, 0-based ids,
// each undirected edge exactly once.
Graph parse_graph(std::string_view text, std::size_t n);
Graph read_graph(const std::string& path, std::size_t n);
// Largest vertex id mentioned in the edge list plus one (0 if no edges).
std::size_t infer_vertex_count(std::string_view text);
std::string format_edge_list(const Graph& g);

// One integer label per non-comment line.
std::vector<int> parse_labels(std::string_view text);
std::string format_labels(const std::vector<int>& labels);

Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices);
// Vertices of the largest connected component in increasing order; ties go to
// the component containing the smallest vertex id.
std::vector<std::size_t> largest_component(const Graph& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace fairsc
