#include "fairsc/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "fairsc/csv.h"
#include "fairsc/error.h"

namespace fairsc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIndex: return "IndexError";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kEmptyCluster: return "EmptyCluster";
    case ErrorCode::kZeroVolume: return "ZeroVolume";
    case ErrorCode::kSingleGroup: return "SingleGroup";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kIsolatedVertex: return "IsolatedVertex";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kUnbalanced: return "Unbalanced";
    case ErrorCode::kIndivisible: return "Indivisible";
    case ErrorCode::kUnsupportedGroupCount: return "UnsupportedGroupCount";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kKMismatch: return "KMismatch";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

Graph::Graph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) {
    throw Error(ErrorCode::kConfig, "weight matrix must be square");
  }
  const Eigen::Index n = weights_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) {
      throw Error(ErrorCode::kSelfLoop, "non-zero diagonal at vertex " + std::to_string(i));
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorCode::kNegativeWeight,
                    "weight (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
      }
      if (w != weights_(j, i)) {
        throw Error(ErrorCode::kNotSymmetric,
                    "weight (" + std::to_string(i) + "," + std::to_string(j) + ") is asymmetric");
      }
    }
  }
}

Graph Graph::empty(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return Graph(Eigen::MatrixXd::Zero(m, m));
}

Eigen::VectorXd Graph::degrees() const { return weights_.rowwise().sum(); }

std::size_t Graph::edge_count() const {
  std::size_t count = 0;
  const Eigen::Index n = weights_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (weights_(i, j) > 0.0) ++count;
    }
  }
  return count;
}

bool Graph::has_isolated_vertex(double tol) const {
  return size() > 0 && degrees().minCoeff() < tol;
}

std::vector<std::size_t> Clustering::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int label : labels) {
    if (label < 0 || label >= k) {
      throw Error(ErrorCode::kIndex, "cluster label " + std::to_string(label) +
                                         " outside [0," + std::to_string(k) + ")");
    }
    ++sizes[static_cast<std::size_t>(label)];
  }
  return sizes;
}

Clustering Clustering::from_labels(std::vector<int> labels) {
  int k = 0;
  for (int label : labels) {
    if (label < 0) throw Error(ErrorCode::kIndex, "negative cluster label");
    k = std::max(k, label + 1);
  }
  return Clustering{k, std::move(labels)};
}

Eigen::MatrixXd laplacian(const Graph& g) {
  Eigen::MatrixXd l = -g.weights();
  l.diagonal() = g.degrees();
  return l;
}

namespace {

// Per-cluster cut(C_l, V \ C_l), computed straight from W.
std::vector<double> cluster_cuts(const Graph& g, const Clustering& c) {
  std::vector<double> cuts(static_cast<std::size_t>(c.k), 0.0);
  const std::size_t n = g.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (c.labels[i] != c.labels[j]) {
        const double w = g.weight(i, j);
        cuts[static_cast<std::size_t>(c.labels[i])] += w;
        cuts[static_cast<std::size_t>(c.labels[j])] += w;
      }
    }
  }
  return cuts;
}

std::vector<std::size_t> checked_sizes(const Graph& g, const Clustering& c) {
  if (c.size() != g.size()) {
    throw Error(ErrorCode::kLengthMismatch, "clustering has " + std::to_string(c.size()) +
                                                " labels for " + std::to_string(g.size()) +
                                                " vertices");
  }
  auto sizes = c.cluster_sizes();
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    if (sizes[l] == 0) throw Error(ErrorCode::kEmptyCluster, "cluster " + std::to_string(l));
  }
  return sizes;
}

}  // namespace

double ratio_cut(const Graph& g, const Clustering& c) {
  const auto sizes = checked_sizes(g, c);
  const auto cuts = cluster_cuts(g, c);
  double total = 0.0;
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    total += cuts[l] / static_cast<double>(sizes[l]);
  }
  return total;
}

double ncut(const Graph& g, const Clustering& c) {
  const auto sizes = checked_sizes(g, c);
  const Eigen::VectorXd deg = g.degrees();
  std::vector<double> volume(sizes.size(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    volume[static_cast<std::size_t>(c.labels[i])] += deg(static_cast<Eigen::Index>(i));
  }
  const auto cuts = cluster_cuts(g, c);
  double total = 0.0;
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    if (volume[l] <= 0.0) throw Error(ErrorCode::kZeroVolume, "cluster " + std::to_string(l));
    total += cuts[l] / volume[l];
  }
  return total;
}

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Non-empty, non-comment lines with their 1-based line numbers.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    lines.push_back({number, line});
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = line.size();
    fields.push_back(line.substr(start, end - start));
    pos = end;
  }
  return fields;
}

[[noreturn]] void parse_failure(ErrorCode code, const Line& line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line.number) + ": " + what + " ('" +
                        std::string(line.text) + "')");
}

template <typename T>
T parse_number(std::string_view field, const Line& line) {
  T value{};
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    parse_failure(ErrorCode::kParse, line, "malformed number '" + std::string(field) + "'");
  }
  return value;
}

struct EdgeRecord {
  std::size_t i;
  std::size_t j;
  double w;
  Line line;
};

std::vector<EdgeRecord> parse_edges(std::string_view text) {
  std::vector<EdgeRecord> edges;
  for (const Line& line : content_lines(text)) {
    const auto fields = split_ws(line.text);
    if (fields.size() != 3) parse_failure(ErrorCode::kParse, line, "expected '<i> <j> <w>'");
    if (fields[0].front() == '-' || fields[1].front() == '-') {
      parse_failure(ErrorCode::kParse, line, "negative vertex id");
    }
    const auto i = parse_number<std::size_t>(fields[0], line);
    const auto j = parse_number<std::size_t>(fields[1], line);
    const auto w = parse_number<double>(fields[2], line);
    edges.push_back({i, j, w, line});
  }
  return edges;
}

}  // namespace

std::size_t infer_vertex_count(std::string_view text) {
  std::size_t n = 0;
  for (const auto& e : parse_edges(text)) n = std::max({n, e.i + 1, e.j + 1});
  return n;
}

Graph parse_graph(std::string_view text, std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : parse_edges(text)) {
    if (e.i >= n || e.j >= n) {
      parse_failure(ErrorCode::kIndex, e.line, "vertex id >= n=" + std::to_string(n));
    }
    if (e.i == e.j) parse_failure(ErrorCode::kSelfLoop, e.line, "self loop");
    if (!std::isfinite(e.w)) parse_failure(ErrorCode::kParse, e.line, "non-finite weight");
    if (e.w < 0.0) parse_failure(ErrorCode::kNegativeWeight, e.line, "negative weight");
    if (e.w == 0.0) parse_failure(ErrorCode::kParse, e.line, "weight must be positive");
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) {
      parse_failure(ErrorCode::kDuplicateEdge, e.line, "edge listed twice");
    }
    const auto a = static_cast<Eigen::Index>(e.i);
    const auto b = static_cast<Eigen::Index>(e.j);
    w(a, b) = e.w;
    w(b, a) = e.w;
  }
  return Graph(std::move(w));
}

Graph read_graph(const std::string& path, std::size_t n) { return parse_graph(read_file(path), n); }

std::string format_edge_list(const Graph& g) {
  std::string out;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = g.weight(i, j);
      if (w > 0.0) {
        out += std::to_string(i);
        out += ' ';
        out += std::to_string(j);
        out += ' ';
        out += format_real(w);
        out += '\n';
      }
    }
  }
  return out;
}

std::vector<int> parse_labels(std::string_view text) {
  std::vector<int> labels;
  for (const Line& line : content_lines(text)) {
    const auto fields = split_ws(line.text);
    if (fields.size() != 1) parse_failure(ErrorCode::kParse, line, "expected a single label");
    const int label = parse_number<int>(fields[0], line);
    if (label < 0) parse_failure(ErrorCode::kParse, line, "labels are 0-based and non-negative");
    labels.push_back(label);
  }
  return labels;
}

std::string format_labels(const std::vector<int>& labels) {
  std::string out;
  for (int label : labels) {
    out += std::to_string(label);
    out += '\n';
  }
  return out;
}

Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices) {
  const auto m = static_cast<Eigen::Index>(vertices.size());
  Eigen::MatrixXd w(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      w(a, b) = g.weight(vertices[static_cast<std::size_t>(a)], vertices[static_cast<std::size_t>(b)]);
    }
  }
  return Graph(std::move(w));
}

std::vector<std::size_t> largest_component(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<int> component(n, -1);
  std::vector<std::size_t> best;
  int next = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (component[root] >= 0) continue;
    std::vector<std::size_t> members{root};
    component[root] = next;
    for (std::size_t head = 0; head < members.size(); ++head) {
      const std::size_t u = members[head];
      for (std::size_t v = 0; v < n; ++v) {
        if (component[v] < 0 && g.weight(u, v) > 0.0) {
          component[v] = next;
          members.push_back(v);
        }
      }
    }
    ++next;
    if (members.size() > best.size()) best = std::move(members);
  }
  std::sort(best.begin(), best.end());
  return best;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "failed reading '" + path + "'");
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace fairsc
