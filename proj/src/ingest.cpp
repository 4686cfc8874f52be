#include "incio/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

namespace incio {

namespace {

std::vector<std::string_view> split(std::string_view line, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t start = line.find_first_not_of(seps, pos);
    if (start == std::string_view::npos) break;
    std::size_t end = line.find_first_of(seps, start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

std::string_view strip_comment(std::string_view line, char mark) {
  const std::size_t c = line.find(mark);
  return c == std::string_view::npos ? line : line.substr(0, c);
}

std::optional<long long> to_int(std::string_view tok) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) return std::nullopt;
  return v;
}

std::optional<double> to_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Index parse_index(std::string_view tok, Index line) {
  const auto v = to_int(tok);
  if (!v) throw ParseError(line, "expected an integer node index, got '" + std::string(tok) + "'");
  return static_cast<Index>(*v);
}

double parse_weight(std::string_view tok, Index line) {
  const auto v = to_double(tok);
  if (!v) throw ParseError(line, "expected a finite weight, got '" + std::string(tok) + "'");
  return *v;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

PointCloud::PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 2) throw Error("a point cloud needs at least 2 points");
  if (points_.cols() < 1) throw Error("points need at least one coordinate");
  if (!points_.allFinite()) throw Error("point coordinates must be finite");
}

WeightedGraph parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::optional<Index> n_header;
  std::optional<Index> m_header;
  Index header_line = 0;
  Index max_index = -1;
  bool seen_data = false;
  std::string raw;
  for (Index line = 1; std::getline(in, raw); ++line) {
    const auto tok = split(strip_comment(raw, '#'), " \t\r");
    if (tok.empty()) continue;
    if (tok.size() == 2 && !seen_data) {
      n_header = parse_index(tok[0], line);
      m_header = parse_index(tok[1], line);
      if (*n_header < 0 || *m_header < 0) throw ParseError(line, "header counts must be nonnegative");
      header_line = line;
      seen_data = true;
      continue;
    }
    seen_data = true;
    if (tok.size() != 3) throw ParseError(line, "expected 'i j w'");
    const Index i = parse_index(tok[0], line);
    const Index j = parse_index(tok[1], line);
    const double w = parse_weight(tok[2], line);
    if (i < 0 || j < 0) throw ParseError(line, "node indices must be nonnegative");
    max_index = std::max({max_index, i, j});
    edges.push_back({i, j, w});
  }
  if (m_header && *m_header != static_cast<Index>(edges.size()))
    throw ParseError(header_line, "header declares " + std::to_string(*m_header) + " edges, file has " +
                                      std::to_string(edges.size()));
  return build_graph(n_header ? *n_header : max_index + 1, edges);
}

WeightedGraph load_edge_list(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_edge_list(in);
}

void write_edge_list(const WeightedGraph& g, std::ostream& out) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  char buf[64];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.w);
    out << e.i << ' ' << e.j << ' ' << buf << '\n';
  }
}

WeightedGraph parse_matrix_market(std::istream& in) {
  std::string raw;
  Index line = 1;
  if (!std::getline(in, raw)) throw ParseError(1, "empty Matrix Market file");
  const auto banner = split(raw, " \t\r");
  if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket" || lower(banner[1]) != "matrix" ||
      lower(banner[2]) != "coordinate")
    throw ParseError(1, "expected '%%MatrixMarket matrix coordinate <field> symmetric'");
  const std::string field = lower(banner[3]);
  if (field != "real" && field != "integer" && field != "pattern")
    throw ParseError(1, "unsupported field '" + field + "'");
  if (lower(banner[4]) != "symmetric") throw ParseError(1, "only symmetric matrices describe undirected graphs");
  const bool pattern = field == "pattern";

  Index n = -1;
  Index nnz = 0;
  std::vector<Edge> edges;
  while (std::getline(in, raw)) {
    ++line;
    const auto tok = split(strip_comment(raw, '%'), " \t\r");
    if (tok.empty()) continue;
    if (n < 0) {
      if (tok.size() != 3) throw ParseError(line, "expected 'rows cols entries'");
      const Index rows = parse_index(tok[0], line);
      const Index cols = parse_index(tok[1], line);
      nnz = parse_index(tok[2], line);
      if (rows != cols) throw ParseError(line, "adjacency matrix must be square");
      if (rows < 0 || nnz < 0) throw ParseError(line, "sizes must be nonnegative");
      n = rows;
      continue;
    }
    if (tok.size() != (pattern ? 2u : 3u)) throw ParseError(line, pattern ? "expected 'i j'" : "expected 'i j value'");
    const Index i = parse_index(tok[0], line);
    const Index j = parse_index(tok[1], line);
    if (i < 1 || j < 1) throw ParseError(line, "Matrix Market indices are 1-based");
    edges.push_back({i - 1, j - 1, pattern ? 1.0 : parse_weight(tok[2], line)});
  }
  if (n < 0) throw ParseError(line, "missing size line");
  if (static_cast<Index>(edges.size()) != nnz)
    throw ParseError(line, "size line declares " + std::to_string(nnz) + " entries, file has " +
                               std::to_string(edges.size()));
  return build_graph(n, edges);
}

WeightedGraph load_matrix_market(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_matrix_market(in);
}

PointCloud parse_points_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string raw;
  bool first = true;
  for (Index line = 1; std::getline(in, raw); ++line) {
    const auto tok = split(strip_comment(raw, '#'), ", \t\r");
    if (tok.empty()) continue;
    std::vector<double> row;
    for (auto t : tok) {
      const auto v = to_double(t);
      if (!v) {
        row.clear();
        break;
      }
      row.push_back(*v);
    }
    if (row.empty()) {
      const bool header = first && std::none_of(tok.begin(), tok.end(), [](auto t) { return to_double(t).has_value(); });
      if (!header) throw ParseError(line, "expected numeric coordinates");
      first = false;
      continue;
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(line, "expected " + std::to_string(rows.front().size()) + " coordinates");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(0, "no points");
  Eigen::MatrixXd P(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < P.rows(); ++i)
    for (Index j = 0; j < P.cols(); ++j) P(i, j) = rows[i][j];
  return PointCloud(std::move(P));
}

PointCloud load_points_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_points_csv(in);
}

Kernel parse_kernel(std::string_view name) {
  if (name == "unit") return Kernel::Unit;
  if (name == "gaussian") return Kernel::Gaussian;
  throw Error("unknown kernel '" + std::string(name) + "' (expected unit or gaussian)");
}

WeightedGraph knn_graph(const PointCloud& pc, Index k, Kernel kernel, double sigma) {
  const Index n = pc.size();
  if (k < 1 || k >= n) throw KOutOfRange(k, n);
  if (kernel == Kernel::Gaussian && !(sigma > 0.0)) throw Error("Gaussian kernel needs sigma > 0");
  const Eigen::MatrixXd& X = pc.points();

  // Selected neighbor pairs with their squared distance; i < j after canonicalization.
  std::vector<std::pair<std::pair<Index, Index>, double>> picked;
  picked.reserve(static_cast<std::size_t>(n * k));
  std::vector<std::pair<double, Index>> cand(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (Index j = 0; j < n; ++j)
      if (j != i) cand[c++] = {(X.row(i) - X.row(j)).squaredNorm(), j};
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (Index t = 0; t < k; ++t) {
      const auto [d2, j] = cand[t];
      picked.push_back({{std::min(i, j), std::max(i, j)}, d2});
    }
  }
  std::sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  picked.erase(std::unique(picked.begin(), picked.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
               picked.end());

  std::vector<Edge> edges;
  edges.reserve(picked.size());
  for (const auto& [ij, d2] : picked) {
    const double w = kernel == Kernel::Unit ? 1.0 : std::exp(-d2 / (2.0 * sigma * sigma));
    edges.push_back({ij.first, ij.second, w});
  }
  return build_graph(n, edges);
}

WeightedGraph erdos_renyi(Index n, double p, std::uint64_t seed) {
  if (n < 0) throw Error("n must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (u(rng) < p) edges.push_back({i, j, 1.0});
  return build_graph(n, edges);
}

LabeledPoints two_moons(Index n, double noise, std::uint64_t seed) {
  if (n < 2) throw Error("two_moons needs n >= 2");
  if (noise < 0.0) throw Error("noise must be nonnegative");
  const Index upper = (n + 1) / 2;
  const Index lower = n - upper;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise > 0.0 ? noise : 1.0);
  Eigen::MatrixXd P(n, 2);
  std::vector<Index> labels(static_cast<std::size_t>(n));
  const auto angle = [](Index i, Index count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
  };
  for (Index i = 0; i < upper; ++i) {
    const double t = angle(i, upper);
    P.row(i) << std::cos(t), std::sin(t);
    labels[i] = 0;
  }
  for (Index i = 0; i < lower; ++i) {
    const double t = angle(i, lower);
    P.row(upper + i) << 1.0 - std::cos(t), 0.5 - std::sin(t);
    labels[upper + i] = 1;
  }
  if (noise > 0.0)
    for (Index i = 0; i < n; ++i) P.row(i) += Eigen::RowVector2d(gauss(rng), gauss(rng));
  return {PointCloud(std::move(P)), std::move(labels)};
}

InputFormat parse_format(std::string_view name) {
  if (name == "edgelist") return InputFormat::EdgeList;
  if (name == "mtx") return InputFormat::MatrixMarket;
  if (name == "points") return InputFormat::Points;
  throw Error("unknown format '" + std::string(name) + "' (expected edgelist, mtx or points)");
}

std::string_view to_string(InputFormat f) {
  switch (f) {
    case InputFormat::EdgeList: return "edgelist";
    case InputFormat::MatrixMarket: return "mtx";
    case InputFormat::Points: return "points";
  }
  return "edgelist";
}

LoadedGraph load_graph(const std::filesystem::path& path, InputFormat format, const KnnOptions& knn) {
  switch (format) {
    case InputFormat::EdgeList: return {load_edge_list(path), std::nullopt};
    case InputFormat::MatrixMarket: return {load_matrix_market(path), std::nullopt};
    case InputFormat::Points: {
      PointCloud pc = load_points_csv(path);
      WeightedGraph g = knn_graph(pc, knn);
      return {std::move(g), std::move(pc)};
    }
  }
  throw Error("unknown input format");
}

}  // namespace incio
