#include "incio/ingest.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace incio;

namespace {

const std::filesystem::path kData = INCIO_TEST_DATA_DIR;

WeightedGraph parse_el(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

Index parse_error_line(const std::filesystem::path& file) {
  try {
    load_edge_list(file);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("edge list parsing") {
  const WeightedGraph g = load_edge_list(kData / "p3.el");
  CHECK(g.num_nodes() == 3);
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edges()[1] == Edge{1, 2, 2.0});

  const WeightedGraph h = load_edge_list(kData / "header.el");
  CHECK(h.num_nodes() == 5);
  CHECK(h.num_edges() == 2);

  const WeightedGraph c = parse_el("# comment\n\n  0 2 0.5  # trailing\n2 1 1\n");
  CHECK(c.num_nodes() == 3);
  CHECK(c.edges()[0] == Edge{0, 2, 0.5});
}

TEST_CASE("edge list errors") {
  CHECK(parse_error_line(kData / "bad_token.el") == 1);
  CHECK(parse_error_line(kData / "short_line.el") == 2);
  CHECK(parse_error_line(kData / "bad_count.el") == 1);
  CHECK_THROWS_AS(parse_el("0 1 -1\n"), NonpositiveWeight);
  CHECK_THROWS_AS(parse_el("0 0 1\n"), SelfLoop);
  CHECK_THROWS_AS(parse_el("0 1 inf\n"), ParseError);
  CHECK_THROWS_AS(parse_el("2 1\n0 5 1\n"), IndexOutOfRange);
  CHECK_THROWS_AS(load_edge_list(kData / "missing.el"), Error);
}

TEST_CASE("edge list round trip") {
  const WeightedGraph g = load_edge_list(kData / "header.el");
  std::ostringstream out;
  write_edge_list(g, out);
  const WeightedGraph back = parse_el(out.str());
  CHECK(back.num_nodes() == g.num_nodes());
  CHECK(back.edges() == g.edges());

  const WeightedGraph r = normalize_weights(oracle::connected_er(30, 0.3, 1));
  std::ostringstream out2;
  write_edge_list(r, out2);
  CHECK(parse_el(out2.str()).edges() == r.edges());
}

TEST_CASE("matrix market") {
  const WeightedGraph g = load_matrix_market(kData / "p3.mtx");
  CHECK(g.edges() == load_edge_list(kData / "p3.el").edges());

  const WeightedGraph p = load_matrix_market(kData / "p4_pattern.mtx");
  CHECK(p.edges() == oracle::path(4).edges());

  CHECK_THROWS_AS(load_matrix_market(kData / "general.mtx"), ParseError);
  std::istringstream bad("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n0 1 1\n");
  CHECK_THROWS_AS(parse_matrix_market(bad), ParseError);
  std::istringstream count("%%MatrixMarket matrix coordinate integer symmetric\n3 3 2\n2 1 4\n");
  CHECK_THROWS_AS(parse_matrix_market(count), ParseError);
}

TEST_CASE("points csv") {
  const PointCloud pc = load_points_csv(kData / "line.csv");
  CHECK(pc.size() == 3);
  CHECK(pc.dimension() == 2);
  CHECK(pc.points()(2, 0) == 2.0);
  CHECK_THROWS_AS(load_points_csv(kData / "nonfinite.csv"), Error);

  std::istringstream ragged("0,0\n1\n");
  CHECK_THROWS_AS(parse_points_csv(ragged), ParseError);
  std::istringstream spaces("0 0 1\n1 1 1\n");
  CHECK(parse_points_csv(spaces).dimension() == 3);
  CHECK_THROWS_AS(PointCloud(Eigen::MatrixXd::Zero(1, 2)), Error);
}

TEST_CASE("knn graph") {
  const PointCloud line = load_points_csv(kData / "line.csv");
  const WeightedGraph g = knn_graph(line, 1);
  CHECK(g.edges() == std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}});

  const WeightedGraph full = knn_graph(line, 2);
  CHECK(full.num_edges() == 3);

  const WeightedGraph gauss = knn_graph(line, 1, Kernel::Gaussian, 2.0);
  CHECK(gauss.edges()[0].w == doctest::Approx(std::exp(-1.0 / 8.0)));

  // Ties: node 1 is equidistant from 0 and 2 and picks the lower index.
  const WeightedGraph tie = knn_graph(PointCloud(Eigen::Vector3d(0.0, 1.0, 2.0)), 1);
  CHECK(tie.num_edges() == 2);

  CHECK_THROWS_AS(knn_graph(line, 0), KOutOfRange);
  CHECK_THROWS_AS(knn_graph(line, 3), KOutOfRange);
  CHECK_THROWS_AS(knn_graph(line, 1, Kernel::Gaussian, 0.0), Error);
  CHECK(parse_kernel("gaussian") == Kernel::Gaussian);
  CHECK_THROWS_AS(parse_kernel("cosine"), Error);
}

TEST_CASE("knn graph of two blobs") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.2);
  Eigen::MatrixXd pts(40, 2);
  for (Index i = 0; i < 40; ++i) {
    pts(i, 0) = noise(rng) + (i < 20 ? 0.0 : 10.0);
    pts(i, 1) = noise(rng);
  }
  const WeightedGraph g = knn_graph(PointCloud(pts), 5);
  const Components c = connected_components(g);
  CHECK(c.count == 2);
  for (Index i = 0; i < 40; ++i) CHECK(c.labels[static_cast<std::size_t>(i)] == (i < 20 ? 0 : 1));

  // Every node keeps at least its own k choices.
  const StrengthProfile s = strengths(g);
  CHECK(s.strengths.minCoeff() >= 5.0);
}

TEST_CASE("erdos renyi") {
  CHECK(erdos_renyi(50, 0.0, 1).num_edges() == 0);
  CHECK(erdos_renyi(50, 1.0, 1).num_edges() == 50 * 49 / 2);
  CHECK(erdos_renyi(200, 0.1, 9).edges() == erdos_renyi(200, 0.1, 9).edges());
  CHECK(erdos_renyi(200, 0.1, 9).edges() != erdos_renyi(200, 0.1, 10).edges());

  const double pairs = 1000.0 * 999.0 / 2.0;
  const double mean = 0.1 * pairs;
  const double sd = std::sqrt(pairs * 0.1 * 0.9);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) total += static_cast<double>(erdos_renyi(1000, 0.1, seed).num_edges());
  CHECK(std::abs(total / 20.0 - mean) <= 3.0 * sd);

  CHECK_THROWS_AS(erdos_renyi(10, 1.5, 1), Error);
}

TEST_CASE("two moons") {
  const LabeledPoints lp = two_moons(101, 0.0, 3);
  CHECK(lp.cloud.size() == 101);
  CHECK(std::count(lp.labels.begin(), lp.labels.end(), 0) == 51);
  for (Index i = 0; i < 101; ++i) {
    const auto row = lp.cloud.points().row(i);
    const double r = lp.labels[static_cast<std::size_t>(i)] == 0 ? row.norm() : (row - Eigen::RowVector2d(1.0, 0.5)).norm();
    CHECK(r == doctest::Approx(1.0));
  }
  const LabeledPoints a = two_moons(50, 0.1, 7);
  const LabeledPoints b = two_moons(50, 0.1, 7);
  CHECK(a.cloud.points() == b.cloud.points());
}

TEST_CASE("load_graph dispatch") {
  CHECK(load_graph(kData / "p3.el", InputFormat::EdgeList).graph.num_edges() == 2);
  CHECK(load_graph(kData / "p3.mtx", InputFormat::MatrixMarket).graph.num_edges() == 2);
  const LoadedGraph pts = load_graph(kData / "line.csv", InputFormat::Points, KnnOptions{.k = 1});
  CHECK(pts.graph.num_edges() == 2);
  REQUIRE(pts.points.has_value());
  CHECK(pts.points->size() == 3);
  for (InputFormat f : {InputFormat::EdgeList, InputFormat::MatrixMarket, InputFormat::Points})
    CHECK(parse_format(to_string(f)) == f);
  CHECK_THROWS_AS(parse_format("graphml"), Error);
}
