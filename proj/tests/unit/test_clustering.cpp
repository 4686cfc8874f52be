#include "incio/clustering.hpp"

#include "incio/eigensolvers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace incio;

namespace {

std::vector<Index> random_labels(Index n, Index K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, K - 1);
  std::vector<Index> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < K && i < n; ++i) labels[static_cast<std::size_t>(i)] = i;  // every cluster nonempty
  for (Index i = K; i < n; ++i) labels[static_cast<std::size_t>(i)] = pick(rng);
  return labels;
}

WeightedGraph weighted_er(Index n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  const WeightedGraph base = oracle::connected_er(n, p, seed);
  std::vector<Edge> edges;
  for (const Edge& e : base.edges()) edges.push_back({e.i, e.j, w(rng)});
  return build_graph(n, edges);
}

}  // namespace

TEST_CASE("kmeans on distinct points") {
  Eigen::MatrixXd V(4, 2);
  V << 0, 0, 1, 0, 0, 1, 5, 5;
  const auto labels = kmeans_rows(V, 4);
  CHECK(labels == std::vector<Index>{0, 1, 2, 3});
  CHECK(kmeans_rows(V, 1) == std::vector<Index>{0, 0, 0, 0});
}

TEST_CASE("kmeans separates two blobs") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.1);
  Eigen::MatrixXd V(60, 2);
  std::vector<Index> truth(60);
  for (Index i = 0; i < 60; ++i) {
    const Index blob = (i * 7) % 2;
    truth[static_cast<std::size_t>(i)] = blob;
    V(i, 0) = noise(rng) + (blob ? 1.0 : 0.0);
    V(i, 1) = noise(rng);
  }
  const auto labels = kmeans_rows(V, 2);
  CHECK(oracle::best_agreement(truth, labels, 2) == 1.0);
  CHECK(labels[0] == 0);
}

TEST_CASE("kmeans is deterministic and keeps every cluster nonempty") {
  Eigen::MatrixXd V(30, 3);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u;
  for (Index i = 0; i < V.size(); ++i) V.data()[i] = u(rng);
  V.bottomRows(10).setZero();  // many duplicates
  for (Index K : {2, 5, 20, 21, 30}) {
    const auto a = kmeans_rows(V, K, {.seed = 3});
    const auto b = kmeans_rows(V, K, {.seed = 3});
    CHECK(a == b);
    std::vector<int> seen(static_cast<std::size_t>(K), 0);
    for (Index l : a) seen[static_cast<std::size_t>(l)]++;
    CAPTURE(K);
    CHECK(std::count(seen.begin(), seen.end(), 0) == 0);
  }
  CHECK_THROWS_AS(kmeans_rows(V, 31), KTooLarge);
  CHECK_THROWS_AS(kmeans_rows(V, 0), Error);
  CHECK_THROWS_AS(kmeans_rows(V, 2, {.restarts = 0}), Error);
}

TEST_CASE("modularity") {
  const WeightedGraph g = oracle::connected_er(20, 0.3, 2);
  CHECK(modularity(g, std::vector<Index>(20, 0)) == 0.0);

  const WeightedGraph cliques =
      oracle::disjoint_union(std::vector<WeightedGraph>{oracle::complete(4), oracle::complete(4)});
  CHECK(modularity(cliques, connected_components(cliques).labels) == doctest::Approx(0.5).epsilon(1e-15));

  CHECK(modularity(build_graph(3, {}), std::vector<Index>{0, 1, 2}) == 0.0);
  CHECK_THROWS_AS(modularity(g, std::vector<Index>(19, 0)), DimensionMismatch);
}

TEST_CASE("scaled normalized cut") {
  const WeightedGraph g =
      oracle::disjoint_union(std::vector<WeightedGraph>{oracle::cycle(5), oracle::path(4), oracle::complete(3)});
  CHECK(scaled_normalized_cut(g, connected_components(g).labels, 3) == 0.0);
  CHECK(scaled_normalized_cut(g, std::vector<Index>(12, 0), 1) == 0.0);

  // P3 split {0} | {1, 2}: cut 1, volumes 1 and 3.
  CHECK(scaled_normalized_cut(oracle::path(3), std::vector<Index>{0, 1, 1}, 2) == doctest::Approx((1.0 + 1.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(scaled_normalized_cut(build_graph(3, {{0, 1, 1.0}}), std::vector<Index>{0, 0, 1}, 2), ZeroVolumeCluster);
  CHECK_THROWS_AS(scaled_normalized_cut(g, std::vector<Index>(12, 3), 2), Error);
}

TEST_CASE("metrics match brute force on small graphs") {
  std::uint64_t seed = 50;
  for (Index n : {5, 12, 20, 30}) {
    for (int rep = 0; rep < 4; ++rep, ++seed) {
      const WeightedGraph g = rep % 2 ? weighted_er(n, 0.3, seed) : oracle::connected_er(n, 0.3, seed);
      for (Index K : {1, 2, 3, 5}) {
        const auto labels = random_labels(n, K, seed * 13 + static_cast<std::uint64_t>(K));
        CAPTURE(n);
        CAPTURE(K);
        CHECK(std::abs(modularity(g, labels) - oracle::modularity(g, labels)) <= 1e-12);
        CHECK(std::abs(scaled_normalized_cut(g, labels, K) - oracle::scaled_normalized_cut(g, labels, K)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("cluster volumes add up") {
  const WeightedGraph g = weighted_er(25, 0.3, 9);
  const auto labels = random_labels(25, 4, 1);
  const ClusterVolumes cv = cluster_volumes(g, labels, 4);
  CHECK(cv.volume.sum() == doctest::Approx(oracle::total_strength(g)).epsilon(1e-14));
  CHECK((cv.internal.array() <= cv.volume.array() + 1e-14).all());
}

TEST_CASE("scaled sizes") {
  auto check = [](std::vector<Index> labels, double median, double max) {
    const ScaledSizes s = scaled_sizes(labels, static_cast<Index>(labels.size()));
    CHECK(s.median == doctest::Approx(median));
    CHECK(s.max == doctest::Approx(max));
  };
  check({0, 0, 1, 1, 2, 2}, 1.0 / 3.0, 1.0 / 3.0);
  check({0, 1, 1, 2, 2, 2}, 1.0 / 3.0, 0.5);
  check({0, 1, 2, 2, 2, 2}, 1.0 / 6.0, 2.0 / 3.0);
  check({0, 0, 0, 1}, 0.25, 0.75);  // lower median of {1, 3}
  check({0, 0, 0}, 1.0, 1.0);
}

TEST_CASE("scaled spectrum energy") {
  const auto p3 = laplacian(oracle::path(3), LaplacianVariant::Unnormalized);
  CHECK(scaled_spectrum_energy(Eigen::Vector2d(0.0, 1.0), p3) == doctest::Approx(0.25));
  CHECK(scaled_spectrum_energy(Eigen::VectorXd::Zero(1), p3) == 0.0);

  for (LaplacianVariant v : {LaplacianVariant::Unnormalized, LaplacianVariant::Normalized}) {
    const WeightedGraph g = oracle::connected_er(30, 0.2, 4);
    const auto op = laplacian(g, v);
    const Eigen::VectorXd ev = dense_oracle(op).values;
    double prev = -1.0;
    for (Index K = 1; K <= 30; ++K) {
      const double e = scaled_spectrum_energy(ev.head(K), op);
      CHECK(e >= prev);
      prev = e;
    }
    CHECK(std::abs(prev - 1.0) <= 1e-9);
  }
}

TEST_CASE("make_report and CSV") {
  const WeightedGraph g = oracle::path(4);
  const auto op = laplacian(g, LaplacianVariant::Unnormalized);
  const ClusterReport r = make_report(g, {0, 0, 1, 1}, 2, Eigen::Vector2d(0.0, 2.0 - std::sqrt(2.0)), op);
  CHECK(r.K == 2);
  CHECK(r.sizes == std::vector<Index>{2, 2});
  CHECK(r.metrics.modularity == doctest::Approx(oracle::modularity(g, r.labels)));
  CHECK(r.metrics.scaled_nc == doctest::Approx(oracle::scaled_normalized_cut(g, r.labels, 2)));
  CHECK(r.metrics.scaled_median_size == 0.5);
  CHECK(r.metrics.scaled_max_size == 0.5);
  CHECK(r.metrics.scaled_spectrum_energy == doctest::Approx((2.0 - std::sqrt(2.0)) / 6.0));

  const std::vector<ClusterReport> reports{r, r};
  const std::string csv = metrics_csv(reports);
  CHECK(csv.starts_with(metrics_csv_header() + "\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const std::string row = metrics_csv_row(r);
  CHECK(row.starts_with("2,"));
  // Round-trip precision: the parsed modularity equals the stored double.
  const std::size_t a = row.find(',') + 1;
  CHECK(std::stod(row.substr(a, row.find(',', a) - a)) == r.metrics.modularity);
}
