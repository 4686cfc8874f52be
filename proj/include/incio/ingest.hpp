#pragma once

#include "incio/graph.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace incio {

/// n points in d dimensions, one per row. Entries are finite and n >= 2.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd points);
  Index size() const noexcept { return points_.rows(); }
  Index dimension() const noexcept { return points_.cols(); }
  const Eigen::MatrixXd& points() const noexcept { return points_; }

 private:
  Eigen::MatrixXd points_;
};

// Edge list: `i j w` per line, 0-based, `#` starts a comment. The first data
// line may be an `n m` header; otherwise n = 1 + max index.
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph load_edge_list(const std::filesystem::path& path);
/// Header line followed by one canonical edge per line (weights round-trip).
void write_edge_list(const WeightedGraph& g, std::ostream& out);

// Matrix Market `coordinate` `real|integer|pattern` `symmetric`, 1-based.
WeightedGraph parse_matrix_market(std::istream& in);
WeightedGraph load_matrix_market(const std::filesystem::path& path);

// One point per line, comma separated. A leading non-numeric line is a header.
PointCloud parse_points_csv(std::istream& in);
PointCloud load_points_csv(const std::filesystem::path& path);

enum class Kernel { Unit, Gaussian };
Kernel parse_kernel(std::string_view name);

struct KnnOptions {
  Index k = 10;
  Kernel kernel = Kernel::Unit;
  double sigma = 1.0;  // Gaussian bandwidth
};

/// Exact k-nearest-neighbor graph, symmetrized by union. Distance ties go to
/// the lower index. Weight 1 or exp(-|x_i - x_j|^2 / (2 sigma^2)).
/// Throws KOutOfRange unless 1 <= k < n.
WeightedGraph knn_graph(const PointCloud& pc, Index k, Kernel kernel = Kernel::Unit, double sigma = 1.0);
inline WeightedGraph knn_graph(const PointCloud& pc, const KnnOptions& opt) {
  return knn_graph(pc, opt.k, opt.kernel, opt.sigma);
}

/// G(n, p) with unit weights; each pair i < j kept when a uniform draw is < p.
WeightedGraph erdos_renyi(Index n, double p, std::uint64_t seed);

struct LabeledPoints {
  PointCloud cloud;
  std::vector<Index> labels;  // generating moon, 0 or 1
};

/// Two interleaved half circles with Gaussian noise; n/2 points on the upper
/// moon (rounded up) and the rest on the lower one.
LabeledPoints two_moons(Index n, double noise, std::uint64_t seed);

enum class InputFormat { EdgeList, MatrixMarket, Points };
InputFormat parse_format(std::string_view name);
std::string_view to_string(InputFormat f);

struct LoadedGraph {
  WeightedGraph graph;
  std::optional<PointCloud> points;  // kept when the source was a point cloud
};

/// Reads any supported format; point clouds go through knn_graph.
LoadedGraph load_graph(const std::filesystem::path& path, InputFormat format, const KnnOptions& knn = {});

}  // namespace incio
