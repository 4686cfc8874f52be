#pragma once

#include "incio/graph.hpp"
#include "incio/laplacian.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace incio {

struct KMeansConfig {
  int restarts = 10;         // best of R runs by within-cluster sum of squares
  int max_iterations = 100;  // Lloyd iterations per run
  std::uint64_t seed = 42;
};

/// K-means on the rows of V with k-means++ seeding.
///
/// Deterministic for a fixed seed. Empty clusters are repaired by moving the
/// point of the largest cluster farthest from its centroid, so all K clusters
/// are nonempty. Labels are renumbered by first occurrence. Throws KTooLarge.
std::vector<Index> kmeans_rows(const Eigen::Ref<const Eigen::MatrixXd>& V, Index K, const KMeansConfig& cfg = {});

/// Per-cluster volume W(C_k, V) and internal weight W(C_k, C_k), the latter
/// counting each internal edge twice so that W(C, V) = W(C, C) + W(C, C').
struct ClusterVolumes {
  Eigen::VectorXd volume;
  Eigen::VectorXd internal;
};

ClusterVolumes cluster_volumes(const WeightedGraph& g, std::span<const Index> labels, Index K);

/// sum_k W(C_k, C_k) / s - (W(C_k, V) / s)^2. Graphs without edges score 0.
double modularity(const WeightedGraph& g, std::span<const Index> labels);

/// (sum_k W(C_k, C_k') / W(C_k, V)) / K. Throws ZeroVolumeCluster.
double scaled_normalized_cut(const WeightedGraph& g, std::span<const Index> labels, Index K);

struct ScaledSizes {
  double median = 0.0;  // lower median cluster size / n
  double max = 0.0;
};

ScaledSizes scaled_sizes(std::span<const Index> labels, Index n);

/// Sum of the given (smallest) eigenvalues divided by trace(L).
double scaled_spectrum_energy(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, const LaplacianOperator& op);

struct ClusterMetrics {
  double modularity = 0.0;
  double scaled_nc = 0.0;
  double scaled_median_size = 0.0;
  double scaled_max_size = 0.0;
  double scaled_spectrum_energy = 0.0;

  friend bool operator==(const ClusterMetrics&, const ClusterMetrics&) = default;
};

struct ClusterReport {
  Index K = 0;
  std::vector<Index> labels;
  std::vector<Index> sizes;
  ClusterMetrics metrics;

  friend bool operator==(const ClusterReport&, const ClusterReport&) = default;
};

/// Bundles labels with all five metrics. Graph metrics use `g`; the spectrum
/// energy uses `eigenvalues` against trace(op).
ClusterReport make_report(const WeightedGraph& g, std::vector<Index> labels, Index K,
                          const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, const LaplacianOperator& op);

/// `K,modularity,scaled_nc,scaled_median,scaled_max,scaled_energy`
std::string metrics_csv_header();
/// One CSV row, numbers in round-trip precision.
std::string metrics_csv_row(const ClusterReport& report);
std::string metrics_csv(std::span<const ClusterReport> reports);

}  // namespace incio
