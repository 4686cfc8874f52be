#include "incio/clustering.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <random>

namespace incio {

namespace {

void check_labels(std::span<const Index> labels, Index n, Index K) {
  if (static_cast<Index>(labels.size()) != n) throw DimensionMismatch(n, static_cast<Index>(labels.size()));
  for (Index l : labels)
    if (l < 0 || l >= K) throw Error("cluster label " + std::to_string(l) + " outside [0, " + std::to_string(K) + ")");
}

Index label_count(std::span<const Index> labels) {
  Index K = 0;
  for (Index l : labels) {
    if (l < 0) throw Error("cluster labels must be nonnegative");
    K = std::max(K, l + 1);
  }
  return K;
}

struct Run {
  std::vector<Index> labels;
  double wcss = std::numeric_limits<double>::infinity();
};

Eigen::MatrixXd centroids_of(const Eigen::Ref<const Eigen::MatrixXd>& V, const std::vector<Index>& labels, Index K) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(K, V.cols());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(K);
  for (Index i = 0; i < V.rows(); ++i) {
    C.row(labels[i]) += V.row(i);
    count[labels[i]] += 1.0;
  }
  for (Index k = 0; k < K; ++k)
    if (count[k] > 0) C.row(k) /= count[k];
  return C;
}

Index nearest(const Eigen::MatrixXd& C, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < C.rows(); ++k) {
    const double d = (C.row(k) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

Eigen::MatrixXd seed_plus_plus(const Eigen::Ref<const Eigen::MatrixXd>& V, Index K, std::mt19937_64& rng) {
  const Index n = V.rows();
  Eigen::MatrixXd C(K, V.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  C.row(0) = V.row(pick(rng));
  Eigen::VectorXd d2(n);
  for (Index i = 0; i < n; ++i) d2[i] = (V.row(i) - C.row(0)).squaredNorm();
  for (Index k = 1; k < K; ++k) {
    const double total = d2.sum();
    Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0 && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    C.row(k) = V.row(chosen);
    for (Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], (V.row(i) - C.row(k)).squaredNorm());
  }
  return C;
}

// Moves points into empty clusters, taking each from the current largest
// cluster the point farthest from that cluster's centroid.
void repair_empty(const Eigen::Ref<const Eigen::MatrixXd>& V, std::vector<Index>& labels, Index K) {
  while (true) {
    std::vector<Index> size(static_cast<std::size_t>(K), 0);
    for (Index l : labels) ++size[l];
    const auto empty = std::find(size.begin(), size.end(), Index{0});
    if (empty == size.end()) return;
    const Index target = empty - size.begin();
    const Index largest = std::max_element(size.begin(), size.end()) - size.begin();

    const Eigen::MatrixXd C = centroids_of(V, labels, K);
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < V.rows(); ++i) {
      if (labels[i] != largest) continue;
      const double d = (V.row(i) - C.row(largest)).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    labels[far] = target;
  }
}

Run lloyd(const Eigen::Ref<const Eigen::MatrixXd>& V, Index K, int max_iterations, std::mt19937_64& rng) {
  const Index n = V.rows();
  Eigen::MatrixXd C = seed_plus_plus(V, K, rng);
  Run run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<Index> next(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) next[i] = nearest(C, V.row(i));
    repair_empty(V, next, K);
    const bool stable = next == run.labels;
    run.labels = std::move(next);
    C = centroids_of(V, run.labels, K);
    if (stable) break;
  }
  run.wcss = 0.0;
  for (Index i = 0; i < n; ++i) run.wcss += (V.row(i) - C.row(run.labels[i])).squaredNorm();
  return run;
}

}  // namespace

std::vector<Index> kmeans_rows(const Eigen::Ref<const Eigen::MatrixXd>& V, Index K, const KMeansConfig& cfg) {
  const Index n = V.rows();
  if (K < 1) throw Error("K must be >= 1");
  if (K > n) throw KTooLarge(K, n);
  if (cfg.restarts < 1 || cfg.max_iterations < 1) throw Error("k-means restarts and iterations must be >= 1");
  if (!V.allFinite()) throw Error("k-means input contains non-finite entries");

  std::mt19937_64 rng(cfg.seed);
  Run best;
  for (int r = 0; r < cfg.restarts; ++r) {
    Run run = lloyd(V, K, cfg.max_iterations, rng);
    if (run.wcss < best.wcss) best = std::move(run);
  }

  // Canonical numbering: clusters ordered by their first node.
  std::vector<Index> rename(static_cast<std::size_t>(K), -1);
  Index next = 0;
  for (Index& l : best.labels) {
    if (rename[l] < 0) rename[l] = next++;
    l = rename[l];
  }
  return best.labels;
}

ClusterVolumes cluster_volumes(const WeightedGraph& g, std::span<const Index> labels, Index K) {
  check_labels(labels, g.num_nodes(), K);
  ClusterVolumes out{Eigen::VectorXd::Zero(K), Eigen::VectorXd::Zero(K)};
  for (const Edge& e : g.edges()) {
    out.volume[labels[e.i]] += e.w;
    out.volume[labels[e.j]] += e.w;
    if (labels[e.i] == labels[e.j]) out.internal[labels[e.i]] += 2.0 * e.w;
  }
  return out;
}

double modularity(const WeightedGraph& g, std::span<const Index> labels) {
  const Index K = label_count(labels);
  const ClusterVolumes cv = cluster_volumes(g, labels, K);
  const double s = cv.volume.sum();
  if (s == 0.0) return 0.0;
  double q = 0.0;
  for (Index k = 0; k < K; ++k) {
    const double share = cv.volume[k] / s;
    q += cv.internal[k] / s - share * share;
  }
  return q;
}

double scaled_normalized_cut(const WeightedGraph& g, std::span<const Index> labels, Index K) {
  if (K < 1) throw Error("K must be >= 1");
  const ClusterVolumes cv = cluster_volumes(g, labels, K);
  double nc = 0.0;
  for (Index k = 0; k < K; ++k) {
    if (!(cv.volume[k] > 0.0)) throw ZeroVolumeCluster(k);
    nc += (cv.volume[k] - cv.internal[k]) / cv.volume[k];
  }
  return nc / static_cast<double>(K);
}

ScaledSizes scaled_sizes(std::span<const Index> labels, Index n) {
  if (n < 1) throw Error("n must be >= 1");
  if (static_cast<Index>(labels.size()) != n) throw DimensionMismatch(n, static_cast<Index>(labels.size()));
  const Index K = label_count(labels);
  std::vector<Index> size(static_cast<std::size_t>(K), 0);
  for (Index l : labels) ++size[l];
  std::sort(size.begin(), size.end());
  const double nn = static_cast<double>(n);
  return {static_cast<double>(size[(size.size() - 1) / 2]) / nn, static_cast<double>(size.back()) / nn};
}

double scaled_spectrum_energy(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, const LaplacianOperator& op) {
  const double trace = op.trace();
  if (!(trace > 0.0)) throw Error("spectrum energy undefined for a Laplacian with zero trace");
  return eigenvalues.sum() / trace;
}

ClusterReport make_report(const WeightedGraph& g, std::vector<Index> labels, Index K,
                          const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, const LaplacianOperator& op) {
  check_labels(labels, g.num_nodes(), K);
  ClusterReport r;
  r.K = K;
  r.sizes.assign(static_cast<std::size_t>(K), 0);
  for (Index l : labels) ++r.sizes[l];
  r.metrics.modularity = modularity(g, labels);
  r.metrics.scaled_nc = scaled_normalized_cut(g, labels, K);
  const ScaledSizes sz = scaled_sizes(labels, g.num_nodes());
  r.metrics.scaled_median_size = sz.median;
  r.metrics.scaled_max_size = sz.max;
  r.metrics.scaled_spectrum_energy = scaled_spectrum_energy(eigenvalues, op);
  r.labels = std::move(labels);
  return r;
}

std::string metrics_csv_header() { return "K,modularity,scaled_nc,scaled_median,scaled_max,scaled_energy"; }

std::string metrics_csv_row(const ClusterReport& r) {
  char buf[256];
  const ClusterMetrics& m = r.metrics;
  std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g,%.17g", static_cast<long>(r.K), m.modularity,
                m.scaled_nc, m.scaled_median_size, m.scaled_max_size, m.scaled_spectrum_energy);
  return buf;
}

std::string metrics_csv(std::span<const ClusterReport> reports) {
  std::string out = metrics_csv_header() + "\n";
  for (const ClusterReport& r : reports) out += metrics_csv_row(r) + "\n";
  return out;
}

}  // namespace incio
