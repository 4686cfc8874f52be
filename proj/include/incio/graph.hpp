#pragma once

#include "incio/errors.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <span>
#include <vector>

namespace incio {

/// Undirected weighted edge. Canonical form has i < j.
struct Edge {
  Index i = 0;
  Index j = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Sparse undirected weighted simple graph.
///
/// The edge list is the canonical exchange form (each unordered pair once,
/// i < j, sorted). The weight matrix is materialized as a symmetric row-major
/// sparse matrix so that W*x costs O(n + m).
class WeightedGraph {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  WeightedGraph() = default;

  Index num_nodes() const noexcept { return n_; }
  Index num_edges() const noexcept { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const SparseMatrix& weights() const noexcept { return weights_; }

 private:
  friend WeightedGraph build_graph(Index n, std::span<const Edge> edges);

  Index n_ = 0;
  std::vector<Edge> edges_;
  SparseMatrix weights_;
};

/// Validates and canonicalizes an edge list.
///
/// Throws IndexOutOfRange, SelfLoop, DuplicateEdge or NonpositiveWeight.
WeightedGraph build_graph(Index n, std::span<const Edge> edges);

inline WeightedGraph build_graph(Index n, std::initializer_list<Edge> edges) {
  return build_graph(n, std::span<const Edge>(edges.begin(), edges.size()));
}

struct Components {
  Index count = 0;            // delta
  std::vector<Index> labels;  // labels[i] in [0, count)
};

/// Component labels are assigned in order of the smallest node they contain.
Components connected_components(const WeightedGraph& g);

struct StrengthProfile {
  Eigen::VectorXd strengths;  // s_i = sum_j W_ij
  double total = 0.0;         // s = sum_i s_i
};

StrengthProfile strengths(const WeightedGraph& g);

/// Returns the graph with weights W_ij / sqrt(s_i s_j). Throws ZeroStrengthNode.
WeightedGraph normalize_weights(const WeightedGraph& g);

}  // namespace incio
