#include "incio/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace incio {

WeightedGraph build_graph(Index n, std::span<const Edge> edges) {
  if (n < 0) throw IndexOutOfRange(n, n);

  std::vector<Edge> canonical;
  canonical.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.i < 0 || e.i >= n) throw IndexOutOfRange(e.i, n);
    if (e.j < 0 || e.j >= n) throw IndexOutOfRange(e.j, n);
    if (e.i == e.j) throw SelfLoop(e.i);
    if (!(e.w > 0.0) || !std::isfinite(e.w)) throw NonpositiveWeight(e.i, e.j);
    canonical.push_back({std::min(e.i, e.j), std::max(e.i, e.j), e.w});
  }
  std::sort(canonical.begin(), canonical.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < canonical.size(); ++k) {
    if (canonical[k].i == canonical[k - 1].i && canonical[k].j == canonical[k - 1].j)
      throw DuplicateEdge(canonical[k].i, canonical[k].j);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * canonical.size());
  for (const Edge& e : canonical) {
    triplets.emplace_back(e.i, e.j, e.w);
    triplets.emplace_back(e.j, e.i, e.w);
  }

  WeightedGraph g;
  g.n_ = n;
  g.edges_ = std::move(canonical);
  g.weights_.resize(n, n);
  g.weights_.setFromTriplets(triplets.begin(), triplets.end());
  g.weights_.makeCompressed();
  return g;
}

Components connected_components(const WeightedGraph& g) {
  const Index n = g.num_nodes();
  Components out;
  out.labels.assign(static_cast<std::size_t>(n), -1);

  const auto& W = g.weights();
  std::vector<Index> stack;
  for (Index root = 0; root < n; ++root) {
    if (out.labels[root] >= 0) continue;
    const Index label = out.count++;
    out.labels[root] = label;
    stack.push_back(root);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (WeightedGraph::SparseMatrix::InnerIterator it(W, u); it; ++it) {
        const Index v = it.col();
        if (out.labels[v] < 0) {
          out.labels[v] = label;
          stack.push_back(v);
        }
      }
    }
  }
  return out;
}

StrengthProfile strengths(const WeightedGraph& g) {
  StrengthProfile p;
  p.strengths = Eigen::VectorXd::Zero(g.num_nodes());
  const auto& W = g.weights();
  for (Index i = 0; i < W.outerSize(); ++i) {
    double sum = 0.0;
    for (WeightedGraph::SparseMatrix::InnerIterator it(W, i); it; ++it) sum += it.value();
    p.strengths[i] = sum;
  }
  p.total = p.strengths.sum();
  return p;
}

WeightedGraph normalize_weights(const WeightedGraph& g) {
  const StrengthProfile p = strengths(g);
  for (Index i = 0; i < g.num_nodes(); ++i) {
    if (!(p.strengths[i] > 0.0)) throw ZeroStrengthNode(i);
  }
  std::vector<Edge> scaled;
  scaled.reserve(g.edges().size());
  for (const Edge& e : g.edges())
    scaled.push_back({e.i, e.j, e.w / std::sqrt(p.strengths[e.i] * p.strengths[e.j])});
  return build_graph(g.num_nodes(), scaled);
}

}  // namespace incio
