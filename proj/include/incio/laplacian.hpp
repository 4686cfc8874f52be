#pragma once

#include "incio/graph.hpp"
#include "incio/linear_operator.hpp"

#include <memory>
#include <string_view>

namespace incio {

enum class LaplacianVariant { Unnormalized, Normalized };

std::string_view to_string(LaplacianVariant v);
LaplacianVariant parse_variant(std::string_view name);

/// Matrix-free graph Laplacian.
///
/// Unnormalized: L x = S x - W x.
/// Normalized:   L_N x = x - S^{-1/2} W S^{-1/2} x (requires every s_i > 0).
///
/// Immutable after construction; safe to share between threads.
class LaplacianOperator {
 public:
  LaplacianOperator(std::shared_ptr<const WeightedGraph> graph, LaplacianVariant variant);

  Index rows() const noexcept { return graph_->num_nodes(); }
  Index cols() const noexcept { return rows(); }
  void apply(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) const;

  LaplacianVariant variant() const noexcept { return variant_; }
  const WeightedGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const WeightedGraph>& graph_ptr() const noexcept { return graph_; }
  const StrengthProfile& strength_profile() const noexcept { return strengths_; }
  const Components& components() const noexcept { return components_; }

  /// Sum of the diagonal: s (unnormalized) or n (normalized).
  double trace() const noexcept;

  /// Upper bound of the spectrum used as inflation shift: s or 2.
  double spectral_shift() const noexcept { return variant_ == LaplacianVariant::Unnormalized ? strengths_.total : 2.0; }

 private:
  std::shared_ptr<const WeightedGraph> graph_;
  LaplacianVariant variant_;
  StrengthProfile strengths_;
  Components components_;
  Eigen::VectorXd inv_sqrt_strength_;  // normalized variant only
};

LaplacianOperator laplacian(std::shared_ptr<const WeightedGraph> graph, LaplacianVariant variant);

inline LaplacianOperator laplacian(const WeightedGraph& graph, LaplacianVariant variant) {
  return laplacian(std::make_shared<const WeightedGraph>(graph), variant);
}

inline double trace_of_laplacian(const LaplacianOperator& op) { return op.trace(); }

}  // namespace incio
