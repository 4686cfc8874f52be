#include "incio/laplacian.hpp"

#include <cmath>
#include <string>

namespace incio {

std::string_view to_string(LaplacianVariant v) {
  return v == LaplacianVariant::Unnormalized ? "unnormalized" : "normalized";
}

LaplacianVariant parse_variant(std::string_view name) {
  if (name == "unnormalized") return LaplacianVariant::Unnormalized;
  if (name == "normalized") return LaplacianVariant::Normalized;
  throw Error("unknown Laplacian variant '" + std::string(name) + "'");
}

LaplacianOperator::LaplacianOperator(std::shared_ptr<const WeightedGraph> graph, LaplacianVariant variant)
    : graph_(std::move(graph)), variant_(variant) {
  if (!graph_) throw Error("null graph");
  strengths_ = strengths(*graph_);
  components_ = connected_components(*graph_);
  if (variant_ == LaplacianVariant::Normalized) {
    const Index n = graph_->num_nodes();
    inv_sqrt_strength_.resize(n);
    for (Index i = 0; i < n; ++i) {
      const double s = strengths_.strengths[i];
      if (!(s > 0.0)) throw ZeroStrengthNode(i);
      inv_sqrt_strength_[i] = 1.0 / std::sqrt(s);
    }
  }
}

void LaplacianOperator::apply(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) const {
  if (x.size() != rows()) throw DimensionMismatch(rows(), x.size());
  const auto& W = graph_->weights();
  if (variant_ == LaplacianVariant::Unnormalized) {
    y.noalias() = W * x;
    y = strengths_.strengths.cwiseProduct(x) - y;
  } else {
    const Eigen::VectorXd scaled = inv_sqrt_strength_.cwiseProduct(x);
    y.noalias() = W * scaled;
    y = x - inv_sqrt_strength_.cwiseProduct(y);
  }
}

double LaplacianOperator::trace() const noexcept {
  return variant_ == LaplacianVariant::Unnormalized ? strengths_.total
                                                     : static_cast<double>(graph_->num_nodes());
}

LaplacianOperator laplacian(std::shared_ptr<const WeightedGraph> graph, LaplacianVariant variant) {
  return LaplacianOperator(std::move(graph), variant);
}

}  // namespace incio
