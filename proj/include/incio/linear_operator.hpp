#pragma once

#include "incio/errors.hpp"

#include <Eigen/Core>

#include <concepts>
#include <functional>
#include <utility>

namespace incio {

/// A square matrix-free operator: `rows()` plus `apply(x, y)` computing y = A x.
template <class Op>
concept SymmetricOperator =
    requires(const Op& op, Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) {
      { op.rows() } -> std::convertible_to<Index>;
      op.apply(x, y);
    };

/// Type-erased operator, used where an operator must be stored by value.
class LinearMap {
 public:
  using ApplyFn = std::function<void(Eigen::Ref<const Eigen::VectorXd>, Eigen::Ref<Eigen::VectorXd>)>;

  LinearMap() = default;
  LinearMap(Index n, ApplyFn fn) : n_(n), fn_(std::move(fn)) {}

  /// Wraps any operator by reference; the referenced object must outlive the map.
  template <SymmetricOperator Op>
    requires(!std::same_as<std::remove_cvref_t<Op>, LinearMap>)
  static LinearMap wrap(const Op& op) {
    return LinearMap(op.rows(), [&op](Eigen::Ref<const Eigen::VectorXd> x,
                                      Eigen::Ref<Eigen::VectorXd> y) { op.apply(x, y); });
  }

  Index rows() const noexcept { return n_; }
  Index cols() const noexcept { return n_; }
  void apply(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) const { fn_(x, y); }

 private:
  Index n_ = 0;
  ApplyFn fn_;
};

/// Dense symmetric matrix exposed through the operator interface.
class DenseOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXd a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw DimensionMismatch(a_.rows(), a_.cols());
  }
  Index rows() const noexcept { return a_.rows(); }
  Index cols() const noexcept { return a_.cols(); }
  void apply(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) const { y.noalias() = a_ * x; }
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }

 private:
  Eigen::MatrixXd a_;
};

/// y = A x, allocating the result.
template <SymmetricOperator Op>
Eigen::VectorXd apply(const Op& op, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXd y(op.rows());
  op.apply(x, y);
  return y;
}

/// Materializes an operator column by column. Meant for small test-scale n.
template <SymmetricOperator Op>
Eigen::MatrixXd dense_matrix(const Op& op) {
  const Index n = op.rows();
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, a.col(j));
    e[j] = 0.0;
  }
  return a;
}

}  // namespace incio
