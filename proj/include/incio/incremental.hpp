#pragma once

#include "incio/eigen_pair.hpp"
#include "incio/laplacian.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace incio {

/// The K smallest eigenpairs of a Laplacian computed so far.
///
/// The first delta pairs are the canonical null-space vectors (one per
/// connected component) and are never rotated. Computed pairs follow in
/// ascending order. Each stored pair i carries the inflation value
/// shift - lambda_i, where shift is s (unnormalized) or 2 (normalized); these
/// are derived from the eigenvalues, never stored independently.
class EigenBasis {
 public:
  explicit EigenBasis(std::shared_ptr<const LaplacianOperator> op);

  const LaplacianOperator& op() const noexcept { return *op_; }
  const std::shared_ptr<const LaplacianOperator>& op_ptr() const noexcept { return op_; }
  LaplacianVariant variant() const noexcept { return op_->variant(); }
  Index dimension() const noexcept { return op_->rows(); }
  Index component_count() const noexcept { return trivial_.cols(); }
  Index num_computed() const noexcept { return values_.size(); }
  Index size() const noexcept { return component_count() + num_computed(); }
  double shift() const noexcept { return op_->spectral_shift(); }

  const Eigen::MatrixXd& trivial_block() const noexcept { return trivial_; }
  const Eigen::MatrixXd& computed_vectors() const noexcept { return vectors_; }
  const Eigen::VectorXd& computed_values() const noexcept { return values_; }
  Eigen::VectorXd inflation_values() const { return Eigen::VectorXd::Constant(values_.size(), shift()) - values_; }

  /// All K eigenvalues, ascending (delta zeros first).
  Eigen::VectorXd eigenvalues() const;
  /// n x K matrix [V_delta, computed vectors].
  Eigen::MatrixXd vectors() const;
  /// The first k stored pairs as an n x k block.
  Eigen::MatrixXd leading_vectors(Index k) const;

  /// Appends a computed pair. Throws BasisFull or DimensionMismatch.
  void append(const EigenPair& pair);

  /// Approximation of the next eigenvector left by the previous step (may be
  /// empty). Only affects where the next solve starts, never what it returns.
  const Eigen::VectorXd& start_hint() const noexcept { return hint_; }
  void set_start_hint(Eigen::VectorXd hint) { hint_ = std::move(hint); }

 private:
  std::shared_ptr<const LaplacianOperator> op_;
  Eigen::MatrixXd trivial_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd values_;
  Eigen::VectorXd hint_;
};

/// Basis holding only the canonical null-space block.
inline EigenBasis init_basis(std::shared_ptr<const LaplacianOperator> op) { return EigenBasis(std::move(op)); }

/// Matrix-free inflated operator
///
///   L~ = L + V_K Lambda_K V_K^T + shift * V_delta V_delta^T - shift * I
///
/// covering connected/disconnected graphs and both Laplacian variants. Its
/// leading eigenpair is (lambda_{K+1} - shift, v_{K+1}). Apply costs
/// O(n + m + nK).
class InflatedOperator {
 public:
  explicit InflatedOperator(const EigenBasis& basis) : basis_(basis) {}
  Index rows() const noexcept { return basis_.dimension(); }
  Index cols() const noexcept { return rows(); }
  void apply(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) const;

 private:
  const EigenBasis& basis_;
};

/// L~ x for the current basis. Throws DimensionMismatch.
Eigen::VectorXd inflated_apply(const EigenBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x);

struct IncrementStats {
  Index k = 0;                  // index (1-based) of the pair produced
  Index matvecs = 0;
  Index restarts = 0;
  double inflated_value = 0.0;  // leading eigenvalue of L~
  double residual = 0.0;        // ||L v - lambda v||
  double seconds = 0.0;
};

/// Computes eigenpair K+1 as the leading eigenpair of the inflated operator,
/// re-orthogonalizes it against the stored basis and appends it.
///
/// With cfg.warm_start the Krylov start vector is the basis hint plus a small
/// seeded random component; the previous solve's best unwanted Ritz vector is
/// already close to v_{K+1}.
///
/// The reported eigenvalue is the Rayleigh quotient on L of the
/// re-orthogonalized vector; `inflated_value + shift` agrees with it to within
/// the solver tolerance. Throws BasisFull or NoConvergence.
EigenPair next_eigenpair(EigenBasis& basis, const SolverConfig& cfg, IncrementStats* stats = nullptr);

struct SweepResult {
  EigenBasis basis;
  std::vector<IncrementStats> steps;
};

/// Initializes the basis and calls next_eigenpair until it holds K_target pairs.
SweepResult sweep(std::shared_ptr<const LaplacianOperator> op, Index K_target, const SolverConfig& cfg);

}  // namespace incio
