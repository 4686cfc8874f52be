#pragma once

#include "incio/eigen_pair.hpp"
#include "incio/krylov.hpp"
#include "incio/laplacian.hpp"

#include <Eigen/Dense>

#include <vector>

namespace incio {

struct LeadingResult {
  EigenPair pair;
  Index iterations = 0;  // matrix-vector products
  double residual = 0.0;
};

/// Eigenpair of largest |lambda| of a symmetric operator.
///
/// The returned pair satisfies ||A v - lambda v|| <= tolerance * max(1, |lambda|)
/// and is deterministic for a fixed seed. The vector is sign-canonicalized.
/// Convergence of a Lanczos-type iteration on the leading eigenvalue behaves
/// like O((ln n)^2 / t^2) in the average relative error after t iterations.
template <SymmetricOperator Op>
LeadingResult leading_eigenpair(const Op& op, const SolverConfig& cfg) {
  cfg.validate();
  krylov::Options opt;
  opt.nev = 1;
  opt.subspace = cfg.subspace;
  opt.which = krylov::Which::LargestMagnitude;
  opt.tolerance = cfg.tolerance;
  opt.max_matvecs = cfg.matvec_cap(op.rows());
  opt.seed = cfg.seed;
  krylov::Result r = krylov::thick_restart_lanczos(op, opt);

  LeadingResult out;
  out.pair.value = r.values[0];
  out.pair.vector = r.vectors.col(0);
  canonicalize_sign(out.pair.vector);
  out.iterations = r.matvecs;
  out.residual = r.residuals[0];
  return out;
}

/// The K smallest eigenpairs of a Laplacian, recomputed from scratch.
///
/// Computed as the K leading eigenpairs of shift*I - L (shift = s or 2) and
/// mapped back. Values are Rayleigh quotients on L, ascending.
std::vector<EigenPair> batch_smallest(const LaplacianOperator& op, Index K, const SolverConfig& cfg,
                                      SolveStats* stats = nullptr);

struct DenseSpectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal, sign-canonicalized columns
};

inline constexpr Index kDenseOracleLimit = 2000;

/// Full eigendecomposition of a dense symmetric matrix (test reference).
DenseSpectrum dense_oracle(const Eigen::MatrixXd& a);

template <SymmetricOperator Op>
DenseSpectrum dense_oracle(const Op& op) {
  if (op.rows() > kDenseOracleLimit) throw TooLargeForDense(op.rows(), kDenseOracleLimit);
  return dense_oracle(dense_matrix(op));
}

/// Explicit residual ||A v - lambda v||.
template <SymmetricOperator Op>
double residual_norm(const Op& op, double value, const Eigen::Ref<const Eigen::VectorXd>& v) {
  Eigen::VectorXd y(op.rows());
  op.apply(v, y);
  return (y - value * v).norm();
}

}  // namespace incio
