#pragma once

// Lanczos-IO: a single Lanczos factorization grown across increasing K. All
// Lanczos vectors are kept, and the factorization is augmented by Z_aug
// vectors until the K leading Ritz pairs meet the tolerance.

#include "incio/eigen_pair.hpp"
#include "incio/incremental.hpp"
#include "incio/laplacian.hpp"
#include "incio/linear_operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace incio {

struct LanczosConfig {
  Index z_ini = 20;
  Index z_aug = 10;
  double tolerance = 0.0;  // 0 selects eps * ||M||
  std::uint64_t seed = 42;
};

/// Stored Lanczos vectors Q (n x Z) and the coupled tridiagonal T.
///
/// M Q = Q T + beta_Z q_{Z+1} e_Z^T holds after every extension. Following a
/// breakdown the pending direction is empty until reseed() draws a random one
/// orthogonal to Q; its coupling to the existing block is zero.
class LanczosState {
 public:
  LanczosState(LinearMap M, Index z_aug, std::uint64_t seed, const Eigen::VectorXd* start = nullptr);

  Index dimension() const noexcept { return M_.rows(); }
  Index size() const noexcept { return alpha_.size(); }
  Index stored_vectors() const noexcept { return size(); }
  Index z_aug() const noexcept { return z_aug_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Index matvecs() const noexcept { return matvecs_; }
  /// ||M|| from 20 power iterations at construction.
  double norm_estimate() const noexcept { return norm_; }

  const LinearMap& op() const noexcept { return M_; }
  Eigen::Ref<const Eigen::MatrixXd> basis() const { return Q_.leftCols(size()); }
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  /// beta[i] couples q_i and q_{i+1} (0-based); size Z - 1.
  Eigen::VectorXd off_diagonal() const { return beta_.head(std::max<Index>(size() - 1, 0)); }
  /// beta_Z, the coupling to the pending vector (0 at Z = n or after breakdown).
  double coupling() const noexcept { return coupling_; }
  /// The pending unit vector q_{Z+1}; empty when none exists.
  const Eigen::VectorXd& pending() const noexcept { return next_; }
  bool broken() const noexcept { return next_.size() == 0 && size() < dimension(); }
  Eigen::MatrixXd tridiagonal() const;

  /// Appends up to `count` vectors (clamped at n). Throws Breakdown(step) on an
  /// invariant subspace; the vectors computed so far are kept.
  void extend(Index count);
  /// Replaces an empty pending direction with a random vector orthogonal to Q.
  void reseed(std::mt19937_64& rng);

 private:
  LinearMap M_;
  Index z_aug_;
  std::uint64_t seed_;
  Index matvecs_ = 0;
  double norm_ = 0.0;   // 20 power iterations
  double anorm_ = 0.0;  // running bound, for breakdown detection
  Eigen::MatrixXd Q_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd beta_;
  double coupling_ = 0.0;
  Eigen::VectorXd next_;
};

/// Ritz pairs of the current factorization, descending by |t|.
struct RitzSet {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;    // Q U, sign-canonicalized columns
  Eigen::VectorXd residuals;  // |beta_Z| |U(Z, i)|
};

/// Seeded random start (or `start` when given) followed by Z_ini steps.
/// Throws Breakdown; use LanczosState::extend directly to keep the state.
LanczosState lanczos_init(LinearMap M, Index z_ini, std::uint64_t seed, Index z_aug = 10,
                          const Eigen::VectorXd* start = nullptr);

/// Extends by z_aug vectors (0 is a no-op).
void lanczos_extend(LanczosState& state, Index z_aug);

/// The K Ritz pairs of largest |t|. Requires K <= Z.
RitzSet ritz_pairs(const LanczosState& state, Index K);

/// Extends by the state's Z_aug until the K leading Ritz pairs all have
/// residual <= tolerance (0 selects eps * ||M||), then returns them. A
/// breakdown restarts the recurrence from a random orthogonal vector.
RitzSet lanczos_io_next(LanczosState& state, Index K, double tolerance = 0.0);

/// Smallest eigenpairs of a Laplacian through Lanczos-IO on
/// M = L + shift V_delta V_delta^T - shift I.
///
/// The delta null-space pairs come from the canonical block; the rest are the
/// leading Ritz pairs of M mapped back by t + shift.
class LanczosIO {
 public:
  explicit LanczosIO(std::shared_ptr<const LaplacianOperator> op, LanczosConfig cfg = {});

  /// K smallest eigenpairs, ascending. Reuses every stored Lanczos vector.
  std::vector<EigenPair> smallest(Index K);

  const LanczosState& state() const noexcept { return *state_; }
  double tolerance() const noexcept { return tolerance_; }
  Index component_count() const noexcept { return trivial_->component_count(); }

 private:
  std::shared_ptr<const LaplacianOperator> op_;
  LanczosConfig cfg_;
  std::unique_ptr<EigenBasis> trivial_;
  std::unique_ptr<InflatedOperator> M_;
  std::unique_ptr<LanczosState> state_;
  double tolerance_ = 0.0;
};

}  // namespace incio
