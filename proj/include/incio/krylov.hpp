#pragma once

// Thick-restart Lanczos for a few extreme eigenpairs of a symmetric
// matrix-free operator. Workspace is a fixed number of basis vectors; on
// restart the wanted Ritz vectors (plus some of the next best) are kept and
// the projected matrix becomes diagonal-plus-arrow. Pairs whose explicit
// residual meets the target are locked and deflated by orthogonal projection.

#include "incio/eigen_pair.hpp"
#include "incio/linear_operator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace incio::krylov {

enum class Which { LargestMagnitude, LargestAlgebraic };

struct Options {
  Index nev = 1;
  Index subspace = 0;  // 0 selects min(2 nev + 10, n)
  Which which = Which::LargestMagnitude;
  double tolerance = 1e-10;
  Index max_matvecs = 0;  // 0 selects 10 n + 1000
  std::uint64_t seed = 42;
  // Residual target for a Ritz value theta is tolerance * max(1, |scale(theta)|),
  // floored at kAttainableFloor * eps * ||A||. scale defaults to the identity.
  std::function<double(double)> scale;
  // Start vector; empty selects a seeded uniform random one.
  Eigen::VectorXd start;
};

struct Result {
  Eigen::VectorXd values;     // ordered by `which`
  Eigen::MatrixXd vectors;    // unit columns
  Eigen::VectorXd residuals;  // explicit ||A x - theta x||
  Index matvecs = 0;
  Index restarts = 0;
  // Best unwanted Ritz vector of the final cycle (empty if none was available).
  Eigen::VectorXd runner_up;
};

/// Residual targets never go below this many ulps of the operator norm; a
/// Krylov residual cannot be resolved more finely than that.
inline constexpr double kAttainableFloor = 64.0;

namespace detail {

/// Iterated classical Gram-Schmidt of w against the columns of V. Returns the
/// accumulated projection coefficients.
inline Eigen::VectorXd orthogonalize(const Eigen::Ref<const Eigen::MatrixXd>& V, Eigen::Ref<Eigen::VectorXd> w) {
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(V.cols());
  if (V.cols() == 0) return coeffs;
  double before = w.norm();
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd h = V.transpose() * w;
    w.noalias() -= V * h;
    coeffs += h;
    const double after = w.norm();
    if (after > 0.7071 * before) break;
    before = after;
  }
  return coeffs;
}

inline Eigen::VectorXd random_vector(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

/// Fills `out` with a random unit vector orthogonal to the columns of V.
inline void random_orthogonal(const Eigen::Ref<const Eigen::MatrixXd>& V, Eigen::Ref<Eigen::VectorXd> out,
                              std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::VectorXd v = random_vector(out.size(), rng);
    v.normalize();
    orthogonalize(V, v);
    const double norm = v.norm();
    if (norm > 1e-6) {
      out = v / norm;
      return;
    }
  }
  throw Error("could not draw a vector outside the current Krylov basis");
}

}  // namespace detail

template <SymmetricOperator Op>
Result thick_restart_lanczos(const Op& op, const Options& opt) {
  const Index n = op.rows();
  if (n < 1) throw Error("operator dimension must be >= 1");
  if (opt.nev < 1 || opt.nev > n) throw Error("number of requested eigenpairs must lie in [1, n]");

  const Index nev = opt.nev;
  Index m = opt.subspace > 0 ? opt.subspace : 2 * nev + 10;
  m = std::min(std::max(m, nev + 1), n);
  const Index cap = opt.max_matvecs > 0 ? opt.max_matvecs : 10 * n + 1000;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  double anorm = 0.0;
  const auto target = [&](double theta) {
    const double s = opt.scale ? opt.scale(theta) : theta;
    return std::max(opt.tolerance * std::max(1.0, std::abs(s)), kAttainableFloor * eps * anorm);
  };
  const auto key = [&](double theta) { return opt.which == Which::LargestMagnitude ? std::abs(theta) : theta; };

  std::mt19937_64 rng(opt.seed);
  Eigen::MatrixXd locked(n, nev);
  Eigen::VectorXd locked_values(nev);
  Eigen::VectorXd locked_residuals(nev);
  Index nl = 0;

  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd w(n);
  if (opt.start.size() == n && opt.start.norm() > 0.0)
    V.col(0) = opt.start.normalized();
  else
    V.col(0) = detail::random_vector(n, rng).normalized();

  Result out;
  Index start = 0;

  while (true) {
    const Index active = std::min(m, n - nl);
    const auto L = locked.leftCols(nl);
    Index built = active;
    double beta_last = 0.0;
    bool full_space = false;

    for (Index j = start; j < active; ++j) {
      op.apply(V.col(j), w);
      ++out.matvecs;
      detail::orthogonalize(L, w);
      const Eigen::VectorXd h = detail::orthogonalize(V.leftCols(j + 1), w);
      H.col(j).head(j + 1) = h;
      H.row(j).head(j + 1) = h.transpose();
      double beta = w.norm();
      anorm = std::max(anorm, h.cwiseAbs().sum() + beta);

      if (j + 1 == n - nl) {
        full_space = true;
        built = j + 1;
        beta_last = 0.0;
        break;
      }
      if (beta <= 8.0 * eps * anorm) {
        // Invariant subspace: continue in a fresh direction with zero coupling.
        Eigen::MatrixXd span(n, nl + j + 1);
        span << L, V.leftCols(j + 1);
        detail::random_orthogonal(span, V.col(j + 1), rng);
        beta = 0.0;
      } else {
        V.col(j + 1) = w / beta;
      }
      beta_last = beta;
    }

    const Index mm = built;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(mm, mm));
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& Y = es.eigenvectors();

    std::vector<Index> order(static_cast<std::size_t>(mm));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return key(theta[a]) > key(theta[b]); });

    // Lock every wanted Ritz pair whose explicit residual meets its target.
    std::vector<bool> just_locked(static_cast<std::size_t>(mm), false);
    double worst = 0.0;
    const Index wanted = std::min(nev - nl, mm);
    for (Index i = 0; i < wanted; ++i) {
      const Index c = order[i];
      const double est = std::abs(beta_last * Y(mm - 1, c));
      if (!full_space && est > target(theta[c])) {
        worst = std::max(worst, est);
        continue;
      }
      Eigen::VectorXd x = V.leftCols(mm) * Y.col(c);
      x.normalize();
      op.apply(x, w);
      ++out.matvecs;
      const double r = (w - theta[c] * x).norm();
      if (r <= target(theta[c])) {
        locked.col(nl) = x;
        locked_values[nl] = theta[c];
        locked_residuals[nl] = r;
        ++nl;
        just_locked[c] = true;
      } else {
        worst = std::max(worst, r);
      }
    }

    if (nl == nev) {
      for (Index c : order) {
        if (just_locked[c]) continue;
        out.runner_up = V.leftCols(mm) * Y.col(c);
        break;
      }
      std::vector<Index> idx(static_cast<std::size_t>(nev));
      std::iota(idx.begin(), idx.end(), Index{0});
      std::stable_sort(idx.begin(), idx.end(),
                       [&](Index a, Index b) { return key(locked_values[a]) > key(locked_values[b]); });
      out.values.resize(nev);
      out.vectors.resize(n, nev);
      out.residuals.resize(nev);
      for (Index i = 0; i < nev; ++i) {
        out.values[i] = locked_values[idx[i]];
        out.vectors.col(i) = locked.col(idx[i]);
        out.residuals[i] = locked_residuals[idx[i]];
      }
      return out;
    }

    if (out.matvecs >= cap) throw NoConvergence(out.matvecs, worst);

    // Thick restart: keep the still-wanted Ritz vectors plus half of the rest.
    std::vector<Index> remaining;
    for (Index c : order)
      if (!just_locked[c]) remaining.push_back(c);
    const Index next_active = std::min(m, n - nl);
    const Index still_wanted = nev - nl;
    const Index keep = std::min({static_cast<Index>(remaining.size()), next_active - 1,
                                 still_wanted + (next_active - still_wanted) / 2});
    Eigen::MatrixXd Ykeep(mm, keep);
    for (Index i = 0; i < keep; ++i) Ykeep.col(i) = Y.col(remaining[i]);
    const Eigen::MatrixXd kept = V.leftCols(mm) * Ykeep;
    if (!full_space) {
      const Eigen::VectorXd next = V.col(mm);
      V.leftCols(keep) = kept;
      V.col(keep) = next;
    } else {
      V.leftCols(keep) = kept;
      Eigen::MatrixXd span(n, nl + keep);
      span << locked.leftCols(nl), kept;
      detail::random_orthogonal(span, V.col(keep), rng);
    }
    H.setZero();
    for (Index i = 0; i < keep; ++i) H(i, i) = theta[remaining[i]];
    start = keep;
    ++out.restarts;
  }
}

}  // namespace incio::krylov
