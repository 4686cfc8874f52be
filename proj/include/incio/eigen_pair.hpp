#pragma once

#include "incio/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <vector>

namespace incio {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Flips the sign so that the largest-magnitude entry is nonnegative
/// (ties go to the lowest index).
inline void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (v.size() > 0 && v[best] < 0.0) v = -v;
}

struct SolverConfig {
  double tolerance = 1e-10;    // relative residual target
  Index max_iterations = 0;    // matvec cap; 0 selects 10 n + 1000
  std::uint64_t seed = 42;     // start-vector seed
  Index subspace = 0;          // Krylov workspace; 0 selects min(2 nev + 10, n)
  bool warm_start = true;      // incremental steps start near the previous runner-up

  void validate() const {
    if (!(tolerance > 0.0)) throw Error("solver tolerance must be positive");
    if (max_iterations < 0) throw Error("max_iterations must be >= 1 (or 0 for the default)");
    if (subspace < 0) throw Error("subspace must be nonnegative");
  }
  Index matvec_cap(Index n) const { return max_iterations > 0 ? max_iterations : 10 * n + 1000; }
};

/// Per-solve accounting reported alongside results.
struct SolveStats {
  Index matvecs = 0;
  Index restarts = 0;
  double residual = 0.0;  // max explicit residual over returned pairs
};

}  // namespace incio
