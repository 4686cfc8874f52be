#include "incio/lanczos_io.hpp"

#include "incio/krylov.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace incio {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kPowerIterations = 20;

double power_norm(const LinearMap& M, std::mt19937_64& rng, Index& matvecs) {
  const Index n = M.rows();
  Eigen::VectorXd x = krylov::detail::random_vector(n, rng).normalized();
  Eigen::VectorXd y(n);
  double norm = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    M.apply(x, y);
    ++matvecs;
    norm = y.norm();
    if (norm == 0.0) break;
    x = y / norm;
  }
  return norm;
}

}  // namespace

LanczosState::LanczosState(LinearMap M, Index z_aug, std::uint64_t seed, const Eigen::VectorXd* start)
    : M_(std::move(M)), z_aug_(z_aug), seed_(seed) {
  const Index n = M_.rows();
  if (n < 1) throw Error("operator dimension must be >= 1");
  if (z_aug < 0) throw Error("Z_aug must be nonnegative");
  std::mt19937_64 rng(seed);
  if (start) {
    if (start->size() != n) throw DimensionMismatch(n, start->size());
    if (!(start->norm() > 0.0)) throw Error("start vector must be nonzero");
    next_ = start->normalized();
  } else {
    next_ = krylov::detail::random_vector(n, rng).normalized();
  }
  norm_ = power_norm(M_, rng, matvecs_);
  anorm_ = norm_;
  Q_.resize(n, 0);
}

Eigen::MatrixXd LanczosState::tridiagonal() const {
  const Index z = size();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(z, z);
  T.diagonal() = alpha_;
  if (z > 1) {
    T.diagonal(1) = beta_.head(z - 1);
    T.diagonal(-1) = beta_.head(z - 1);
  }
  return T;
}

void LanczosState::extend(Index count) {
  if (count < 0) throw Error("extension count must be nonnegative");
  const Index n = dimension();
  const Index target = std::min(size() + count, n);
  if (target == size()) return;
  if (next_.size() == 0) throw Breakdown(size());

  const Index z0 = size();
  Q_.conservativeResize(n, target);
  alpha_.conservativeResize(target);
  beta_.conservativeResize(target);
  Eigen::VectorXd w(n);

  for (Index j = z0; j < target; ++j) {
    Q_.col(j) = next_;
    // The coupling into a freshly reseeded vector is zero by construction.
    if (j > 0) beta_[j - 1] = coupling_;
    M_.apply(Q_.col(j), w);
    ++matvecs_;
    const Eigen::VectorXd h = krylov::detail::orthogonalize(Q_.leftCols(j + 1), w);
    alpha_[j] = h[j];
    const double beta = w.norm();
    anorm_ = std::max(anorm_, std::abs(alpha_[j]) + beta + (j > 0 ? beta_[j - 1] : 0.0));

    if (j + 1 == n) {
      coupling_ = 0.0;
      next_.resize(0);
      alpha_.conservativeResize(j + 1);
      beta_.conservativeResize(j + 1);
      beta_[j] = 0.0;
      return;
    }
    if (beta <= 8.0 * kEps * anorm_) {
      coupling_ = 0.0;
      next_.resize(0);
      Q_.conservativeResize(n, j + 1);
      alpha_.conservativeResize(j + 1);
      beta_.conservativeResize(j + 1);
      beta_[j] = 0.0;
      throw Breakdown(j + 1);
    }
    coupling_ = beta;
    next_ = w / beta;
    beta_[j] = beta;
  }
}

void LanczosState::reseed(std::mt19937_64& rng) {
  if (next_.size() != 0 || size() >= dimension()) return;
  next_.resize(dimension());
  krylov::detail::random_orthogonal(basis(), next_, rng);
  coupling_ = 0.0;
}

LanczosState lanczos_init(LinearMap M, Index z_ini, std::uint64_t seed, Index z_aug, const Eigen::VectorXd* start) {
  if (z_ini < 1) throw Error("Z_ini must be >= 1");
  LanczosState state(std::move(M), z_aug, seed, start);
  state.extend(z_ini);
  return state;
}

void lanczos_extend(LanczosState& state, Index z_aug) { state.extend(z_aug); }

RitzSet ritz_pairs(const LanczosState& state, Index K) {
  const Index z = state.size();
  if (K < 1 || K > z) throw Error("ritz_pairs requires 1 <= K <= Z");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (z == 1) {
    es.compute(state.tridiagonal());
  } else {
    const Eigen::VectorXd sub = state.off_diagonal();
    es.computeFromTridiagonal(state.alpha(), sub);
  }
  if (es.info() != Eigen::Success) throw Error("tridiagonal eigendecomposition failed");
  const Eigen::VectorXd& t = es.eigenvalues();
  const Eigen::MatrixXd& U = es.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(z));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(t[a]) > std::abs(t[b]); });

  RitzSet out;
  out.values.resize(K);
  out.vectors.resize(state.dimension(), K);
  out.residuals.resize(K);
  const auto Q = state.basis();
  for (Index i = 0; i < K; ++i) {
    const Index c = order[i];
    out.values[i] = t[c];
    out.vectors.col(i) = Q * U.col(c);
    canonicalize_sign(out.vectors.col(i));
    out.residuals[i] = std::abs(state.coupling() * U(z - 1, c));
  }
  return out;
}

RitzSet lanczos_io_next(LanczosState& state, Index K, double tolerance) {
  const Index n = state.dimension();
  if (K < 1 || K > n) throw Error("lanczos_io_next requires 1 <= K <= n");
  if (tolerance <= 0.0) tolerance = kEps * state.norm_estimate();
  const Index step = std::max<Index>(state.z_aug(), 1);
  std::mt19937_64 rng(state.seed() + static_cast<std::uint64_t>(state.size()) + 1);

  // A breakdown yields exact but possibly incomplete Ritz pairs, so the
  // reseeded direction is always explored before convergence is accepted.
  bool must_extend = false;
  while (true) {
    if (state.broken()) {
      state.reseed(rng);
      must_extend = true;
    }
    if (state.size() < K || must_extend) {
      must_extend = false;
      try {
        state.extend(std::max(step, K - state.size()));
      } catch (const Breakdown&) {
      }
      continue;
    }
    RitzSet ritz = ritz_pairs(state, K);
    const double worst = ritz.residuals.maxCoeff();
    if (worst <= tolerance) return ritz;
    if (state.size() == n) throw NoConvergence(state.matvecs(), worst);
    try {
      state.extend(step);
    } catch (const Breakdown&) {
    }
  }
}

LanczosIO::LanczosIO(std::shared_ptr<const LaplacianOperator> op, LanczosConfig cfg)
    : op_(std::move(op)), cfg_(cfg) {
  if (!op_) throw Error("null Laplacian operator");
  if (cfg_.z_ini < 1) throw Error("Z_ini must be >= 1");
  if (cfg_.z_aug < 1) throw Error("Z_aug must be >= 1");
  trivial_ = std::make_unique<EigenBasis>(op_);
  M_ = std::make_unique<InflatedOperator>(*trivial_);
  state_ = std::make_unique<LanczosState>(LinearMap::wrap(*M_), cfg_.z_aug, cfg_.seed);
  tolerance_ = cfg_.tolerance > 0.0 ? cfg_.tolerance : kEps * state_->norm_estimate();
  try {
    state_->extend(cfg_.z_ini);
  } catch (const Breakdown&) {
    // lanczos_io_next reseeds on demand.
  }
}

std::vector<EigenPair> LanczosIO::smallest(Index K) {
  const Index n = op_->rows();
  if (K < 1 || K > n) throw Error("LanczosIO::smallest requires 1 <= K <= n");
  const Index delta = trivial_->component_count();
  const double shift = trivial_->shift();

  std::vector<EigenPair> out;
  const Eigen::MatrixXd& Vd = trivial_->trivial_block();
  for (Index k = 0; k < std::min(K, delta); ++k) out.push_back({0.0, Vd.col(k)});
  if (K <= delta) return out;

  const RitzSet ritz = lanczos_io_next(*state_, K - delta, tolerance_);
  for (Index i = 0; i < K - delta; ++i) out.push_back({ritz.values[i] + shift, ritz.vectors.col(i)});
  std::stable_sort(out.begin() + delta, out.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return out;
}

}  // namespace incio
