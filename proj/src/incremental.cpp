#include "incio/incremental.hpp"

#include "incio/krylov.hpp"

#include <chrono>
#include <cmath>

namespace incio {

namespace {
constexpr double kHintBlend = 1e-3;
}  // namespace

EigenBasis::EigenBasis(std::shared_ptr<const LaplacianOperator> op) : op_(std::move(op)) {
  if (!op_) throw Error("null Laplacian operator");
  const Index n = op_->rows();
  const Components& comp = op_->components();
  const Eigen::VectorXd& s = op_->strength_profile().strengths;
  const bool normalized = op_->variant() == LaplacianVariant::Normalized;

  // Column k is supported on component k: constant entries (L) or sqrt(s_i) (L_N).
  trivial_ = Eigen::MatrixXd::Zero(n, comp.count);
  for (Index i = 0; i < n; ++i) trivial_(i, comp.labels[i]) = normalized ? std::sqrt(s[i]) : 1.0;
  for (Index k = 0; k < comp.count; ++k) trivial_.col(k).normalize();

  vectors_.resize(n, 0);
}

Eigen::VectorXd EigenBasis::eigenvalues() const {
  Eigen::VectorXd out(size());
  out.head(component_count()).setZero();
  out.tail(num_computed()) = values_;
  return out;
}

Eigen::MatrixXd EigenBasis::vectors() const {
  Eigen::MatrixXd out(dimension(), size());
  out.leftCols(component_count()) = trivial_;
  out.rightCols(num_computed()) = vectors_;
  return out;
}

Eigen::MatrixXd EigenBasis::leading_vectors(Index k) const {
  if (k < 0 || k > size()) throw Error("requested more eigenvectors than the basis holds");
  Eigen::MatrixXd out(dimension(), k);
  const Index t = std::min(k, component_count());
  out.leftCols(t) = trivial_.leftCols(t);
  out.rightCols(k - t) = vectors_.leftCols(k - t);
  return out;
}

void EigenBasis::append(const EigenPair& pair) {
  const Index n = dimension();
  if (size() >= n) throw BasisFull(n);
  if (pair.vector.size() != n) throw DimensionMismatch(n, pair.vector.size());
  const Index c = vectors_.cols();
  vectors_.conservativeResize(n, c + 1);
  vectors_.col(c) = pair.vector;
  values_.conservativeResize(c + 1);
  values_[c] = pair.value;
}

void InflatedOperator::apply(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) const {
  const Index n = rows();
  if (x.size() != n) throw DimensionMismatch(n, x.size());
  const double shift = basis_.shift();
  basis_.op().apply(x, y);

  const Eigen::MatrixXd& Vk = basis_.computed_vectors();
  if (Vk.cols() > 0) {
    const Eigen::VectorXd coeff = (Vk.transpose() * x).cwiseProduct(basis_.inflation_values());
    y.noalias() += Vk * coeff;
  }
  const Eigen::MatrixXd& Vd = basis_.trivial_block();
  const Eigen::VectorXd t = Vd.transpose() * x;
  y.noalias() += shift * (Vd * t);
  y -= shift * x;
}

Eigen::VectorXd inflated_apply(const EigenBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != basis.dimension()) throw DimensionMismatch(basis.dimension(), x.size());
  Eigen::VectorXd y(x.size());
  InflatedOperator(basis).apply(x, y);
  return y;
}

EigenPair next_eigenpair(EigenBasis& basis, const SolverConfig& cfg, IncrementStats* stats) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Index n = basis.dimension();
  const Index K = basis.size();
  if (K >= n) throw BasisFull(n);

  const double shift = basis.shift();
  const InflatedOperator inflated(basis);

  krylov::Options opt;
  opt.nev = 1;
  opt.subspace = cfg.subspace > 0 ? cfg.subspace : 2 * K + 10;
  opt.which = krylov::Which::LargestMagnitude;
  opt.tolerance = cfg.tolerance;
  opt.max_matvecs = cfg.matvec_cap(n);
  opt.seed = cfg.seed + static_cast<std::uint64_t>(K);
  opt.scale = [shift](double theta) { return theta + shift; };
  if (cfg.warm_start && basis.start_hint().size() == n && basis.start_hint().norm() > 0.0) {
    // Keep every direction present so a poor hint cannot hide the leading pair.
    std::mt19937_64 rng(opt.seed);
    opt.start = basis.start_hint().normalized() + kHintBlend * krylov::detail::random_vector(n, rng).normalized();
  }
  const krylov::Result r = krylov::thick_restart_lanczos(inflated, opt);

  Eigen::VectorXd v = r.vectors.col(0);
  const Eigen::MatrixXd stored = basis.vectors();
  krylov::detail::orthogonalize(stored, v);
  double norm = v.norm();
  if (norm < 1e-8) {
    // Leading direction fell inside the stored span (L~ vanishes on the complement).
    std::mt19937_64 rng(opt.seed);
    krylov::detail::random_orthogonal(stored, v, rng);
    norm = 1.0;
  }
  v /= norm;
  canonicalize_sign(v);

  Eigen::VectorXd Lv(n);
  basis.op().apply(v, Lv);
  EigenPair pair{v.dot(Lv), v};
  const double residual = (Lv - pair.value * v).norm();
  basis.append(pair);
  basis.set_start_hint(r.runner_up);

  if (stats) {
    stats->k = K + 1;
    stats->matvecs = r.matvecs;
    stats->restarts = r.restarts;
    stats->inflated_value = r.values[0];
    stats->residual = residual;
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return pair;
}

SweepResult sweep(std::shared_ptr<const LaplacianOperator> op, Index K_target, const SolverConfig& cfg) {
  if (!op) throw Error("null Laplacian operator");
  if (K_target < 1 || K_target > op->rows()) throw Error("sweep requires 1 <= K_target <= n");
  SweepResult out{EigenBasis(std::move(op)), {}};
  while (out.basis.size() < K_target) {
    IncrementStats st;
    next_eigenpair(out.basis, cfg, &st);
    out.steps.push_back(st);
  }
  return out;
}

}  // namespace incio
