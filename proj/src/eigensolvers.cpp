#include "incio/eigensolvers.hpp"

#include <algorithm>
#include <numeric>

namespace incio {

namespace {

/// shift * I - L
class ReflectedLaplacian {
 public:
  ReflectedLaplacian(const LaplacianOperator& op, double shift) : op_(op), shift_(shift) {}
  Index rows() const noexcept { return op_.rows(); }
  void apply(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> y) const {
    op_.apply(x, y);
    y = shift_ * x - y;
  }

 private:
  const LaplacianOperator& op_;
  double shift_;
};

}  // namespace

std::vector<EigenPair> batch_smallest(const LaplacianOperator& op, Index K, const SolverConfig& cfg,
                                      SolveStats* stats) {
  cfg.validate();
  const Index n = op.rows();
  if (K < 1 || K > n) throw Error("batch_smallest requires 1 <= K <= n");

  const double shift = op.spectral_shift();
  const ReflectedLaplacian reflected(op, shift);

  krylov::Options opt;
  opt.nev = K;
  opt.subspace = cfg.subspace;
  opt.which = krylov::Which::LargestAlgebraic;
  opt.tolerance = cfg.tolerance;
  opt.max_matvecs = cfg.matvec_cap(n);
  opt.seed = cfg.seed;
  opt.scale = [shift](double theta) { return shift - theta; };
  const krylov::Result r = krylov::thick_restart_lanczos(reflected, opt);

  std::vector<EigenPair> pairs(static_cast<std::size_t>(K));
  Eigen::VectorXd Lv(n);
  double worst = 0.0;
  for (Index i = 0; i < K; ++i) {
    EigenPair& p = pairs[static_cast<std::size_t>(i)];
    p.vector = r.vectors.col(i);
    canonicalize_sign(p.vector);
    op.apply(p.vector, Lv);
    p.value = p.vector.dot(Lv);
    worst = std::max(worst, (Lv - p.value * p.vector).norm());
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  if (stats) {
    stats->matvecs = r.matvecs + K;
    stats->restarts = r.restarts;
    stats->residual = worst;
  }
  return pairs;
}

DenseSpectrum dense_oracle(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch(a.rows(), a.cols());
  if (a.rows() > kDenseOracleLimit) throw TooLargeForDense(a.rows(), kDenseOracleLimit);
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw Error("dense eigendecomposition failed");
  DenseSpectrum out{es.eigenvalues(), es.eigenvectors()};
  for (Index j = 0; j < out.vectors.cols(); ++j) canonicalize_sign(out.vectors.col(j));
  return out;
}

}  // namespace incio
