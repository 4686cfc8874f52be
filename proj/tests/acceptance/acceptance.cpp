// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. CSV artifacts go to ./acceptance_out.

#include "incio/bench.hpp"
#include "incio/clustering.hpp"
#include "incio/eigensolvers.hpp"
#include "incio/incremental.hpp"
#include "incio/ingest.hpp"
#include "incio/lanczos_io.hpp"
#include "incio/session.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace incio;

namespace {

using Clock = std::chrono::steady_clock;

const std::filesystem::path kOut = "acceptance_out";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const LaplacianOperator> make_op(const WeightedGraph& g, LaplacianVariant v) {
  return std::make_shared<const LaplacianOperator>(std::make_shared<const WeightedGraph>(g), v);
}

constexpr LaplacianVariant kVariants[] = {LaplacianVariant::Unnormalized, LaplacianVariant::Normalized};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const auto suite = oracle::graph_suite();
  double worst_value = 0.0;
  double worst_residual = 0.0;
  int runs = 0;
  for (const auto& [name, g] : suite) {
    for (LaplacianVariant v : kVariants) {
      const auto op = make_op(g, v);
      const Index K = std::min<Index>(g.num_nodes(), 12);
      const Eigen::VectorXd ref = oracle::spectrum(oracle::dense_laplacian(g, v));
      const SweepResult r = sweep(op, K, SolverConfig{});
      const Eigen::VectorXd vals = r.basis.eigenvalues();
      const Eigen::MatrixXd vecs = r.basis.vectors();
      for (Index k = 0; k < K; ++k) {
        worst_value = std::max(worst_value, std::abs(vals[k] - ref[k]));
        worst_residual = std::max(worst_residual, residual_norm(*op, vals[k], vecs.col(k)));
      }
      ++runs;
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool pass = suite.size() >= 50 && worst_value <= 1e-8 && worst_residual <= 1e-8 && secs <= 60.0;
  return {pass, fmt("%zu graphs x 2 variants = %d sweeps, max |dlambda| %.2e, max residual %.2e, %.1f s", suite.size(),
                    runs, worst_value, worst_residual, secs)};
}

Outcome consistency() {
  const auto start = Clock::now();
  const WeightedGraph g = oracle::connected_er(2000, 0.01, 2024);
  const auto op = make_op(g, LaplacianVariant::Unnormalized);
  const auto batch = batch_smallest(*op, 20, SolverConfig{});
  const SweepResult inc = sweep(op, 20, SolverConfig{});
  const Eigen::VectorXd vi = inc.basis.eigenvalues();
  const Eigen::MatrixXd Vi = inc.basis.vectors();
  Eigen::VectorXd vb(20);
  for (Index k = 0; k < 20; ++k) vb[k] = batch[static_cast<std::size_t>(k)].value;
  const double diff = (vb - vi).norm();

  double worst_corr = 1.0;
  int compared = 0;
  for (Index k = 0; k < 20; ++k) {
    const bool lower = k == 0 || vb[k] - vb[k - 1] > 1e-6;
    const bool upper = k == 19 || vb[k + 1] - vb[k] > 1e-6;
    if (!lower || !upper) continue;
    worst_corr = std::min(worst_corr, std::abs(Vi.col(k).dot(batch[static_cast<std::size_t>(k)].vector)));
    ++compared;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool pass = diff <= 1e-9 && 1.0 - worst_corr <= 1e-8 && secs <= 300.0;
  return {pass, fmt("ER(2000, 0.01) m=%ld, |lambda_batch - lambda_inc| = %.2e, min |corr| = 1 - %.1e over %d gapped pairs, %.1f s",
                    static_cast<long>(g.num_edges()), diff, 1.0 - worst_corr, compared, secs)};
}

Outcome spectrum_structure() {
  double worst = 0.0;
  int cases = 0;
  bool counts_ok = true;
  for (const auto& [name, g] : oracle::graph_suite()) {
    if (g.num_nodes() > 50) continue;
    for (LaplacianVariant v : kVariants) {
      const auto op = make_op(g, v);
      const Index n = g.num_nodes();
      const Eigen::VectorXd lam = oracle::spectrum(oracle::dense_laplacian(g, v));
      const Index k_max = std::min<Index>(8, n - 1);
      const SweepResult r = sweep(op, std::max<Index>(k_max, op->components().count), SolverConfig{});
      for (Index K = op->components().count; K <= k_max; ++K) {
        EigenBasis b = init_basis(op);
        for (Index k = 0; b.size() < K; ++k) b.append({r.basis.computed_values()[k], r.basis.computed_vectors().col(k)});
        const Eigen::VectorXd got = oracle::spectrum(dense_matrix(InflatedOperator(b)));

        Eigen::VectorXd expected(n);
        expected.head(K).setZero();
        expected.tail(n - K) = lam.tail(n - K).array() - op->spectral_shift();
        std::sort(expected.data(), expected.data() + n);
        worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());

        // Exactly K zeros, plus any lambda_i = shift that the prediction itself puts at zero.
        const Index zeros = (got.array().abs() <= 1e-8).count();
        const Index predicted = (expected.array().abs() <= 1e-8).count();
        counts_ok = counts_ok && zeros == predicted && predicted >= K;
        ++cases;
      }
    }
  }
  return {worst <= 1e-8 && counts_ok,
          fmt("%d (graph, variant, K) cases with n <= 50, K <= 8, max deviation %.2e, zero counts %s", cases, worst,
              counts_ok ? "match" : "MISMATCH")};
}

Outcome inflation_lemmas() {
  double worst = 0.0;
  double worst_top = 0.0;
  int cases = 0;
  for (const auto& [name, g] : oracle::graph_suite()) {
    for (LaplacianVariant v : kVariants) {
      const auto op = make_op(g, v);
      const Index n = g.num_nodes();
      const Eigen::MatrixXd L = dense_matrix(*op);
      const double s = op->strength_profile().total;
      Eigen::MatrixXd inflated;
      double top = 0.0;
      if (v == LaplacianVariant::Unnormalized) {
        inflated = L + (s / static_cast<double>(n)) * Eigen::MatrixXd::Ones(n, n);
        top = s;
      } else {
        const Eigen::VectorXd r = op->strength_profile().strengths.cwiseSqrt();
        inflated = L + (2.0 / s) * r * r.transpose();
        top = 2.0;
      }
      // One zero eigenvalue moves to the top; the rest of the spectrum stays.
      Eigen::VectorXd expected = oracle::spectrum(oracle::dense_laplacian(g, v));
      expected[0] = top;
      std::sort(expected.data(), expected.data() + n);
      const Eigen::VectorXd got = oracle::spectrum(inflated);
      worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());
      worst_top = std::max(worst_top, std::abs(got[n - 1] - top));
      ++cases;
    }
  }
  return {worst <= 1e-8 && worst_top <= 1e-8,
          fmt("%d cases, max multiset deviation %.2e, top value vs s or 2 %.2e", cases, worst, worst_top)};
}

Outcome timing_trend() {
  const auto start = Clock::now();
  BenchConfig cfg;
  cfg.k_max = 10;
  cfg.trials = 5;
  cfg.dataset = "er";
  cfg.p = 0.1;
  const auto records = run_sweep(std::make_shared<const WeightedGraph>(oracle::connected_er(2000, 0.1, 7)), cfg);
  write_file(kOut / "timing.csv", bench_csv(records));

  bool pass = true;
  std::string per_trial;
  double worst_growth = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    std::map<Method, double> total;
    std::map<Method, Index> matvecs;
    for (const BenchRecord& r : records) {
      if (r.trial != t) continue;
      pass = pass && r.status == "ok";
      if (r.K == cfg.k_max) total[r.method] = r.cumulative_seconds;
      matvecs[r.method] += r.matvecs;
    }
    const double growth = matvec_growth(records, Method::Incremental, t);
    worst_growth = std::max(worst_growth, growth);
    pass = pass && total.count(Method::Incremental) && total.count(Method::Batch) &&
           total[Method::Incremental] < total[Method::Batch] && growth > 0.0 && growth <= 20.0;
    per_trial += fmt(" [%.3f vs %.3f s, %ld vs %ld mv]", total[Method::Incremental], total[Method::Batch],
                     static_cast<long>(matvecs[Method::Incremental]), static_cast<long>(matvecs[Method::Batch]));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  pass = pass && secs <= 600.0;
  return {pass, fmt("incremental vs batch cumulative at K=10 per trial:%s; max matvec growth %.2f; %.1f s",
                    per_trial.c_str(), worst_growth, secs)};
}

Outcome lanczos_io() {
  const Index zaug_values[] = {2, 10, 50};
  double worst = 0.0;
  int runs = 0;
  for (const auto& [name, g] : oracle::graph_suite()) {
    if (!(name.starts_with("er") || name.starts_with("path"))) continue;
    for (LaplacianVariant v : kVariants) {
      const auto op = make_op(g, v);
      const Eigen::VectorXd ref = oracle::spectrum(oracle::dense_laplacian(g, v));
      for (Index z : zaug_values) {
        LanczosIO lz(op, LanczosConfig{.z_aug = z});
        for (Index K = 1; K <= std::min<Index>(g.num_nodes(), 12); ++K) {
          const auto pairs = lz.smallest(K);
          for (Index k = 0; k < K; ++k) worst = std::max(worst, std::abs(pairs[static_cast<std::size_t>(k)].value - ref[k]));
        }
        ++runs;
      }
    }
  }

  BenchConfig cfg;
  cfg.k_max = 10;
  cfg.trials = 3;
  cfg.dataset = "er";
  cfg.p = 0.1;
  const auto records = zaug_sensitivity(std::make_shared<const WeightedGraph>(oracle::connected_er(1000, 0.1, 3)), cfg,
                                        std::vector<Index>(std::begin(zaug_values), std::end(zaug_values)));
  write_file(kOut / "zaug.csv", bench_csv(records));
  bool series_ok = true;
  std::string series;
  for (Index z : zaug_values) {
    double secs = 0.0;
    Index stored = 0;
    int rows = 0;
    for (const BenchRecord& r : records) {
      if (r.method != Method::LanczosIO || r.zaug != z) continue;
      series_ok = series_ok && r.status == "ok";
      ++rows;
      if (r.K == cfg.k_max) {
        secs += r.cumulative_seconds / cfg.trials;
        stored = r.stored_vectors;
      }
    }
    series_ok = series_ok && rows == 9 * cfg.trials;
    series += fmt(" [Z_aug=%ld: %.3f s, %ld vectors]", static_cast<long>(z), secs, static_cast<long>(stored));
  }
  for (const BenchRecord& r : records) series_ok = series_ok && r.status == "ok";
  return {worst <= 1e-6 && series_ok,
          fmt("%d runs on ER and path graphs, max |dlambda| %.2e; ER(1000, 0.1) series at K=10:%s", runs, worst,
              series.c_str())};
}

Outcome metric_identities() {
  bool modularity_zero = true;
  bool nc_zero = true;
  bool energy_ok = true;
  double worst_energy = 0.0;
  double worst_brute = 0.0;
  int brute_cases = 0;
  std::mt19937_64 rng(99);
  for (const auto& [name, g] : oracle::graph_suite()) {
    const Index n = g.num_nodes();
    modularity_zero = modularity_zero && modularity(g, std::vector<Index>(static_cast<std::size_t>(n), 0)) == 0.0;
    const Components comp = connected_components(g);
    if (comp.count > 1) nc_zero = nc_zero && scaled_normalized_cut(g, comp.labels, comp.count) == 0.0;

    if (n > 30) continue;
    for (LaplacianVariant v : kVariants) {
      const auto op = make_op(g, v);
      const Eigen::VectorXd lam = sweep(op, n, SolverConfig{}).basis.eigenvalues();
      double prev = 0.0;
      for (Index K = 1; K <= n; ++K) {
        const double e = scaled_spectrum_energy(lam.head(K), *op);
        energy_ok = energy_ok && e >= prev;
        prev = e;
      }
      worst_energy = std::max(worst_energy, std::abs(prev - 1.0));
    }
    for (Index K = 1; K <= std::min<Index>(n, 4); ++K) {
      std::uniform_int_distribution<Index> pick(0, K - 1);
      std::vector<Index> labels(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i < K ? i : pick(rng);
      worst_brute = std::max(worst_brute, std::abs(modularity(g, labels) - oracle::modularity(g, labels)));
      worst_brute = std::max(worst_brute,
                             std::abs(scaled_normalized_cut(g, labels, K) - oracle::scaled_normalized_cut(g, labels, K)));
      ++brute_cases;
    }
  }
  const bool pass = modularity_zero && nc_zero && energy_ok && worst_energy <= 1e-9 && worst_brute <= 1e-12;
  return {pass, fmt("modularity(K=1)=0 %s; NC=0 on components %s; energy monotone %s, |E(n)-1| %.1e; brute force "
                    "max diff %.1e over %d labelings",
                    modularity_zero ? "yes" : "NO", nc_zero ? "yes" : "NO", energy_ok ? "yes" : "NO", worst_energy,
                    worst_brute, brute_cases)};
}

Outcome end_to_end() {
  constexpr double kNoise = 0.08;
  constexpr std::uint64_t kSeed = 2;
  const LabeledPoints moons = two_moons(400, kNoise, kSeed);
  const WeightedGraph g = knn_graph(moons.cloud, 8, Kernel::Gaussian, 0.05);

  auto run = [&] {
    Session s(g, SessionConfig{});
    for (Index K = 2; K <= 8; ++K) s.step();
    return s.metrics_history();
  };
  const auto first = run();
  const auto second = run();
  const std::string csv = metrics_csv(first);
  write_file(kOut / "two_moons_metrics.csv", csv);
  const bool deterministic = csv == metrics_csv(second) && first == second;
  const double agreement = oracle::best_agreement(moons.labels, first.front().labels, 2);
  const bool pass = connected_components(g).count == 1 && first.size() == 7 && deterministic && agreement >= 0.95;
  return {pass, fmt("two moons n=400 noise %.2f seed %lu, 8-NN gaussian sigma 0.05, K=2..8 CSV %s, K=2 agreement %.4f",
                    kNoise, static_cast<unsigned long>(kSeed), deterministic ? "deterministic" : "NOT deterministic",
                    agreement)};
}

}  // namespace

int main() {
  std::filesystem::create_directories(kOut);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"oracle equivalence", oracle_equivalence},
      {"batch/incremental consistency", consistency},
      {"inflated spectrum structure", spectrum_structure},
      {"inflation identities", inflation_lemmas},
      {"timing trend", timing_trend},
      {"Lanczos-IO agreement and Z_aug series", lanczos_io},
      {"metric identities", metric_identities},
      {"two-moons session", end_to_end},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[PRIMARY] %s: %s -- %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
