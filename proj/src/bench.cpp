#include "incio/bench.hpp"

#include "incio/eigensolvers.hpp"
#include "incio/incremental.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

namespace incio {

namespace {

using Clock = std::chrono::steady_clock;

struct Series {
  Method method;
  Index zaug;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double max_dev(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b.head(a.size())).cwiseAbs().maxCoeff();
}

Eigen::VectorXd values_of(const std::vector<EigenPair>& pairs) {
  Eigen::VectorXd v(static_cast<Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) v[static_cast<Index>(i)] = pairs[i].value;
  return v;
}

// Runs one series; `values[K]` collects the eigenvalues produced at each K.
std::vector<BenchRecord> run_series(const std::shared_ptr<const LaplacianOperator>& op, const BenchConfig& cfg,
                                    const Series& series, int trial, const std::optional<Eigen::VectorXd>& oracle,
                                    std::map<Index, Eigen::VectorXd>& values) {
  const Index n = op->rows();
  const Index k_max = std::min(cfg.k_max, n);
  SolverConfig solver = cfg.solver;
  solver.seed = cfg.solver.seed + static_cast<std::uint64_t>(std::max(trial, 0));
  LanczosConfig lz = cfg.lanczos;
  lz.z_aug = series.zaug;
  lz.seed = cfg.lanczos.seed + static_cast<std::uint64_t>(std::max(trial, 0));

  std::vector<BenchRecord> out;
  double cumulative = 0.0;
  std::optional<EigenBasis> basis;
  std::unique_ptr<LanczosIO> lanczos;
  Index last_matvecs = 0;

  for (Index K = 2; K <= k_max; ++K) {
    BenchRecord r;
    r.method = series.method;
    r.dataset = cfg.dataset;
    r.n = n;
    r.p = cfg.p;
    r.K = K;
    r.zaug = series.method == Method::LanczosIO ? series.zaug : 0;
    r.trial = trial;
    r.seed = series.method == Method::LanczosIO ? lz.seed : solver.seed;
    try {
      const auto t0 = Clock::now();
      Eigen::VectorXd lambda;
      switch (series.method) {
        case Method::Incremental: {
          if (!basis) basis.emplace(op);
          while (basis->size() < K) {
            IncrementStats st;
            next_eigenpair(*basis, solver, &st);
            r.matvecs += st.matvecs;
          }
          r.step_seconds = seconds_since(t0);
          lambda = basis->eigenvalues().head(K);
          r.stored_vectors = basis->size();
          break;
        }
        case Method::LanczosIO: {
          if (!lanczos) lanczos = std::make_unique<LanczosIO>(op, lz);
          const auto pairs = lanczos->smallest(K);
          r.step_seconds = seconds_since(t0);
          lambda = values_of(pairs);
          r.matvecs = lanczos->state().matvecs() - last_matvecs;
          last_matvecs = lanczos->state().matvecs();
          r.stored_vectors = lanczos->state().stored_vectors();
          break;
        }
        case Method::Batch: {
          SolveStats st;
          const auto pairs = batch_smallest(*op, K, solver, &st);
          r.step_seconds = seconds_since(t0);
          lambda = values_of(pairs);
          r.matvecs = st.matvecs;
          r.stored_vectors = std::min(solver.subspace > 0 ? solver.subspace : 2 * K + 10, n) + 1;
          break;
        }
      }
      cumulative += r.step_seconds;
      r.cumulative_seconds = cumulative;
      values[K] = lambda;
      if (oracle) {
        r.max_abs_dev = max_dev(lambda, *oracle);
        if (!(r.max_abs_dev <= cfg.agreement)) r.status = "diverged";
      }
    } catch (const std::exception& e) {
      r.status = std::string("error: ") + e.what();
      r.cumulative_seconds = cumulative;
    }
    out.push_back(r);
    if (r.status != "ok") break;
  }
  return out;
}

std::vector<BenchRecord> run_trials(std::shared_ptr<const WeightedGraph> g, const BenchConfig& cfg,
                                    const std::vector<Series>& plan) {
  if (!g) throw Error("null graph");
  if (cfg.k_max < 2) throw Error("k_max must be >= 2");
  if (cfg.k_max > g->num_nodes()) throw Error("k_max must not exceed n");
  if (cfg.trials < 1) throw Error("trials must be >= 1");
  require_single_thread();

  auto op = std::make_shared<const LaplacianOperator>(std::move(g), cfg.variant);
  std::optional<Eigen::VectorXd> oracle;
  if (op->rows() <= cfg.oracle_limit) oracle = dense_oracle(*op).values;

  std::vector<BenchRecord> out;
  for (int trial = cfg.warmup ? -1 : 0; trial < cfg.trials; ++trial) {
    std::vector<std::vector<BenchRecord>> per_series;
    std::vector<std::map<Index, Eigen::VectorXd>> produced;
    for (const Series& s : plan) {
      produced.emplace_back();
      per_series.push_back(run_series(op, cfg, s, trial, oracle, produced.back()));
    }
    if (trial < 0) continue;

    if (!oracle) {
      // Without an oracle, compare against the batch series of the same trial.
      const auto ref = std::find_if(plan.begin(), plan.end(), [](const Series& s) { return s.method == Method::Batch; });
      const std::size_t ref_idx = ref != plan.end() ? static_cast<std::size_t>(ref - plan.begin()) : 0;
      for (std::size_t i = 0; i < plan.size(); ++i) {
        for (BenchRecord& r : per_series[i]) {
          const auto it = produced[ref_idx].find(r.K);
          const auto mine = produced[i].find(r.K);
          if (it == produced[ref_idx].end() || mine == produced[i].end()) continue;
          r.max_abs_dev = max_dev(mine->second, it->second);
          if (r.status == "ok" && !(r.max_abs_dev <= cfg.agreement)) r.status = "diverged";
        }
      }
    }
    for (auto& s : per_series) out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Incremental: return "incremental";
    case Method::LanczosIO: return "lanczos-io";
    case Method::Batch: return "batch";
  }
  return "incremental";
}

Method parse_method(std::string_view name) {
  if (name == "incremental") return Method::Incremental;
  if (name == "lanczos-io") return Method::LanczosIO;
  if (name == "batch") return Method::Batch;
  throw Error("unknown method '" + std::string(name) + "' (expected incremental, lanczos-io or batch)");
}

void require_single_thread() {
  if (Eigen::nbThreads() != 1)
    throw Error("benchmarks must run single-threaded; Eigen reports " + std::to_string(Eigen::nbThreads()) + " threads");
}

std::vector<BenchRecord> run_sweep(std::shared_ptr<const WeightedGraph> g, const BenchConfig& cfg) {
  if (cfg.methods.empty()) throw Error("no methods selected");
  std::vector<Series> plan;
  for (Method m : cfg.methods) plan.push_back({m, cfg.lanczos.z_aug});
  return run_trials(std::move(g), cfg, plan);
}

std::vector<BenchRecord> zaug_sensitivity(std::shared_ptr<const WeightedGraph> g, const BenchConfig& cfg,
                                          std::span<const Index> zaug_values) {
  if (zaug_values.empty()) throw Error("zaug_values must be nonempty");
  std::vector<Series> plan{{Method::Batch, 0}};
  for (Index z : zaug_values) {
    if (z < 1) throw Error("Z_aug values must be >= 1");
    plan.push_back({Method::LanczosIO, z});
  }
  return run_trials(std::move(g), cfg, plan);
}

double matvec_growth(std::span<const BenchRecord> records, Method method, int trial) {
  double base = 0.0;
  double worst = 0.0;
  for (const BenchRecord& r : records) {
    if (r.method != method || r.trial != trial || r.status != "ok") continue;
    if (r.K == 2)
      base = static_cast<double>(r.matvecs);
    else
      worst = std::max(worst, static_cast<double>(r.matvecs));
  }
  return base > 0.0 ? worst / base : 0.0;
}

std::string bench_csv_header() {
  return "method,dataset,n,p,K,zaug,trial,seed,step_seconds,cumulative_seconds,matvecs,stored_vectors,max_abs_dev,"
         "status";
}

std::string bench_csv(std::span<const BenchRecord> records) {
  std::string out = bench_csv_header() + "\n";
  char buf[512];
  for (const BenchRecord& r : records) {
    char p[32] = "";
    if (!std::isnan(r.p)) std::snprintf(p, sizeof p, "%.17g", r.p);
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    std::snprintf(buf, sizeof buf, "%s,%s,%ld,%s,%ld,%ld,%d,%llu,%.9g,%.9g,%ld,%ld,%.3e,", std::string(to_string(r.method)).c_str(),
                  r.dataset.c_str(), static_cast<long>(r.n), p, static_cast<long>(r.K), static_cast<long>(r.zaug),
                  r.trial, static_cast<unsigned long long>(r.seed), r.step_seconds, r.cumulative_seconds,
                  static_cast<long>(r.matvecs), static_cast<long>(r.stored_vectors), r.max_abs_dev);
    out += buf;
    out += status;
    out += "\n";
  }
  return out;
}

}  // namespace incio
