#pragma once

// Timing harness for sequential K sweeps under the three eigensolvers.
// Batch recomputes K pairs from scratch at every K; incremental and
// Lanczos-IO carry their state from one K to the next.

#include "incio/eigen_pair.hpp"
#include "incio/graph.hpp"
#include "incio/lanczos_io.hpp"
#include "incio/laplacian.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace incio {

enum class Method { Incremental, LanczosIO, Batch };
std::string_view to_string(Method m);
/// "incremental", "lanczos-io" or "batch".
Method parse_method(std::string_view name);

struct BenchRecord {
  Method method = Method::Incremental;
  std::string dataset;
  Index n = 0;
  double p = std::numeric_limits<double>::quiet_NaN();  // NaN when not an ER graph
  Index K = 0;
  Index zaug = 0;  // Lanczos-IO only
  int trial = 0;
  std::uint64_t seed = 0;
  double step_seconds = 0.0;
  double cumulative_seconds = 0.0;
  Index matvecs = 0;         // products spent on this K
  Index stored_vectors = 0;  // n-vectors held after this K (memory proxy)
  double max_abs_dev = 0.0;  // vs dense oracle (small n) or the batch result
  std::string status = "ok";  // ok, diverged, or error: <message>
};

struct BenchConfig {
  Index k_max = 10;
  int trials = 5;
  std::vector<Method> methods = {Method::Incremental, Method::LanczosIO, Method::Batch};
  LaplacianVariant variant = LaplacianVariant::Unnormalized;
  SolverConfig solver;
  LanczosConfig lanczos;
  bool warmup = true;          // one discarded run before the timed trials
  std::string dataset = "graph";
  double p = std::numeric_limits<double>::quiet_NaN();
  double agreement = 1e-6;     // eigenvalue deviation that flags a series
  Index oracle_limit = 200;    // dense oracle reference up to this n
};

/// Throws unless Eigen runs single-threaded.
void require_single_thread();

/// Times K = 2..k_max for every method and trial. Trial t uses seeds
/// solver.seed + t and lanczos.seed + t. Solver errors end that method's
/// series with an error status; on oracle-checked graphs a deviation above
/// `agreement` ends it with status diverged.
std::vector<BenchRecord> run_sweep(std::shared_ptr<const WeightedGraph> g, const BenchConfig& cfg);

/// Batch series plus one Lanczos-IO series per Z_aug value.
std::vector<BenchRecord> zaug_sensitivity(std::shared_ptr<const WeightedGraph> g, const BenchConfig& cfg,
                                          std::span<const Index> zaug_values);

/// Largest per-step matvec count at K >= 3 divided by the count at K = 2,
/// for one method and trial. Returns 0 if the series is missing.
double matvec_growth(std::span<const BenchRecord> records, Method method, int trial);

std::string bench_csv_header();
std::string bench_csv(std::span<const BenchRecord> records);

}  // namespace incio
