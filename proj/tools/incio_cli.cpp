// incio: command-line front end.
//
//   incio cluster --input g.el --variant unnormalized --steps 9 --out metrics.csv
//   incio eig --input g.el --k 10 --method incremental --out pairs.csv
//   incio bench --n 2000 --p 0.1 --kmax 10 --trials 5 --out bench.csv
//   incio serve --port 8080 [--state-dir DIR]

#include "incio/bench.hpp"
#include "incio/eigensolvers.hpp"
#include "incio/incremental.hpp"
#include "incio/ingest.hpp"
#include "incio/lanczos_io.hpp"
#include "incio/service.hpp"
#include "incio/session.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace incio;

struct GraphArgs {
  std::string input;
  std::string format = "edgelist";
  Index knn = 10;
  std::string kernel = "unit";
  double sigma = 1.0;

  void add_to(CLI::App& app) {
    app.add_option("--input", input, "graph or point file")->required()->check(CLI::ExistingFile);
    app.add_option("--format", format, "edgelist, mtx or points")->capture_default_str();
    app.add_option("--knn", knn, "neighbors per point (points format)")->capture_default_str();
    app.add_option("--kernel", kernel, "unit or gaussian (points format)")->capture_default_str();
    app.add_option("--sigma", sigma, "gaussian bandwidth")->capture_default_str();
  }

  WeightedGraph load() const {
    return load_graph(input, parse_format(format), KnnOptions{knn, parse_kernel(kernel), sigma}).graph;
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string pairs_csv(const LaplacianOperator& op, const std::vector<EigenPair>& pairs) {
  std::ostringstream out;
  out << "k,eigenvalue,residual";
  for (Index i = 0; i < op.rows(); ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const EigenPair& p = pairs[k];
    out << k + 1 << ',' << format_double(p.value) << ',' << format_double(residual_norm(op, p.value, p.vector));
    for (Index i = 0; i < p.vector.size(); ++i) out << ',' << format_double(p.vector[i]);
    out << '\n';
  }
  return out.str();
}

std::vector<EigenPair> smallest_pairs(const std::shared_ptr<const LaplacianOperator>& op, Index K, Method method,
                                      const SolverConfig& solver, const LanczosConfig& lanczos) {
  switch (method) {
    case Method::Incremental: {
      const SweepResult r = sweep(op, K, solver);
      const Eigen::VectorXd vals = r.basis.eigenvalues();
      const Eigen::MatrixXd vecs = r.basis.vectors();
      std::vector<EigenPair> out;
      for (Index k = 0; k < K; ++k) out.push_back({vals[k], vecs.col(k)});
      return out;
    }
    case Method::LanczosIO: return LanczosIO(op, lanczos).smallest(K);
    case Method::Batch: return batch_smallest(*op, K, solver);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental eigensolvers and user-guided spectral clustering"};
  app.require_subcommand(1);

  // cluster
  GraphArgs cluster_graph;
  std::string cluster_variant = "unnormalized";
  Index steps = 9;
  std::string cluster_out;
  std::string labels_out;
  SessionConfig session_cfg;
  auto* cluster = app.add_subcommand("cluster", "run K = 2, 3, ... and write the metrics CSV");
  cluster_graph.add_to(*cluster);
  cluster->add_option("--variant", cluster_variant, "unnormalized or normalized")->capture_default_str();
  cluster->add_option("--steps", steps, "number of K values, starting at K = 2")->capture_default_str();
  cluster->add_option("--out", cluster_out, "metrics CSV path (default stdout)");
  cluster->add_option("--labels-out", labels_out, "labels CSV for the last K");
  cluster->add_option("--seed", session_cfg.solver.seed, "eigensolver seed")->capture_default_str();
  cluster->add_option("--kmeans-seed", session_cfg.kmeans.seed, "k-means seed (K is added per step)")->capture_default_str();
  cluster->add_option("--restarts", session_cfg.kmeans.restarts, "k-means restarts")->capture_default_str();
  cluster->add_option("--tolerance", session_cfg.solver.tolerance, "relative residual target")->capture_default_str();
  cluster->add_flag("--disconnected", session_cfg.allow_disconnected, "accept graphs with several components");

  // eig
  GraphArgs eig_graph;
  std::string eig_variant = "unnormalized";
  Index eig_k = 10;
  std::string eig_method = "incremental";
  std::string eig_out;
  SolverConfig eig_solver;
  LanczosConfig eig_lanczos;
  auto* eig = app.add_subcommand("eig", "K smallest Laplacian eigenpairs of the input graph");
  eig_graph.add_to(*eig);
  eig->add_option("--variant", eig_variant, "unnormalized or normalized")->capture_default_str();
  eig->add_option("--k", eig_k, "number of eigenpairs")->capture_default_str();
  eig->add_option("--method", eig_method, "incremental, lanczos-io or batch")->capture_default_str();
  eig->add_option("--out", eig_out, "pairs CSV path (default stdout)");
  eig->add_option("--seed", eig_solver.seed, "solver seed")->capture_default_str();
  eig->add_option("--tolerance", eig_solver.tolerance, "relative residual target")->capture_default_str();
  eig->add_option("--zini", eig_lanczos.z_ini, "initial Lanczos vectors")->capture_default_str();
  eig->add_option("--zaug", eig_lanczos.z_aug, "Lanczos vectors added per extension")->capture_default_str();
  eig->add_option("--lanczos-tol", eig_lanczos.tolerance, "Ritz residual target (0: eps * |M|)")->capture_default_str();

  // bench
  Index bench_n = 2000;
  double bench_p = 0.1;
  std::uint64_t graph_seed = 1;
  std::string bench_variant = "unnormalized";
  std::vector<std::string> bench_methods{"incremental", "lanczos-io", "batch"};
  std::vector<Index> zaug_values;
  std::string bench_out;
  BenchConfig bench_cfg;
  auto* bench = app.add_subcommand("bench", "time sequential K sweeps on an Erdos-Renyi graph");
  bench->add_option("--n", bench_n, "nodes")->capture_default_str();
  bench->add_option("--p", bench_p, "edge probability")->capture_default_str();
  bench->add_option("--graph-seed", graph_seed, "ER seed")->capture_default_str();
  bench->add_option("--variant", bench_variant, "unnormalized or normalized")->capture_default_str();
  bench->add_option("--kmax", bench_cfg.k_max, "largest K")->capture_default_str();
  bench->add_option("--trials", bench_cfg.trials, "timed trials after one warm-up")->capture_default_str();
  bench->add_option("--methods", bench_methods, "any of incremental, lanczos-io, batch")->delimiter(',');
  bench->add_option("--zaug", zaug_values, "Z_aug values; runs the sensitivity sweep instead")->delimiter(',');
  bench->add_option("--zini", bench_cfg.lanczos.z_ini, "initial Lanczos vectors")->capture_default_str();
  bench->add_option("--seed", bench_cfg.solver.seed, "solver seed of trial 0")->capture_default_str();
  bench->add_option("--out", bench_out, "CSV path (default stdout)");

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string state_dir;
  auto* serve = app.add_subcommand("serve", "serve the JSON session API");
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "TCP port (0 picks a free one)")->capture_default_str();
  serve->add_option("--state-dir", state_dir, "persist sessions here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cluster) {
      if (steps < 1) throw Error("--steps must be >= 1");
      session_cfg.variant = parse_variant(cluster_variant);
      Session session(cluster_graph.load(), session_cfg);
      for (Index i = 0; i < steps; ++i) session.step();
      const auto history = session.metrics_history();
      write_output(cluster_out, metrics_csv(history));
      if (!labels_out.empty()) {
        std::string text = "node,label\n";
        const auto& labels = history.back().labels;
        for (std::size_t i = 0; i < labels.size(); ++i) text += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
        write_output(labels_out, text);
      }
    } else if (*eig) {
      auto g = std::make_shared<const WeightedGraph>(eig_graph.load());
      if (eig_k < 1 || eig_k > g->num_nodes()) throw Error("--k must be in [1, n]");
      auto op = std::make_shared<const LaplacianOperator>(g, parse_variant(eig_variant));
      const auto pairs = smallest_pairs(op, eig_k, parse_method(eig_method), eig_solver, eig_lanczos);
      write_output(eig_out, pairs_csv(*op, pairs));
    } else if (*bench) {
      bench_cfg.variant = parse_variant(bench_variant);
      bench_cfg.methods.clear();
      for (const auto& m : bench_methods) bench_cfg.methods.push_back(parse_method(m));
      bench_cfg.dataset = "er";
      bench_cfg.p = bench_p;
      auto g = std::make_shared<const WeightedGraph>(erdos_renyi(bench_n, bench_p, graph_seed));
      const auto records = zaug_values.empty() ? run_sweep(g, bench_cfg) : zaug_sensitivity(g, bench_cfg, zaug_values);
      write_output(bench_out, bench_csv(records));
    } else if (*serve) {
      SessionService service(state_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(state_dir));
      std::cerr << "serving on " << host << ":" << port << "\n";
      if (!service.listen(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    }
  } catch (const std::exception& e) {
    std::cerr << "incio: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
