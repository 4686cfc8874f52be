#include "incio/session.hpp"

#include <cstdio>
#include <fstream>
#include <random>

namespace incio {

namespace {

constexpr int kStateVersion = 1;

std::shared_ptr<const LaplacianOperator> make_pipeline(const WeightedGraph& original, const SessionConfig& cfg) {
  const Components comp = connected_components(original);
  if (comp.count > 1 && !cfg.allow_disconnected) throw DisconnectedGraph(comp.count);
  auto wn = std::make_shared<const WeightedGraph>(normalize_weights(original));
  return std::make_shared<const LaplacianOperator>(std::move(wn), cfg.variant);
}

nlohmann::json config_to_json(const SessionConfig& c) {
  return {{"variant", std::string(to_string(c.variant))},
          {"allow_disconnected", c.allow_disconnected},
          {"solver",
           {{"tolerance", c.solver.tolerance},
            {"max_iterations", c.solver.max_iterations},
            {"seed", c.solver.seed},
            {"subspace", c.solver.subspace},
            {"warm_start", c.solver.warm_start}}},
          {"kmeans", {{"restarts", c.kmeans.restarts}, {"max_iterations", c.kmeans.max_iterations}, {"seed", c.kmeans.seed}}}};
}

SessionConfig config_from_json(const nlohmann::json& j) {
  SessionConfig c;
  c.variant = parse_variant(j.at("variant").get<std::string>());
  c.allow_disconnected = j.at("allow_disconnected").get<bool>();
  const auto& s = j.at("solver");
  c.solver.tolerance = s.at("tolerance").get<double>();
  c.solver.max_iterations = s.at("max_iterations").get<Index>();
  c.solver.seed = s.at("seed").get<std::uint64_t>();
  c.solver.subspace = s.at("subspace").get<Index>();
  c.solver.warm_start = s.at("warm_start").get<bool>();
  const auto& k = j.at("kmeans");
  c.kmeans.restarts = k.at("restarts").get<int>();
  c.kmeans.max_iterations = k.at("max_iterations").get<int>();
  c.kmeans.seed = k.at("seed").get<std::uint64_t>();
  return c;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

std::string graph_digest(const WeightedGraph& g) {
  std::uint64_t h = 14695981039346656037ull;
  const auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const std::int64_t n = g.num_nodes();
  mix(&n, sizeof n);
  for (const Edge& e : g.edges()) {
    const std::int64_t ij[2] = {e.i, e.j};
    mix(ij, sizeof ij);
    mix(&e.w, sizeof e.w);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string random_session_id() {
  std::random_device rd;
  std::string out;
  char buf[9];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out += buf;
  }
  return out;
}

Session::Session(WeightedGraph graph, SessionConfig cfg, std::string id)
    : id_(std::move(id)),
      cfg_(cfg),
      original_(std::make_shared<const WeightedGraph>(std::move(graph))),
      pipeline_(make_pipeline(*original_, cfg_)),
      basis_(pipeline_) {
  cfg_.solver.validate();
  if (id_.empty()) throw Error("session id must not be empty");
}

Index Session::next_K() const {
  std::lock_guard lock(state_mutex_);
  return next_K_;
}

bool Session::accepted() const {
  std::lock_guard lock(state_mutex_);
  return accepted_K_.has_value();
}

std::optional<Index> Session::accepted_K() const {
  std::lock_guard lock(state_mutex_);
  return accepted_K_;
}

ClusterReport Session::step() {
  std::unique_lock step_lock(step_mutex_, std::try_to_lock);
  if (!step_lock.owns_lock()) throw SessionBusy();

  Index K = 0;
  EigenBasis work = [&] {
    std::lock_guard lock(state_mutex_);
    if (accepted_K_) throw SessionClosed();
    K = next_K_;
    return basis_;
  }();
  if (K > work.dimension()) throw BasisFull(work.dimension());

  // Work on a copy so that a failed solve leaves the session untouched.
  while (work.size() < K) next_eigenpair(work, cfg_.solver);

  KMeansConfig km = cfg_.kmeans;
  km.seed = cfg_.kmeans.seed + static_cast<std::uint64_t>(K);
  std::vector<Index> labels = kmeans_rows(work.leading_vectors(K), K, km);
  ClusterReport report = make_report(*original_, std::move(labels), K, work.eigenvalues().head(K), *pipeline_);

  std::lock_guard lock(state_mutex_);
  basis_ = std::move(work);
  history_.push_back(report);
  next_K_ = K + 1;
  return report;
}

ClusterReport Session::accept(Index K) {
  std::lock_guard lock(state_mutex_);
  if (accepted_K_) throw SessionClosed();
  for (const ClusterReport& r : history_) {
    if (r.K == K) {
      accepted_K_ = K;
      return r;
    }
  }
  throw UnknownK(K);
}

std::vector<ClusterReport> Session::metrics_history() const {
  std::lock_guard lock(state_mutex_);
  return history_;
}

ClusterReport Session::report(Index K) const {
  std::lock_guard lock(state_mutex_);
  for (const ClusterReport& r : history_)
    if (r.K == K) return r;
  throw UnknownK(K);
}

Eigen::VectorXd Session::eigenvalues() const {
  std::lock_guard lock(state_mutex_);
  return basis_.eigenvalues();
}

nlohmann::json report_to_json(const ClusterReport& r) {
  const ClusterMetrics& m = r.metrics;
  return {{"K", r.K},
          {"labels", r.labels},
          {"sizes", r.sizes},
          {"metrics",
           {{"modularity", m.modularity},
            {"scaled_nc", m.scaled_nc},
            {"scaled_median", m.scaled_median_size},
            {"scaled_max", m.scaled_max_size},
            {"scaled_energy", m.scaled_spectrum_energy}}}};
}

ClusterReport report_from_json(const nlohmann::json& j) {
  ClusterReport r;
  r.K = j.at("K").get<Index>();
  r.labels = j.at("labels").get<std::vector<Index>>();
  r.sizes = j.at("sizes").get<std::vector<Index>>();
  const auto& m = j.at("metrics");
  r.metrics.modularity = m.at("modularity").get<double>();
  r.metrics.scaled_nc = m.at("scaled_nc").get<double>();
  r.metrics.scaled_median_size = m.at("scaled_median").get<double>();
  r.metrics.scaled_max_size = m.at("scaled_max").get<double>();
  r.metrics.scaled_spectrum_energy = m.at("scaled_energy").get<double>();
  return r;
}

nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.i, e.j, e.w});
  return {{"n", g.num_nodes()}, {"edges", std::move(edges)}};
}

WeightedGraph graph_from_json(const nlohmann::json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw Error("graph edges must be [i, j, w] triples");
    edges.push_back({e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>()});
  }
  return build_graph(j.at("n").get<Index>(), edges);
}

nlohmann::json Session::to_json() const {
  std::lock_guard lock(state_mutex_);
  nlohmann::json pairs = nlohmann::json::array();
  const Eigen::MatrixXd& V = basis_.computed_vectors();
  for (Index k = 0; k < basis_.num_computed(); ++k)
    pairs.push_back({{"value", basis_.computed_values()[k]}, {"vector", to_std(V.col(k))}});
  nlohmann::json reports = nlohmann::json::array();
  for (const ClusterReport& r : history_) reports.push_back(report_to_json(r));
  return {{"version", kStateVersion},
          {"id", id_},
          {"config", config_to_json(cfg_)},
          {"graph_digest", graph_digest(*original_)},
          {"graph", graph_to_json(*original_)},
          {"pipeline", "W_N = S^-1/2 W S^-1/2, " + std::string(to_string(cfg_.variant)) + " Laplacian of W_N"},
          {"metrics_graph", "original"},
          {"basis", {{"pairs", std::move(pairs)}, {"start_hint", to_std(basis_.start_hint())}}},
          {"reports", std::move(reports)},
          {"next_K", next_K_},
          {"accepted_K", accepted_K_ ? nlohmann::json(*accepted_K_) : nlohmann::json(nullptr)}};
}

std::unique_ptr<Session> Session::from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != kStateVersion) throw Error("unsupported session state version");
  WeightedGraph g = graph_from_json(j.at("graph"));
  if (graph_digest(g) != j.at("graph_digest").get<std::string>()) throw Error("session graph digest mismatch");
  auto s = std::make_unique<Session>(std::move(g), config_from_json(j.at("config")), j.at("id").get<std::string>());
  const Index n = s->original_->num_nodes();
  for (const auto& p : j.at("basis").at("pairs")) {
    const Eigen::VectorXd v = to_eigen(p.at("vector").get<std::vector<double>>());
    if (v.size() != n) throw DimensionMismatch(n, v.size());
    s->basis_.append({p.at("value").get<double>(), v});
  }
  s->basis_.set_start_hint(to_eigen(j.at("basis").at("start_hint").get<std::vector<double>>()));
  for (const auto& r : j.at("reports")) s->history_.push_back(report_from_json(r));
  s->next_K_ = j.at("next_K").get<Index>();
  if (!j.at("accepted_K").is_null()) s->accepted_K_ = j.at("accepted_K").get<Index>();
  return s;
}

void Session::save(const std::filesystem::path& path) const {
  const std::string text = to_json().dump();
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::unique_ptr<Session> Session::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return from_json(nlohmann::json::parse(in));
}

}  // namespace incio
