#pragma once

// User-guided spectral clustering session: each step raises K by one,
// extends the eigenbasis by one incremental solve, clusters the rows of V_K
// and records the five metrics. The analyst stops by accepting some K.

#include "incio/clustering.hpp"
#include "incio/eigen_pair.hpp"
#include "incio/graph.hpp"
#include "incio/incremental.hpp"
#include "incio/laplacian.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace incio {

struct SessionConfig {
  LaplacianVariant variant = LaplacianVariant::Unnormalized;
  bool allow_disconnected = false;  // otherwise delta >= 2 raises DisconnectedGraph
  SolverConfig solver;
  KMeansConfig kmeans;
};

/// FNV-1a over the canonical edge list, as 16 hex digits.
std::string graph_digest(const WeightedGraph& g);

/// 128 random bits as 32 hex digits.
std::string random_session_id();

/// One clustering session.
///
/// The pipeline graph is W_N = S^{-1/2} W S^{-1/2}; eigenvectors come from the
/// chosen Laplacian of W_N while the graph metrics use the original W.
/// Steps are serialized per session (a concurrent step raises SessionBusy);
/// readers only wait for a snapshot copy.
class Session {
 public:
  Session(WeightedGraph graph, SessionConfig cfg, std::string id = random_session_id());

  const std::string& id() const noexcept { return id_; }
  const SessionConfig& config() const noexcept { return cfg_; }
  const WeightedGraph& original_graph() const noexcept { return *original_; }
  const LaplacianOperator& pipeline() const noexcept { return *pipeline_; }

  /// K of the next report (2 for a fresh session).
  Index next_K() const;
  bool accepted() const;
  std::optional<Index> accepted_K() const;

  /// Throws SessionClosed, SessionBusy, BasisFull or NoConvergence.
  ClusterReport step();
  /// Throws UnknownK or SessionClosed.
  ClusterReport accept(Index K);

  /// Reports ascending by K.
  std::vector<ClusterReport> metrics_history() const;
  /// Throws UnknownK.
  ClusterReport report(Index K) const;
  /// Stored eigenvalues (delta zeros first).
  Eigen::VectorXd eigenvalues() const;

  nlohmann::json to_json() const;
  static std::unique_ptr<Session> from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static std::unique_ptr<Session> load(const std::filesystem::path& path);

 private:
  std::string id_;
  SessionConfig cfg_;
  std::shared_ptr<const WeightedGraph> original_;
  std::shared_ptr<const LaplacianOperator> pipeline_;
  EigenBasis basis_;
  std::vector<ClusterReport> history_;
  Index next_K_ = 2;
  std::optional<Index> accepted_K_;

  mutable std::mutex state_mutex_;  // guards everything above for snapshots
  std::mutex step_mutex_;           // one step at a time
};

nlohmann::json report_to_json(const ClusterReport& r);
ClusterReport report_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j);

}  // namespace incio
