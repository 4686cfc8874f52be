#pragma once

// JSON API over clustering sessions.
//
//   POST /sessions                 body: graph source, variant, config -> {id}
//   GET  /sessions/{id}            status summary
//   POST /sessions/{id}/step       -> report of the next K
//   GET  /sessions/{id}/metrics    -> report array, ascending K
//   GET  /sessions/{id}/clusters/K -> labels array
//   POST /sessions/{id}/accept     body: {"K": k} -> final report
//
// Routing lives in handle() so it can be exercised without sockets.

#include "incio/session.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

namespace httplib {
class Server;
}

namespace incio {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Reads a SessionConfig from the request fields `variant`, `disconnected`,
/// `tolerance`, `seed`, `kmeans_seed`, `restarts`, `warm_start` (all optional).
SessionConfig session_config_from_json(const nlohmann::json& req);

/// Graph from `{"graph": {"n", "edges"}}` or `{"input": path, "format", "knn",
/// "kernel", "sigma"}`.
WeightedGraph graph_from_request(const nlohmann::json& req);

class SessionService {
 public:
  /// With a state directory, every mutation is persisted to <dir>/<id>.json
  /// and unknown ids are looked up there.
  explicit SessionService(std::optional<std::filesystem::path> state_dir = std::nullopt);
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body);

  /// Throws UnknownSession.
  std::shared_ptr<Session> find(const std::string& id);
  std::shared_ptr<Session> create(const nlohmann::json& request);

  /// Binds and serves until stop(); returns false if the port is unavailable.
  /// Port 0 picks a free port, reported through bound_port().
  bool listen(const std::string& host, int port);
  /// Binds, then serves on a background thread. Returns the bound port or -1.
  int start(const std::string& host, int port);
  void stop();
  int bound_port() const noexcept { return port_; }

 private:
  void persist(const Session& s) const;
  void install_routes();

  std::optional<std::filesystem::path> state_dir_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<std::thread> thread_;
  int port_ = -1;
};

}  // namespace incio
