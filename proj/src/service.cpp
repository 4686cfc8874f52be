#include "incio/service.hpp"

#include "incio/ingest.hpp"

#include <httplib.h>

#include <charconv>
#include <thread>
#include <vector>

namespace incio {

namespace {

using json = nlohmann::json;

ApiResponse error(int status, std::string_view kind, const std::string& message) {
  return {status, {{"error", kind}, {"message", message}}};
}

std::vector<std::string_view> segments(std::string_view path) {
  std::vector<std::string_view> out;
  const std::size_t q = path.find('?');
  if (q != std::string_view::npos) path = path.substr(0, q);
  std::size_t pos = 0;
  while (pos < path.size()) {
    if (path[pos] == '/') {
      ++pos;
      continue;
    }
    std::size_t end = path.find('/', pos);
    if (end == std::string_view::npos) end = path.size();
    out.push_back(path.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

std::optional<Index> parse_k(std::string_view s) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return static_cast<Index>(v);
}

json summary(const Session& s) {
  const auto acc = s.accepted_K();
  return {{"id", s.id()},
          {"n", s.original_graph().num_nodes()},
          {"m", s.original_graph().num_edges()},
          {"components", s.pipeline().components().count},
          {"variant", std::string(to_string(s.config().variant))},
          {"next_K", s.next_K()},
          {"status", acc ? "accepted" : "active"},
          {"accepted_K", acc ? json(*acc) : json(nullptr)}};
}

}  // namespace

SessionConfig session_config_from_json(const json& req) {
  SessionConfig cfg;
  if (req.contains("variant")) cfg.variant = parse_variant(req.at("variant").get<std::string>());
  if (req.contains("disconnected")) cfg.allow_disconnected = req.at("disconnected").get<bool>();
  if (req.contains("tolerance")) cfg.solver.tolerance = req.at("tolerance").get<double>();
  if (req.contains("seed")) cfg.solver.seed = req.at("seed").get<std::uint64_t>();
  if (req.contains("warm_start")) cfg.solver.warm_start = req.at("warm_start").get<bool>();
  if (req.contains("kmeans_seed")) cfg.kmeans.seed = req.at("kmeans_seed").get<std::uint64_t>();
  if (req.contains("restarts")) cfg.kmeans.restarts = req.at("restarts").get<int>();
  return cfg;
}

WeightedGraph graph_from_request(const json& req) {
  if (req.contains("graph")) return graph_from_json(req.at("graph"));
  if (!req.contains("input")) throw Error("request needs either 'graph' or 'input'");
  KnnOptions knn;
  if (req.contains("knn")) knn.k = req.at("knn").get<Index>();
  if (req.contains("kernel")) knn.kernel = parse_kernel(req.at("kernel").get<std::string>());
  if (req.contains("sigma")) knn.sigma = req.at("sigma").get<double>();
  const InputFormat fmt = parse_format(req.value("format", std::string("edgelist")));
  return load_graph(req.at("input").get<std::string>(), fmt, knn).graph;
}

SessionService::SessionService(std::optional<std::filesystem::path> state_dir) : state_dir_(std::move(state_dir)) {
  if (state_dir_) std::filesystem::create_directories(*state_dir_);
}

SessionService::~SessionService() { stop(); }

std::shared_ptr<Session> SessionService::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  // Ids are hex tokens; anything else never touches the filesystem.
  const bool hex = !id.empty() && id.find_first_not_of("0123456789abcdef") == std::string::npos;
  if (state_dir_ && hex) {
    const auto path = *state_dir_ / (id + ".json");
    if (std::filesystem::exists(path)) {
      std::shared_ptr<Session> s = Session::load(path);
      sessions_.emplace(id, s);
      return s;
    }
  }
  throw UnknownSession(id);
}

std::shared_ptr<Session> SessionService::create(const json& request) {
  auto s = std::make_shared<Session>(graph_from_request(request), session_config_from_json(request));
  persist(*s);
  std::lock_guard lock(mutex_);
  sessions_.emplace(s->id(), s);
  return s;
}

void SessionService::persist(const Session& s) const {
  if (state_dir_) s.save(*state_dir_ / (s.id() + ".json"));
}

ApiResponse SessionService::handle(std::string_view method, std::string_view path, std::string_view body) {
  const auto seg = segments(path);
  try {
    if (seg.empty() || seg[0] != "sessions") return error(404, "NotFound", "no such route");
    const auto body_json = [&] { return body.empty() ? json::object() : json::parse(body); };

    if (seg.size() == 1) {
      if (method != "POST") return error(405, "MethodNotAllowed", "use POST /sessions");
      auto s = create(body_json());
      return {201, summary(*s)};
    }

    auto s = find(std::string(seg[1]));
    if (seg.size() == 2) {
      if (method != "GET") return error(405, "MethodNotAllowed", "use GET");
      return {200, summary(*s)};
    }
    const std::string_view action = seg[2];
    if (action == "step" && seg.size() == 3) {
      if (method != "POST") return error(405, "MethodNotAllowed", "use POST");
      ClusterReport r = s->step();
      persist(*s);
      return {200, report_to_json(r)};
    }
    if (action == "metrics" && seg.size() == 3) {
      if (method != "GET") return error(405, "MethodNotAllowed", "use GET");
      json arr = json::array();
      for (const ClusterReport& r : s->metrics_history()) arr.push_back(report_to_json(r));
      return {200, arr};
    }
    if (action == "clusters" && seg.size() == 4) {
      if (method != "GET") return error(405, "MethodNotAllowed", "use GET");
      const auto K = parse_k(seg[3]);
      if (!K) return error(400, "BadRequest", "K must be an integer");
      return {200, s->report(*K).labels};
    }
    if (action == "accept" && seg.size() == 3) {
      if (method != "POST") return error(405, "MethodNotAllowed", "use POST");
      const json req = body_json();
      if (!req.contains("K") || !req.at("K").is_number_integer()) return error(400, "BadRequest", "body needs integer K");
      ClusterReport r = s->accept(req.at("K").get<Index>());
      persist(*s);
      return {200, report_to_json(r)};
    }
    return error(404, "NotFound", "no such route");
  } catch (const UnknownSession& e) {
    return error(404, "UnknownSession", e.what());
  } catch (const UnknownK& e) {
    return error(404, "UnknownK", e.what());
  } catch (const SessionClosed& e) {
    return error(409, "SessionClosed", e.what());
  } catch (const SessionBusy& e) {
    return error(409, "SessionBusy", e.what());
  } catch (const BasisFull& e) {
    return error(409, "BasisFull", e.what());
  } catch (const NoConvergence& e) {
    return error(500, "NoConvergence", e.what());
  } catch (const DisconnectedGraph& e) {
    return error(400, "DisconnectedGraph", e.what());
  } catch (const ZeroStrengthNode& e) {
    return error(400, "ZeroStrengthNode", e.what());
  } catch (const ParseError& e) {
    return error(400, "ParseError", e.what());
  } catch (const Error& e) {
    return error(400, "InvalidRequest", e.what());
  } catch (const json::exception& e) {
    return error(400, "BadRequest", e.what());
  }
}

void SessionService::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  const auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server_->Get(R"(/sessions.*)", bridge);
  server_->Post(R"(/sessions.*)", bridge);
}

bool SessionService::listen(const std::string& host, int port) {
  install_routes();
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) return false;
  return server_->listen_after_bind();
}

int SessionService::start(const std::string& host, int port) {
  install_routes();
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) return -1;
  thread_ = std::make_unique<std::thread>([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void SessionService::stop() {
  if (server_) server_->stop();
  if (thread_ && thread_->joinable()) thread_->join();
  thread_.reset();
}

}  // namespace incio
