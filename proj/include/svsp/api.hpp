// JSON-over-HTTP service: spec browsing, checking, one editor workspace,
// and scenario sessions.
//
// Service::handle is transport independent; serve() binds it to an HTTP
// listener.  Concurrency: the served specification is an immutable snapshot
// swapped atomically on commit (which also drops every session); calls on
// one session are serialized by that session's mutex; distinct sessions
// run in parallel.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "svsp/editor.hpp"
#include "svsp/json_io.hpp"
#include "svsp/scenario.hpp"

namespace httplib {
class Server;
}

namespace svsp::api {

struct Request {
  std::string method;
  std::string path;  // without query string
  std::map<std::string, std::string> params;  // decoded query parameters
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  // JSON unless content_type says otherwise
  std::string content_type = "application/json";
};

struct Options {
  std::size_t max_sessions = 64;
  bool serve_ui = true;
};

class Service {
 public:
  /// An inconsistent spec puts the service in check-only mode: only
  /// GET /api/spec/summary and POST /api/check answer; everything else is
  /// 503 InconsistentSpec.
  explicit Service(Specification spec, Options options = {});
  ~Service();

  Response handle(const Request& req);

  [[nodiscard]] bool check_only() const { return check_only_; }
  [[nodiscard]] std::size_t session_count() const;

 private:
  struct Snapshot;
  struct SessionSlot;

  std::shared_ptr<const Snapshot> snapshot() const;
  std::shared_ptr<SessionSlot> session(const std::string& id);
  std::string create_session();

  Response route(const Request& req);
  Response summary();
  Response list_functions(const Request& req);
  Response list_elements(const Request& req);
  Response list_types(const Request& req);
  Response get_function(const std::string& id);
  Response get_element(const std::string& id);
  Response get_xref(const std::string& id);
  Response check(const Request& req);
  Response call(const std::string& session_id, const Request& req);
  Response propose(const Request& req);
  Response get_proposal(const std::string& id);
  Response commit(const std::string& id);
  Response abandon(const std::string& id);

  Options options_;
  bool check_only_ = false;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const Snapshot> snapshot_;

  std::mutex editor_mu_;  // serializes propose/commit/abandon
  std::unique_ptr<EditSession> editor_;

  mutable std::mutex sessions_mu_;
  std::unordered_map<std::string, std::shared_ptr<SessionSlot>> sessions_;
  std::uint64_t clock_ = 0;  // LRU tick
};

/// Error body {"code","message"} with the given status.
[[nodiscard]] Response error_response(int status, std::string_view code, std::string_view message);

/// Registers catch-all handlers on `server` that forward to `service` and
/// add CORS headers.
void mount(httplib::Server& server, Service& service);

/// Blocks serving `service` on host:port until the process is stopped.
/// Returns false if the port cannot be bound.
bool serve(Service& service, const std::string& host, int port);

}  // namespace svsp::api
