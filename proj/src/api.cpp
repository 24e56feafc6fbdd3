#include "svsp/api.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

#include "httplib.h"
#include "svsp/dsl.hpp"

namespace svsp::api {

struct Service::Snapshot {
  std::shared_ptr<const Specification> spec;
  std::unique_ptr<SpecIndex> index;
  CheckReport report;
  std::uint64_t version = 0;
};

struct Service::SessionSlot {
  std::mutex mu;  // single writer per session
  Session session;
  std::uint64_t last_used = 0;

  explicit SessionSlot(std::shared_ptr<const Specification> spec) : session(std::move(spec)) {}
};

namespace {

const char* kPlaceholderPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>svsp</title></head>\n"
    "<body><h1>svsp</h1><p>The workbench UI is not bundled with this build. "
    "The JSON API is available under <code>/api/</code>.</p></body></html>\n";

Response json_response(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = std::min(path.find('/', i), path.size());
    parts.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::string random_token() {
  std::random_device rd;
  std::ostringstream ss;
  ss << std::hex << std::setfill('0');
  for (int i = 0; i < 4; ++i) ss << std::setw(8) << static_cast<std::uint32_t>(rd());
  return ss.str();
}

std::shared_ptr<const Specification> share(Specification spec) {
  return std::make_shared<const Specification>(std::move(spec));
}

int edit_status(EditError::Kind k) {
  switch (k) {
    case EditError::Kind::UnknownProposal: return 404;
    case EditError::Kind::InconsistentBase: return 503;
    case EditError::Kind::NotConsistent:
    case EditError::Kind::StaleProposal: return 409;
  }
  return 500;
}

Json parse_body(const std::string& body) {
  if (body.empty()) return Json::object();
  return Json::parse(body);  // throws on malformed text
}

}  // namespace

Response error_response(int status, std::string_view code, std::string_view message) {
  Json j;
  j["code"] = std::string(code);
  j["message"] = std::string(message);
  return json_response(status, j);
}

Service::Service(Specification spec, Options options) : options_(options) {
  auto snap = std::make_shared<Snapshot>();
  snap->spec = share(std::move(spec));
  snap->index = std::make_unique<SpecIndex>(*snap->spec);
  snap->report = check_spec(*snap->spec);
  check_only_ = !snap->report.consistent;
  if (!check_only_) editor_ = std::make_unique<EditSession>(*snap->spec);
  snapshot_ = std::move(snap);
}

Service::~Service() = default;

std::shared_ptr<const Service::Snapshot> Service::snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return snapshot_;
}

std::size_t Service::session_count() const {
  std::lock_guard lock(sessions_mu_);
  return sessions_.size();
}

std::shared_ptr<Service::SessionSlot> Service::session(const std::string& id) {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->last_used = ++clock_;
  return it->second;
}

std::string Service::create_session() {
  auto slot = std::make_shared<SessionSlot>(snapshot()->spec);
  std::lock_guard lock(sessions_mu_);
  while (sessions_.size() >= options_.max_sessions && !sessions_.empty()) {
    auto oldest = std::min_element(sessions_.begin(), sessions_.end(), [](const auto& a, const auto& b) {
      return a.second->last_used < b.second->last_used;
    });
    sessions_.erase(oldest);
  }
  std::string id = random_token();
  while (sessions_.count(id) != 0) id = random_token();
  slot->last_used = ++clock_;
  sessions_.emplace(id, std::move(slot));
  return id;
}

Response Service::handle(const Request& req) {
  try {
    return route(req);
  } catch (const Json::exception& e) {
    return error_response(400, "E000", std::string("malformed JSON: ") + e.what());
  } catch (const JsonShapeError& e) {
    return error_response(400, "E000", e.what());
  } catch (const ChangeError& e) {
    return error_response(400, "E000", e.what());
  } catch (const QueryError& e) {
    return error_response(e.code() == "UnknownElement" ? 404 : 400, e.code(), e.what());
  } catch (const EditError& e) {
    return error_response(edit_status(e.kind()), e.code(), e.what());
  } catch (const ScenarioError& e) {
    return error_response(e.code() == "InconsistentSpec" ? 503 : 400, e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

Response Service::route(const Request& req) {
  const auto parts = split_path(req.path);
  const std::string& m = req.method;
  const std::size_t n = parts.size();

  if (m == "OPTIONS") return {204, "", "text/plain"};
  if (n == 0) {
    if (m == "GET" && options_.serve_ui) return {200, kPlaceholderPage, "text/html; charset=utf-8"};
    return error_response(404, "E002", "no resource at " + req.path);
  }
  if (parts[0] != "api" || n < 2) return error_response(404, "E002", "no resource at " + req.path);

  const std::string& area = parts[1];
  auto not_allowed = [&] { return error_response(405, "E000", m + " is not supported on " + req.path); };

  // Available in check-only mode.
  if (area == "spec" && n == 3 && parts[2] == "summary") return m == "GET" ? summary() : not_allowed();
  if (area == "check" && n == 2) return m == "POST" ? check(req) : not_allowed();

  if (check_only_)
    return error_response(503, "InconsistentSpec",
                          "the served specification has errors; only /api/spec/summary and /api/check respond");

  if (area == "functions") {
    if (m != "GET") return not_allowed();
    if (n == 2) return list_functions(req);
    if (n == 3) return get_function(parts[2]);
  } else if (area == "elements") {
    if (m != "GET") return not_allowed();
    if (n == 2) return list_elements(req);
    if (n == 3) return get_element(parts[2]);
    if (n == 4 && parts[3] == "xref") return get_xref(parts[2]);
  } else if (area == "types") {
    if (m != "GET") return not_allowed();
    if (n == 2) return list_types(req);
    if (n == 3) {
      const auto snap = snapshot();
      if (const DataType* t = snap->index->type(parts[2])) return json_response(200, type_json(*t));
      return error_response(404, "E002", "no type '" + parts[2] + "'");
    }
  } else if (area == "sessions") {
    if (n == 2) {
      if (m != "POST") return not_allowed();
      return json_response(201, Json{{"id", create_session()}});
    }
    const std::string& sid = parts[2];
    if (n == 3 && m == "DELETE") {
      std::lock_guard lock(sessions_mu_);
      if (sessions_.erase(sid) == 0) return error_response(404, "UnknownSession", "no session '" + sid + "'");
      return {204, "", "text/plain"};
    }
    if (n != 4) return error_response(404, "E002", "no resource at " + req.path);
    const std::string& action = parts[3];
    if (action == "calls") return m == "POST" ? call(sid, req) : not_allowed();
    auto slot = session(sid);
    if (!slot) return error_response(404, "UnknownSession", "no session '" + sid + "'");
    std::lock_guard lock(slot->mu);
    if (action == "store") return m == "GET" ? json_response(200, to_json(slot->session.store())) : not_allowed();
    if (action == "trace") return m == "GET" ? json_response(200, to_json(slot->session.trace())) : not_allowed();
    if (action == "reset") {
      if (m != "POST") return not_allowed();
      slot->session.reset();
      return json_response(200, to_json(slot->session.store()));
    }
  } else if (area == "proposals") {
    if (n == 2) return m == "POST" ? propose(req) : not_allowed();
    if (n == 3) return m == "GET" ? get_proposal(parts[2]) : not_allowed();
    if (n == 4 && parts[3] == "commit") return m == "POST" ? commit(parts[2]) : not_allowed();
    if (n == 4 && parts[3] == "abandon") return m == "POST" ? abandon(parts[2]) : not_allowed();
  }
  return error_response(404, "E002", "no resource at " + req.path);
}

Response Service::summary() {
  const auto snap = snapshot();
  const Specification& spec = *snap->spec;
  Json j;
  j["version"] = snap->version;
  j["consistent"] = snap->report.consistent;
  j["check_only"] = check_only_;
  j["errors"] = snap->report.error_count();
  j["warnings"] = snap->report.warning_count();
  j["functions"] = spec.all<FunctionSpec>().size();
  j["elements"] = spec.all<DataElement>().size();
  j["types"] = spec.all<DataType>().size();
  const StateDecl* states = spec.state_decl();
  j["states"] = states != nullptr ? Json(states->states) : Json::array();
  return json_response(200, j);
}

namespace {

Query request_query(const Request& req, QueryKind kind) {
  auto where = req.params.find("where");
  Query q = parse_query(where == req.params.end() ? "" : where->second, kind);
  if (q.kind != kind)
    throw QueryError("InvalidQuery", "kind=" + std::string(to_string(q.kind)) + " does not match this endpoint");
  auto select = req.params.find("select");
  if (select != req.params.end()) set_select(q, select->second);
  return q;
}

}  // namespace

Response Service::list_functions(const Request& req) {
  const auto snap = snapshot();
  return json_response(200, to_json(evaluate(*snap->spec, request_query(req, QueryKind::Function))));
}

Response Service::list_elements(const Request& req) {
  const auto snap = snapshot();
  return json_response(200, to_json(evaluate(*snap->spec, request_query(req, QueryKind::Element))));
}

Response Service::list_types(const Request& req) {
  const auto snap = snapshot();
  return json_response(200, to_json(evaluate(*snap->spec, request_query(req, QueryKind::Type))));
}

Response Service::get_function(const std::string& id) {
  const auto snap = snapshot();
  if (const FunctionSpec* f = snap->index->function(id)) return json_response(200, function_json(*f, *snap->index));
  return error_response(404, "E002", "no function '" + id + "'");
}

Response Service::get_element(const std::string& id) {
  const auto snap = snapshot();
  if (const DataElement* e = snap->index->element(id)) return json_response(200, element_json(*e, *snap->index));
  return error_response(404, "UnknownElement", "no data element '" + id + "'");
}

Response Service::get_xref(const std::string& id) {
  const auto snap = snapshot();
  return json_response(200, to_json(xref(*snap->spec, id)));
}

Response Service::check(const Request& req) {
  const Json body = parse_body(req.body);
  if (!body.is_object()) throw JsonShapeError("check body must be an object");
  if (!body.contains("text")) return json_response(200, to_json(snapshot()->report));
  if (!body["text"].is_string()) throw JsonShapeError("\"text\" must be a string");
  auto parsed = parse_spec(body["text"].get<std::string>());
  if (!parsed.ok()) return json_response(200, to_json(make_report(std::move(parsed.errors))));
  return json_response(200, to_json(check_spec(*parsed.spec)));
}

Response Service::call(const std::string& session_id, const Request& req) {
  const Json body = parse_body(req.body);
  if (!body.is_object() || !body.contains("function") || !body["function"].is_string())
    throw JsonShapeError("call body must be {\"function\": string, \"bindings\": object}");
  const Binding bindings = binding_from_json(body.contains("bindings") ? body["bindings"] : Json());
  auto slot = session(session_id);
  if (!slot) return error_response(404, "UnknownSession", "no session '" + session_id + "'");
  std::lock_guard lock(slot->mu);
  const TraceRecord rec = slot->session.call(body["function"].get<std::string>(), bindings);
  return json_response(rec.outcome == Outcome::Ok ? 200 : 422, to_json(rec));
}

Response Service::propose(const Request& req) {
  Change change = change_from_json(parse_body(req.body));
  std::lock_guard lock(editor_mu_);
  return json_response(200, to_json(editor_->propose(std::move(change))));
}

Response Service::get_proposal(const std::string& id) {
  std::lock_guard lock(editor_mu_);
  if (const Proposal* p = editor_->find(id)) return json_response(200, to_json(*p));
  return error_response(404, "UnknownProposal", "no proposal '" + id + "'");
}

Response Service::commit(const std::string& id) {
  std::lock_guard lock(editor_mu_);
  const Specification& next = editor_->commit(id);
  auto snap = std::make_shared<Snapshot>();
  snap->spec = share(next);
  snap->index = std::make_unique<SpecIndex>(*snap->spec);
  snap->report = check_spec(*snap->spec);
  snap->version = editor_->version();
  {
    std::lock_guard slock(snapshot_mu_);
    snapshot_ = std::move(snap);
  }
  std::size_t dropped = 0;
  {
    std::lock_guard slock(sessions_mu_);
    dropped = sessions_.size();
    sessions_.clear();
  }
  Json j = to_json(*editor_->find(id));
  j["version"] = editor_->version();
  j["sessions_invalidated"] = dropped;
  return json_response(200, j);
}

Response Service::abandon(const std::string& id) {
  std::lock_guard lock(editor_mu_);
  editor_->abandon(id);
  return json_response(200, to_json(*editor_->find(id)));
}

void mount(httplib::Server& server, Service& service) {
  auto handler = [&service](const httplib::Request& hreq, httplib::Response& hres) {
    Request req;
    req.method = hreq.method;
    req.path = hreq.path;
    for (const auto& [k, v] : hreq.params) req.params.emplace(k, v);  // first value wins
    req.body = hreq.body;
    const Response res = service.handle(req);
    hres.status = res.status;
    hres.set_header("Access-Control-Allow-Origin", "*");
    hres.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    hres.set_header("Access-Control-Allow-Headers", "Content-Type");
    if (!res.body.empty()) hres.set_content(res.body, res.content_type);
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Delete(".*", handler);
  server.Options(".*", handler);
}

bool serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  mount(server, service);
  return server.listen(host, port);
}

}  // namespace svsp::api
