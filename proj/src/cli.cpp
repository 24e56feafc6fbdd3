#include "svsp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "svsp/api.hpp"
#include "svsp/dsl.hpp"

namespace svsp {

namespace {

struct Io {
  std::ostream& out;
  std::ostream& err;
};

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  o << text;
  return static_cast<bool>(o.flush());
}

void print_diagnostics(std::ostream& os, const std::vector<Diagnostic>& diags, bool json) {
  if (json) {
    os << to_json(diags).dump(2) << "\n";
    return;
  }
  for (const auto& d : diags) os << format_diagnostic_line(d) << "\n";
}

// Reads and parses FILE.  On failure reports and returns the exit status.
struct Loaded {
  std::optional<Specification> spec;
  int status = kExitOk;
};

Loaded load_spec(const std::string& path, Io io, bool json = false) {
  Loaded l;
  const auto text = read_text(path);
  if (!text) {
    io.err << "svsp: cannot read " << path << "\n";
    l.status = kExitIo;
    return l;
  }
  auto parsed = parse_spec(*text);
  if (!parsed.ok()) {
    print_diagnostics(io.out, parsed.errors, json);
    l.status = kExitUsage;
    return l;
  }
  l.spec = std::move(parsed.spec);
  return l;
}

int cmd_check(const std::string& file, const std::string& format, bool strict, Io io) {
  const bool json = format == "json";
  auto l = load_spec(file, io, json);
  if (!l.spec) return l.status;
  const CheckReport report = check_spec(*l.spec);
  if (json || !report.diagnostics.empty()) print_diagnostics(io.out, report.diagnostics, json);
  if (!report.consistent) return kExitFindings;
  return strict && report.warning_count() > 0 ? kExitFindings : kExitOk;
}

int cmd_fmt(const std::string& file, bool write, Io io) {
  auto l = load_spec(file, io);
  if (!l.spec) return l.status;
  const std::string text = format_spec(*l.spec);
  if (!write) {
    io.out << text;
    return kExitOk;
  }
  if (!write_text(file, text)) {
    io.err << "svsp: cannot write " << file << "\n";
    return kExitIo;
  }
  return kExitOk;
}

void print_table_text(std::ostream& os, const Table& t) {
  if (t.columns.size() > 1) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "\t" : "") << t.columns[i];
    os << "\n";
  }
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << cell_text(row[i]);
    os << "\n";
  }
}

int cmd_query(const std::string& file, const std::string& query_text, const std::string& select,
              const std::string& format, Io io) {
  auto l = load_spec(file, io);
  if (!l.spec) return l.status;
  Query q;
  try {
    q = parse_query(query_text);
    if (!select.empty()) set_select(q, select);
  } catch (const QueryError& e) {
    io.err << "svsp: " << e.code() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const Table t = evaluate(*l.spec, q);
  if (format == "json") {
    io.out << to_json(t).dump(2) << "\n";
  } else {
    print_table_text(io.out, t);
  }
  return kExitOk;
}

int cmd_run(const std::string& file, const std::string& script_path, const std::string& trace_path, Io io) {
  auto l = load_spec(file, io);
  if (!l.spec) return l.status;
  const auto script = read_text(script_path);
  if (!script) {
    io.err << "svsp: cannot read " << script_path << "\n";
    return kExitIo;
  }
  std::optional<Session> session;
  try {
    session.emplace(std::move(*l.spec));
  } catch (const ScenarioError& e) {
    io.err << "svsp: " << e.code() << ": " << e.what() << "\n";
    print_diagnostics(io.err, e.diagnostics(), false);
    return kExitFindings;
  }
  const ScriptRun run = run_script(*session, *script);
  if (!run.errors.empty()) {
    print_diagnostics(io.out, run.errors, false);
    return kExitUsage;
  }
  for (const auto& r : run.results) {
    io.out << (r.passed ? "PASS " : "FAIL ") << r.line << " " << r.text;
    if (!r.passed) io.out << " (" << r.detail << ")";
    io.out << "\n";
  }
  io.out << run.passed << " passed, " << run.failed << " failed\n";
  if (!trace_path.empty() && !write_text(trace_path, to_json(session->trace()).dump(2) + "\n")) {
    io.err << "svsp: cannot write " << trace_path << "\n";
    return kExitIo;
  }
  return run.ok() ? kExitOk : kExitFindings;
}

int cmd_edit(const std::string& file, const std::string& changes_path, const std::string& out_path, Io io) {
  auto l = load_spec(file, io);
  if (!l.spec) return l.status;
  const auto changes_text = read_text(changes_path);
  if (!changes_text) {
    io.err << "svsp: cannot read " << changes_path << "\n";
    return kExitIo;
  }
  std::vector<Change> changes;
  try {
    const Json j = Json::parse(*changes_text);
    if (!j.is_array()) throw JsonShapeError("the change list must be a JSON array");
    for (const auto& c : j) changes.push_back(change_from_json(c));
  } catch (const Json::exception& e) {
    io.err << "svsp: " << changes_path << ": malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {  // JsonShapeError, ChangeError
    io.err << "svsp: " << changes_path << ": " << e.what() << "\n";
    return kExitUsage;
  }

  std::optional<EditSession> session;
  try {
    session.emplace(std::move(*l.spec));
  } catch (const EditError& e) {
    io.err << "svsp: " << e.code() << ": " << e.what() << "\n";
    return kExitFindings;
  }
  int status = kExitOk;
  for (auto& change : changes) {
    const Proposal& p = session->propose(std::move(change));
    io.err << p.id << " " << to_string(p.change.op) << " " << to_string(p.change.kind) << " " << p.change.id << ": "
           << (p.report.consistent ? "committed" : "not consistent") << "\n";
    if (!p.report.consistent) {
      print_diagnostics(io.err, p.report.diagnostics, false);
      status = kExitFindings;
      break;
    }
    session->commit(p.id);
  }
  const std::string text = format_spec(session->base());
  if (out_path.empty()) {
    io.out << text;
  } else if (!write_text(out_path, text)) {
    io.err << "svsp: cannot write " << out_path << "\n";
    return kExitIo;
  }
  return status;
}

int cmd_serve(const std::string& file, std::optional<int> port, const std::string& host, bool no_ui, Io io) {
  auto l = load_spec(file, io);
  if (!l.spec) return l.status;
  if (!port) {
    port = 8080;
    if (const char* env = std::getenv("SVSP_PORT")) {
      try {
        port = std::stoi(env);
      } catch (const std::exception&) {
        io.err << "svsp: SVSP_PORT is not a port number: " << env << "\n";
        return kExitUsage;
      }
    }
  }
  api::Options opt;
  opt.serve_ui = !no_ui;
  api::Service service(std::move(*l.spec), opt);
  if (service.check_only()) io.err << "svsp: specification has errors; serving in check-only mode\n";
  io.err << "svsp: serving on http://" << host << ":" << *port << "\n";
  if (!api::serve(service, host, *port)) {
    io.err << "svsp: cannot listen on " << host << ":" << *port << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Io io{out, err};
  CLI::App app{"Specification validator: check, format, query, simulate, edit, and serve SVSP specifications",
               "svsp"};
  app.require_subcommand(1);

  std::string file, format = "text", query_text, select, script, trace, changes, out_path, host = "127.0.0.1";
  bool strict = false, write = false, no_ui = false;
  std::optional<int> port;
  const auto formats = CLI::IsMember({"text", "json"});

  auto* check = app.add_subcommand("check", "Check a specification and print diagnostics");
  check->add_option("FILE", file, "Specification file")->required();
  check->add_option("--format", format, "Output format")->check(formats);
  check->add_flag("--strict", strict, "Warnings also fail");

  auto* fmt = app.add_subcommand("fmt", "Print canonical text");
  fmt->add_option("FILE", file, "Specification file")->required();
  fmt->add_flag("--write", write, "Rewrite FILE in place");

  auto* query = app.add_subcommand("query", "Select functions, elements, or types");
  query->add_option("FILE", file, "Specification file")->required();
  query->add_option("QUERY", query_text, "Query text, e.g. 'class.states~GKOP & refs=lw'")->required();
  query->add_option("--select", select, "Comma-separated projection");
  query->add_option("--format", format, "Output format")->check(formats);

  auto* run = app.add_subcommand("run", "Execute a scenario script");
  run->add_option("FILE", file, "Specification file")->required();
  run->add_option("SCRIPT", script, "Scenario script")->required();
  run->add_option("--trace", trace, "Write the trace as JSON");

  auto* edit = app.add_subcommand("edit", "Apply a JSON change list through check-gated commits");
  edit->add_option("FILE", file, "Specification file")->required();
  edit->add_option("--apply", changes, "JSON array of changes")->required();
  edit->add_option("--out", out_path, "Write the result here instead of stdout");

  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  serve->add_option("FILE", file, "Specification file")->required();
  serve->add_option("--port", port, "Port (default $SVSP_PORT or 8080)")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Listen address");
  serve->add_flag("--no-ui", no_ui, "Do not serve the placeholder page at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "svsp: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (check->parsed()) return cmd_check(file, format, strict, io);
  if (fmt->parsed()) return cmd_fmt(file, write, io);
  if (query->parsed()) return cmd_query(file, query_text, select, format, io);
  if (run->parsed()) return cmd_run(file, script, trace, io);
  if (edit->parsed()) return cmd_edit(file, changes, out_path, io);
  return cmd_serve(file, port, host, no_ui, io);
}

}  // namespace svsp
