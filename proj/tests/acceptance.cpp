// Acceptance gate: one PASS/FAIL line per criterion; exits 0 only when every
// criterion passes.

#include <bitset>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iterator>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/restriction_oracle.hpp"
#include "support/spec_gen.hpp"
#include "svsp/checker.hpp"
#include "svsp/cli.hpp"
#include "svsp/dsl.hpp"
#include "svsp/editor.hpp"
#include "svsp/json_io.hpp"
#include "svsp/query.hpp"
#include "svsp/restriction.hpp"
#include "svsp/scenario.hpp"

using namespace svsp;
using namespace svsp::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(1);
  ss << ms << " ms";
  return ss.str();
}

struct Finding {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail.clear();
    if (!detail.empty()) detail += "; ";
    ok = false;
    detail += why;
  }
};

struct CliResult {
  int status;
  std::string out;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "svsp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str()};
}

// --- criteria --------------------------------------------------------------

Finding fixture_soundness() {
  Finding v;
  const auto spec = mini_gks();
  if (spec.all<FunctionSpec>().size() != 11) v.fail("expected 11 functions");
  if (spec.all<DataElement>().size() != 14) v.fail("expected 14 data elements");
  const StateDecl* states = spec.state_decl();
  if (states == nullptr || states->states != std::vector<std::string>{"GKCL", "GKOP", "WSOP", "WSAC", "SGOP"})
    v.fail("expected states GKCL GKOP WSOP WSAC SGOP");

  const auto t0 = Clock::now();
  const auto r = cli({"check", fixture_path("mini_gks.svsp")});
  const double ms = ms_since(t0);
  if (r.status != 0) v.fail("exit " + std::to_string(r.status));
  if (!r.out.empty()) v.fail("unexpected output: " + r.out);
  if (ms >= 100.0) v.fail("took " + fmt_ms(ms));
  if (v.ok) v.detail = "exit 0, no diagnostics, " + fmt_ms(ms);
  return v;
}

Finding seeded_defects() {
  struct Expect {
    const char* file;
    const char* code;
    const char* entity;
  };
  const Expect table[] = {
      {"e001_dup_func", "E001", "OPEN_GKS"},           {"e002_dangling_param", "E002", "SET_LINE_WIDTH"},
      {"e003_wide_pre", "E003", "POLYLINE"},           {"e004_unchecked_input", "E004", "SET_LINE_WIDTH"},
      {"e005_kind_mismatch", "E005", "SET_POLYLINE_INDEX"}, {"e006_unknown_state", "E006", "CLOSE_SEGMENT"},
      {"e007_empty_range", "E007", "npts"},            {"e008_assign_in_param", "E008", "SET_LINE_WIDTH"},
  };
  Finding v;
  int matched = 0;
  for (const auto& e : table) {
    const std::string base = fixture_path(std::string("defects/") + e.file);
    const auto r = cli({"check", base + ".svsp"});
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> errors;
    while (std::getline(lines, line))
      if (line.find(" error ") != std::string::npos) errors.push_back(line);
    const std::string want = std::string(e.code) + " error " + e.entity + " ";
    if (r.status != 1) {
      v.fail(std::string(e.file) + ": exit " + std::to_string(r.status));
    } else if (errors.size() != 1 || errors[0].rfind(want, 0) != 0) {
      v.fail(std::string(e.file) + ": got " + std::to_string(errors.size()) + " error(s): " + r.out);
    } else if (r.out != read_file(base + ".expected")) {
      v.fail(std::string(e.file) + ": output differs from golden");
    } else {
      ++matched;
    }
  }
  if (v.ok) v.detail = std::to_string(matched) + "/8 defects reported exactly, goldens match";
  return v;
}

Finding scale_robustness() {
  Finding v;
  const std::string text = scale_spec_text(200, 1000);
  const auto t0 = Clock::now();
  auto parsed = parse_spec(text);
  if (!parsed.ok()) {
    v.fail("generated spec does not parse");
    return v;
  }
  const CheckReport report = check_spec(*parsed.spec);
  const double check_ms = ms_since(t0);
  const Specification& spec = *parsed.spec;
  if (!report.consistent) v.fail("generated spec is inconsistent: " + format_diagnostic_line(report.diagnostics[0]));
  if (spec.all<FunctionSpec>().size() != 200 || spec.all<DataElement>().size() != 1000) v.fail("wrong size");
  if (check_ms >= 2000.0) v.fail("parse+check took " + fmt_ms(check_ms));

  const char* queries[] = {
      "kind=function",
      "name=FN_1*",
      "class.states~ACTIVE & class.category=output",
      "refs=d997",
      "type=Ratio & class.level=L2",
      "kind=element & type=Label",
      "kind=element & unused",
      "kind=type & unused",
      "kind=element & name=d9?? & select=id,type,restriction",
      "name=*_5* & select=id,class.category,class.states,param-count,effect-count",
  };
  double worst = 0;
  for (const char* q : queries) {
    const auto q0 = Clock::now();
    const Table t = evaluate(spec, parse_query(q));
    const double ms = ms_since(q0);
    worst = std::max(worst, ms);
    if (t.rows.empty() && std::string_view(q).find("unused") == std::string_view::npos)
      v.fail(std::string("no rows for ") + q);
  }
  const auto x0 = Clock::now();
  const Xref x = xref(spec, "d500");
  worst = std::max(worst, ms_since(x0));
  if (x.functions.size() != 1) v.fail("xref(d500) should name one function");
  if (worst >= 100.0) v.fail("slowest query " + fmt_ms(worst));
  if (v.ok) v.detail = "parse+check " + fmt_ms(check_ms) + ", slowest query " + fmt_ms(worst);
  return v;
}

Finding containment_oracle() {
  Finding v;
  const auto t0 = Clock::now();
  std::vector<Restriction> rs;
  rs.emplace_back(Unrestricted{});
  auto bound = [](int x, bool incl) { return Bound{std::int64_t{x}, incl}; };
  for (int a = -20; a <= 20; ++a)
    for (bool ia : {true, false}) {
      rs.emplace_back(NumericRange{bound(a, ia), std::nullopt});
      rs.emplace_back(NumericRange{std::nullopt, bound(a, ia)});
      for (int b = -20; b <= 20; ++b)
        for (bool ib : {true, false}) rs.emplace_back(NumericRange{bound(a, ia), bound(b, ib)});
    }

  constexpr int kLo = -50, kHi = 50;
  std::vector<std::bitset<kHi - kLo + 1>> members(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (int x = kLo; x <= kHi; ++x) members[i][static_cast<std::size_t>(x - kLo)] = member(rs[i], x);

  std::uint64_t pairs = 0, disagreements = 0;
  std::string first_bad;
  for (std::size_t o = 0; o < rs.size(); ++o) {
    const auto outside = ~members[o];
    for (std::size_t i = 0; i < rs.size(); ++i) {
      ++pairs;
      const bool expected = (members[i] & outside).none();
      const auto got = restriction_contains(rs[o], rs[i], NumericDomain::Int);
      if (!got.ok() || got.value() != expected) {
        if (disagreements++ == 0)
          first_bad = "outer '" + format_restriction(rs[o]) + "' inner '" + format_restriction(rs[i]) + "'";
      }
    }
  }
  const double ms = ms_since(t0);
  if (disagreements != 0) v.fail(std::to_string(disagreements) + " disagreements, first: " + first_bad);
  if (ms >= 10000.0) v.fail("took " + fmt_ms(ms));
  if (v.ok) v.detail = std::to_string(pairs) + " pairs agree over -50..50, " + fmt_ms(ms);
  return v;
}

Finding golden_trace() {
  Finding v;
  Session s(mini_gks());
  const ScriptRun happy = run_script(s, read_fixture("happy.svs"));
  if (!happy.errors.empty() || happy.passed != 5 || happy.failed != 0)
    v.fail("happy path " + std::to_string(happy.passed) + " passed, " + std::to_string(happy.failed) + " failed");
  if (to_json(s.store()).dump(2) + "\n" != read_fixture("happy_store.json"))
    v.fail("final store differs from golden JSON");
  Session fresh(mini_gks());
  const ScriptRun gate = run_script(fresh, read_fixture("gate.svs"));
  if (!gate.ok() || gate.passed != 1) v.fail("gate script failed");
  if (v.ok) v.detail = "happy path 5/5, store matches golden byte-for-byte, gate passes";
  return v;
}

Finding atomicity_fuzz() {
  Finding v;
  Session s(mini_gks());
  std::mt19937 rng(20260101);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<std::string> names;
  for (const auto* f : s.index().functions()) names.push_back(f->id);
  names.emplace_back("NOT_A_FUNCTION");
  auto random_value = [&]() -> BindingValue {
    switch (pick(8)) {
      case 0: return BindingValue::defined();
      case 1: return {Value{static_cast<std::int64_t>(pick(2000)) - 1000}};
      case 2: return {Value{static_cast<double>(pick(400)) / 8.0 - 25.0}};
      case 3: return {Value{std::string(pick(12), 'w')}};
      case 4: return {Value{std::numeric_limits<std::int64_t>::max()}};
      case 5: return {Value{-0.5}};
      default: return {Value{static_cast<std::int64_t>(pick(4)) + 1}};
    }
  };
  int ok = 0, rejected = 0, violations = 0, leaks = 0;
  for (int i = 0; i < 10000; ++i) {
    if (i % 400 == 0) s.reset();
    const std::string fn = names[pick(names.size())];
    Binding b;
    if (const FunctionSpec* f = s.index().function(fn))
      for (const auto& p : f->params) {
        const bool bindable = !p.implicit && p.direction != Direction::Out;
        if (pick(100) < (bindable ? 92 : 3)) b[p.element] = random_value();
      }
    if (pick(50) == 0) b["no_such_param"] = random_value();
    const std::string before = to_json(s.store()).dump();
    TraceRecord r;
    try {
      r = s.call(fn, b);
    } catch (const std::exception& e) {
      v.fail(std::string("call threw: ") + e.what());
      return v;
    }
    if (r.outcome == Outcome::Rejected) {
      ++rejected;
      if (to_json(s.store()).dump() != before) ++leaks;
    } else {
      ++ok;
    }
    for (const auto& [id, entry] : s.store().entries()) {
      if (entry.value.has_value() != (entry.status == Status::Known)) ++violations;
      if (entry.value && !restriction_admits(s.index().element(id)->restriction, *entry.value).holds()) ++violations;
    }
  }
  if (leaks) v.fail(std::to_string(leaks) + " rejected calls changed the store");
  if (violations) v.fail(std::to_string(violations) + " store invariant violations");
  if (ok < 500 || rejected < 500) v.fail("poor coverage: " + std::to_string(ok) + " ok, " + std::to_string(rejected) + " rejected");
  if (v.ok) v.detail = "10000 calls (" + std::to_string(ok) + " ok, " + std::to_string(rejected) + " rejected), no violations";
  return v;
}

Finding round_trip() {
  Finding v;
  std::vector<fs::path> corpus;
  for (const auto& dir : {fs::path(SVSP_FIXTURE_DIR), fs::path(SVSP_FIXTURE_DIR) / "defects"})
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".svsp") corpus.push_back(e.path());
  std::sort(corpus.begin(), corpus.end());
  for (const auto& p : corpus) {
    auto first = parse_spec(read_file(p.string()));
    if (!first.ok()) {
      v.fail(p.filename().string() + " does not parse");
      continue;
    }
    const std::string text = format_spec(*first.spec);
    auto second = parse_spec(text);
    if (!second.ok() || !(*second.spec == *first.spec) || format_spec(*second.spec) != text)
      v.fail(p.filename().string() + " does not round-trip");
  }

  std::mt19937 rng(77);
  std::uniform_int_distribution<int> byte(0, 255);
  const std::string sources[] = {read_fixture("mini_gks.svsp"), read_fixture("syntax_tour.svsp")};
  int rejected = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string text = sources[i % 2];
    std::uniform_int_distribution<std::size_t> where(0, text.size() - 1);
    for (int k = 0; k <= i % 10; ++k) {
      switch (k % 3) {
        case 0: text[where(rng)] = static_cast<char>(byte(rng)); break;
        case 1: text.erase(where(rng), 1 + static_cast<std::size_t>(byte(rng) % 8)); break;
        default: text.insert(where(rng), 1, static_cast<char>(byte(rng))); break;
      }
      if (text.empty()) text = "x";
      where = std::uniform_int_distribution<std::size_t>(0, text.size() - 1);
    }
    try {
      auto out = parse_spec(text);
      if (!out.ok()) {
        ++rejected;
        if (out.errors.empty()) v.fail("failed parse without diagnostics");
      } else {
        (void)check_spec(*out.spec);
      }
    } catch (const std::exception& e) {
      v.fail(std::string("parser threw: ") + e.what());
      break;
    }
  }
  if (v.ok)
    v.detail = std::to_string(corpus.size()) + " corpus files round-trip; 1000 mutants survived (" +
               std::to_string(rejected) + " with diagnostics)";
  return v;
}

Finding editor_safety() {
  Finding v;
  const char* new_function =
      "func SET_NPTS {\n"
      "  class category=attribute group=output_attributes level=L0a states=[WSAC, SGOP]\n"
      "  param npts out implicit\n"
      "  effect set_npts {\n"
      "    npts := 2\n"
      "  }\n"
      "}\n";
  EditSession s(mini_gks());
  int dup_adds = 0, dangling = 0, stale = 0, refused = 0, committed = 0, abandoned = 0;
  std::vector<std::string> pending;
  std::mt19937 rng(50);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  auto propose = [&](const char* op, const char* kind, const char* id, const char* decl) {
    const Proposal& p = s.propose(make_change(op, kind, id, decl));
    pending.push_back(p.id);
    return p.id;
  };
  auto attempt = [&](const std::function<void()>& f) {
    const std::string before = format_spec(s.base());
    try {
      f();
    } catch (const EditError& e) {
      ++refused;
      if (e.kind() == EditError::Kind::StaleProposal) ++stale;
      if (format_spec(s.base()) != before) v.fail("refused operation changed the base");
    }
  };

  for (int op = 0; op < 50; ++op) {
    switch (op % 5) {
      case 0:
        propose("add", "element", "", "data lw : WidthScale");
        ++dup_adds;
        break;
      case 1:
        propose("delete", "element", "line_width", "");
        ++dangling;
        break;
      case 2:
        switch (pick(4)) {
          case 0: propose("add", "element", "", ("data extra" + std::to_string(op) + " : Count").c_str()); break;
          case 1: propose("add", "function", "", new_function); break;
          case 2: propose("delete", "function", "SET_NPTS", ""); break;
          default: propose("replace", "element", "npts", "data npts : Count restrict value >= 1"); break;
        }
        break;
      case 3:
        attempt([&] {
          s.commit(pending[pick(pending.size())]);
          ++committed;
        });
        break;
      default:
        attempt([&] {
          s.abandon(pending[pick(pending.size())]);
          ++abandoned;
        });
        break;
    }
    if (!check_spec(s.base()).consistent) {
      v.fail("base inconsistent after operation " + std::to_string(op));
      break;
    }
  }
  if (stale == 0 || committed == 0) v.fail("sequence did not exercise commits and stale commits");

  EditSession e(mini_gks());
  const std::string original = format_spec(e.base());
  e.commit(e.propose(make_change("add", "function", "", new_function)).id);
  e.commit(e.propose(make_change("delete", "function", "SET_NPTS", "")).id);
  if (format_spec(e.base()) != original) v.fail("add-then-delete is not byte-identical");

  if (v.ok)
    v.detail = "50 operations (" + std::to_string(dup_adds) + " duplicate adds, " + std::to_string(dangling) +
               " dangling deletes, " + std::to_string(committed) + " commits, " + std::to_string(stale) +
               " stale, " + std::to_string(refused) + " refused); add-then-delete byte-identical";
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, Finding (*)()> criteria[] = {
      {"fixture-soundness", fixture_soundness},
      {"seeded-defect-matrix", seeded_defects},
      {"scale-robustness", scale_robustness},
      {"restriction-containment-oracle", containment_oracle},
      {"scenario-golden-trace", golden_trace},
      {"atomicity-fuzz", atomicity_fuzz},
      {"round-trip", round_trip},
      {"editor-safety", editor_safety},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Finding v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.fail(std::string("threw: ") + e.what());
    }
    std::cout << (v.ok ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    if (!v.ok) ++failed;
  }
  const int total = static_cast<int>(std::size(criteria));
  std::cout << (total - failed) << "/" << total << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
