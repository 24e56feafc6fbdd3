#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "svsp/json_io.hpp"
#include "svsp/query.hpp"

using namespace svsp;
using svsp::testing::mini_gks;
using svsp::testing::parse_or_throw;

namespace {

std::vector<std::string> ids(const Table& t) {
  std::vector<std::string> out;
  const auto col = std::find(t.columns.begin(), t.columns.end(), "id") - t.columns.begin();
  for (const auto& row : t.rows) out.push_back(cell_text(row[static_cast<std::size_t>(col)]));
  return out;
}

std::vector<std::string> run(const Specification& spec, std::string_view q) {
  return ids(evaluate(spec, parse_query(q)));
}

using Names = std::vector<std::string>;

}  // namespace

TEST_CASE("glob matching") {
  CHECK(glob_match("SET_*", "SET_LINE_WIDTH"));
  CHECK(glob_match("*", ""));
  CHECK(glob_match("?PEN_*", "OPEN_GKS"));
  CHECK_FALSE(glob_match("SET_?", "SET_LW"));
  CHECK(glob_match("*_*_*", "A_B_C"));
  CHECK_FALSE(glob_match("*X", "ABC"));
  CHECK(glob_match("a*b*c", "aXXbYYc"));
}

TEST_CASE("only the closed-state function is callable in GKCL") {
  CHECK(run(mini_gks(), "kind=function & class.states~GKCL") == Names{"OPEN_GKS"});
}

TEST_CASE("unused elements") {
  auto spec = parse_or_throw("type N int\ntype U int\ndata used : N\ndata scratch : N\n"
                             "func F {\n class category=c group=g level=l states=[]\n"
                             " param used out\n effect e { used := 1 }\n}\n");
  CHECK(run(spec, "kind=element & unused") == Names{"scratch"});
  CHECK(run(spec, "kind=type & unused") == Names{"U"});
}

TEST_CASE("refs and category intersect like a naive scan") {
  const auto spec = mini_gks();
  Names expected;
  for (const auto* f : spec.all<FunctionSpec>()) {
    const bool refs = std::any_of(f->params.begin(), f->params.end(),
                                  [](const ParamRef& p) { return p.element == "line_width"; });
    if (refs && f->classification.category == "attribute") expected.push_back(f->id);
  }
  CHECK(expected == Names{"SET_LINE_WIDTH"});
  CHECK(run(spec, "kind=function & refs=line_width & class.category=attribute") == expected);
  CHECK(run(spec, "refs=line_width") == Names{"OPEN_GKS", "CLOSE_GKS", "SET_LINE_WIDTH", "POLYLINE"});
}

TEST_CASE("zero filters return every entity in declaration order") {
  const auto spec = mini_gks();
  const auto fns = run(spec, "kind=function");
  REQUIRE(fns.size() == 11);
  CHECK(fns.front() == "OPEN_GKS");
  CHECK(fns.back() == "POLYLINE");
  CHECK(run(spec, "kind=element").size() == 14);
  CHECK(run(spec, "kind=type").size() == 9);
  CHECK(run(spec, "").size() == 11);
}

TEST_CASE("filter permutations yield identical rows") {
  const auto spec = mini_gks();
  std::vector<std::string> terms{"class.states~WSAC", "name=*_*", "refs=$state", "class.level=L0a"};
  std::sort(terms.begin(), terms.end());
  std::optional<Names> first;
  do {
    std::string q = "kind=function";
    for (const auto& t : terms) q += " & " + t;
    const auto rows = run(spec, q);
    if (!first) first = rows;
    CHECK(rows == *first);
  } while (std::next_permutation(terms.begin(), terms.end()));
  CHECK(*first == Names{"DEACTIVATE_WORKSTATION"});
}

TEST_CASE("projections") {
  const auto spec = mini_gks();
  auto t = evaluate(spec, parse_query("name=SET_LINE_WIDTH & select=id,class.category,class.states,param-count,"
                                      "effect-count"));
  REQUIRE(t.rows.size() == 1);
  CHECK(cell_text(t.rows[0][1]) == "attribute");
  CHECK(cell_text(t.rows[0][2]) == "GKOP,WSOP,WSAC,SGOP");
  CHECK(std::get<std::int64_t>(t.rows[0][3]) == 2);
  CHECK(std::get<std::int64_t>(t.rows[0][4]) == 1);

  auto e = evaluate(spec, parse_query("kind=element & type=WidthScale & select=id,type,restriction"));
  REQUIRE(e.rows.size() == 2);
  CHECK(cell_text(e.rows[0][2]) == "value >= 0.0");
  CHECK(to_json(e).dump() ==
        R"([{"id":"lw","type":"WidthScale","restriction":"value >= 0.0"},)"
        R"({"id":"line_width","type":"WidthScale","restriction":"value >= 0.0"}])");
  CHECK(to_json(evaluate(spec, parse_query("class.states~GKCL"))).dump() == R"(["OPEN_GKS"])");
  CHECK(run(spec, "type=WidthScale") == Names{"OPEN_GKS", "CLOSE_GKS", "SET_LINE_WIDTH", "POLYLINE"});

  auto types = evaluate(spec, parse_query("kind=type & name=Point & select=id,type"));
  CHECK(cell_text(types.rows[0][1]) == "record");
}

TEST_CASE("invalid queries are rejected before evaluation") {
  const char* bad[] = {
      "kind=element & class.category=x", "kind=type & refs=x",      "kind=function & unused",
      "kind=widget",                     "select=id,bogus",         "kind=element & select=class.level",
      "name=SET_[A]",                    "class.states=GKOP",       "refs~x",
      "frobnicate",                      "kind=function & kind=type", "refs=",
      "select=",                         "class.group=a b",
  };
  for (const char* q : bad) {
    CAPTURE(q);
    try {
      (void)parse_query(q);
      FAIL("accepted");
    } catch (const QueryError& e) {
      CHECK(e.code() == "InvalidQuery");
    }
  }
}

TEST_CASE("xref") {
  const auto spec = mini_gks();
  const Xref state = xref(spec, "$state");
  CHECK(state.functions.size() == 8);
  for (const auto& f : state.functions) CHECK(f.implicit);
  int assigners = 0;
  for (const auto& e : state.effects) assigners += e.assigns ? 1 : 0;
  CHECK(assigners == 8);
  CHECK(state.kind == ElementKind::String);

  const Xref lw = xref(spec, "line_width");
  CHECK(lw.type == "WidthScale");
  CHECK(lw.restriction == "value >= 0.0");
  REQUIRE(lw.functions.size() == 4);
  CHECK(lw.functions[2].function == "SET_LINE_WIDTH");
  CHECK(lw.functions[2].direction == Direction::Out);

  auto scratch = parse_or_throw("type N int\ndata scratch : N restrict value >= 1\n");
  const Xref x = xref(scratch, "scratch");
  CHECK(x.functions.empty());
  CHECK(x.type == "N");
  CHECK(x.restriction == "value >= 1");

  try {
    (void)xref(spec, "nope");
    FAIL("expected UnknownElement");
  } catch (const QueryError& e) {
    CHECK(e.code() == "UnknownElement");
  }
}

TEST_CASE("refs rows equal the xref function list for every element") {
  const auto spec = mini_gks();
  for (const auto* e : spec.all<DataElement>()) {
    Names from_xref;
    for (const auto& f : xref(spec, e->id).functions) from_xref.push_back(f.function);
    CHECK(run(spec, "refs=" + e->id) == from_xref);
  }
}
