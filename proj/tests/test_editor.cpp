#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "svsp/dsl.hpp"
#include "svsp/editor.hpp"
#include "svsp/json_io.hpp"

using namespace svsp;
using svsp::testing::mini_gks;
using svsp::testing::parse_or_throw;

namespace {

const char* kNewFunction =
    "func SET_NPTS {\n"
    "  class category=attribute group=output_attributes level=L0a states=[WSAC, SGOP]\n"
    "  param npts out implicit\n"
    "  effect set_npts {\n"
    "    npts := 2\n"
    "  }\n"
    "}\n";

bool has_code(const CheckReport& r, std::string_view code, std::string_view entity) {
  for (const auto& d : r.diagnostics)
    if (d.code == code && d.entity == entity) return true;
  return false;
}

template <typename F>
EditError::Kind edit_error(F&& f) {
  try {
    f();
  } catch (const EditError& e) {
    return e.kind();
  }
  FAIL("expected an EditError");
  return EditError::Kind::NotConsistent;
}

}  // namespace

TEST_CASE("make_change validates its fields") {
  CHECK_THROWS_AS((void)make_change("upsert", "element", "x", ""), ChangeError);
  CHECK_THROWS_AS((void)make_change("add", "states", "", "states { A }"), ChangeError);
  CHECK_THROWS_AS((void)make_change("add", "element", "", "data x :"), ChangeError);
  CHECK_THROWS_AS((void)make_change("add", "element", "", "type N int"), ChangeError);
  CHECK_THROWS_AS((void)make_change("add", "element", "", "type N int\ndata x : N"), ChangeError);
  CHECK_THROWS_AS((void)make_change("add", "element", "y", "data x : N"), ChangeError);
  CHECK_THROWS_AS((void)make_change("replace", "element", "", "data x : N"), ChangeError);
  CHECK_THROWS_AS((void)make_change("delete", "element", "", ""), ChangeError);
  const Change c = make_change("add", "element", "", "data x : N");
  CHECK(c.id == "x");
  CHECK(c.kind == DeclKind::Element);
  CHECK(change_from_json(Json::parse(R"({"op":"delete","kind":"function","id":"POLYLINE"})")).op ==
        ChangeOp::Delete);
  CHECK_THROWS_AS((void)change_from_json(Json::parse(R"({"op":"add","kind":"type"})")), JsonShapeError);
  CHECK_THROWS_AS((void)change_from_json(Json::parse(R"([1,2])")), JsonShapeError);
}

TEST_CASE("an inconsistent base is refused") {
  CHECK(edit_error([] { EditSession s(parse_or_throw("type N int\ndata x : M")); }) ==
        EditError::Kind::InconsistentBase);
}

TEST_CASE("propose examples") {
  EditSession s(mini_gks());
  const Specification base = s.base();

  const Proposal& dup = s.propose(make_change("add", "element", "", "data lw : WidthScale"));
  CHECK(has_code(dup.report, "E001", "lw"));
  CHECK_FALSE(dup.report.consistent);

  const Proposal& del = s.propose(make_change("delete", "element", "lw", ""));
  CHECK(has_code(del.report, "E002", "SET_LINE_WIDTH"));

  const Proposal& add = s.propose(make_change("add", "function", "", kNewFunction));
  CHECK(add.report.consistent);
  CHECK(add.status == ProposalStatus::Pending);

  const Proposal& missing = s.propose(make_change("replace", "element", "ghost", "data ghost : Count"));
  CHECK(has_code(missing.report, "E002", "ghost"));
  CHECK(s.propose(make_change("delete", "type", "Ghost", "")).report.error_count() == 1);

  CHECK(s.base() == base);
  CHECK(s.version() == 0);
}

TEST_CASE("commit examples") {
  EditSession s(mini_gks());
  const std::string before = format_spec(s.base());

  const std::string dup = s.propose(make_change("add", "element", "", "data lw : WidthScale")).id;
  CHECK(edit_error([&] { s.commit(dup); }) == EditError::Kind::NotConsistent);
  CHECK(format_spec(s.base()) == before);

  const std::string a = s.propose(make_change("add", "function", "", kNewFunction)).id;
  const std::string b = s.propose(make_change("add", "element", "", "data scratch : Count")).id;
  const Specification& next = s.commit(a);
  CHECK(next.all<FunctionSpec>().back()->id == "SET_NPTS");
  CHECK(check_spec(next).consistent);
  CHECK(s.version() == 1);
  CHECK(s.find(a)->status == ProposalStatus::Committed);

  CHECK(edit_error([&] { s.commit(b); }) == EditError::Kind::StaleProposal);
  CHECK(edit_error([&] { s.commit(a); }) == EditError::Kind::UnknownProposal);
  CHECK(edit_error([&] { s.commit("p999"); }) == EditError::Kind::UnknownProposal);
}

TEST_CASE("replace swaps a declaration in place") {
  EditSession s(mini_gks());
  const auto& p = s.propose(make_change("replace", "element", "npts", "data npts : Count restrict value >= 2"));
  REQUIRE(p.report.consistent);
  s.commit(p.id);
  const auto elems = s.base().all<DataElement>();
  CHECK(elems[12]->id == "npts");
  CHECK(format_restriction(elems[12]->restriction) == "value >= 2");

  // Narrowing below the POLYLINE pre breaks restriction agreement.
  const auto& bad = s.propose(make_change("replace", "element", "npts", "data npts : Count restrict value >= 3"));
  CHECK(has_code(bad.report, "E003", "POLYLINE"));
}

TEST_CASE("abandon examples") {
  EditSession s(mini_gks());
  const Change change = make_change("add", "element", "", "data scratch : Count");
  const std::string id = s.propose(change).id;
  s.abandon(id);
  CHECK(s.find(id)->status == ProposalStatus::Abandoned);
  CHECK(edit_error([&] { s.abandon(id); }) == EditError::Kind::UnknownProposal);
  CHECK(edit_error([&] { s.commit(id); }) == EditError::Kind::UnknownProposal);
  const Proposal& again = s.propose(change);
  CHECK(again.id != id);
  CHECK(again.status == ProposalStatus::Pending);
  s.commit(again.id);
  CHECK(s.base().all<DataElement>().back()->id == "scratch");
}

TEST_CASE("add then delete restores the serialized specification") {
  EditSession s(mini_gks());
  const std::string original = format_spec(s.base());
  s.commit(s.propose(make_change("add", "function", "", kNewFunction)).id);
  CHECK(format_spec(s.base()) != original);
  s.commit(s.propose(make_change("delete", "function", "SET_NPTS", "")).id);
  CHECK(format_spec(s.base()) == original);

  s.commit(s.propose(make_change("add", "type", "", "type Extra real")).id);
  s.commit(s.propose(make_change("delete", "type", "Extra", "")).id);
  CHECK(format_spec(s.base()) == original);
}

TEST_CASE("random operation sequences never break the base") {
  std::mt19937 rng(8);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<std::pair<std::string, std::vector<std::string>>> changes = {
      {"add element", {"add", "element", "", "data scratch : Count"}},
      {"dup element", {"add", "element", "", "data lw : WidthScale"}},
      {"dangling delete", {"delete", "element", "line_width", ""}},
      {"delete function", {"delete", "function", "POLYLINE", ""}},
      {"add function", {"add", "function", "", kNewFunction}},
      {"bad type ref", {"add", "element", "", "data q : Missing"}},
      {"replace type", {"replace", "type", "Count", "type Count real"}},
      {"delete unused", {"delete", "element", "scratch", ""}},
      {"empty range", {"replace", "element", "npts", "data npts : Count restrict 5 <= value <= 4"}},
  };
  int commits = 0, refusals = 0;
  for (int round = 0; round < 20; ++round) {
    EditSession s(mini_gks());
    std::vector<std::string> ids;
    for (int op = 0; op < 50; ++op) {
      const std::string before = format_spec(s.base());
      const auto which = pick(3);
      if (which == 0 || ids.empty()) {
        const auto& c = changes[pick(changes.size())].second;
        ids.push_back(s.propose(make_change(c[0], c[1], c[2], c[3])).id);
      } else {
        const std::string id = ids[pick(ids.size())];
        try {
          if (which == 1) {
            s.commit(id);
            ++commits;
          } else {
            s.abandon(id);
          }
        } catch (const EditError&) {
          ++refusals;
          CHECK(format_spec(s.base()) == before);
        }
      }
      REQUIRE(check_spec(s.base()).consistent);
    }
  }
  CHECK(commits > 10);
  CHECK(refusals > 10);
}
