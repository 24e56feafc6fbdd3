#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "svsp/dsl.hpp"

using namespace svsp;
using svsp::testing::parse_or_throw;

TEST_CASE("parse a type and a restricted element") {
  auto out = parse_spec("type W real\ndata lw : W restrict value >= 0.0");
  REQUIRE(out.ok());
  const auto& spec = *out.spec;
  REQUIRE(spec.all<DataType>().size() == 1);
  REQUIRE(spec.all<DataElement>().size() == 1);
  const DataElement& lw = *spec.all<DataElement>()[0];
  CHECK(lw.id == "lw");
  CHECK(lw.type_ref == "W");
  CHECK(lw.loc.line == 2);
  CHECK(lw.loc.col == 1);
  const auto* range = std::get_if<NumericRange>(&lw.restriction);
  REQUIRE(range != nullptr);
  REQUIRE(range->lower.has_value());
  CHECK(std::get<double>(range->lower->value) == 0.0);
  CHECK(range->lower->inclusive);
  CHECK_FALSE(range->upper.has_value());
}

TEST_CASE("unclosed function is one syntax error on line 1") {
  auto out = parse_spec("func F {");
  REQUIRE_FALSE(out.ok());
  REQUIRE(out.errors.size() == 1);
  CHECK(out.errors[0].code == "E000");
  REQUIRE(out.errors[0].location.has_value());
  CHECK(out.errors[0].location->line == 1);
}

TEST_CASE("recovery reports several errors in one pass") {
  auto out = parse_spec(
      "type A int\n"
      "data x\n"
      "type B bogus\n"
      "data y : A\n"
      "func F { nonsense }\n"
      "type C string\n");
  REQUIRE_FALSE(out.ok());
  CHECK(out.errors.size() == 3);
  for (const auto& d : out.errors) CHECK(d.code == "E000");
}

TEST_CASE("the mini-GKS fixture parses to 5 states, 11 functions, 14 elements") {
  auto spec = svsp::testing::mini_gks();
  REQUIRE(spec.state_decl() != nullptr);
  CHECK(spec.state_decl()->states.size() == 5);
  CHECK(spec.all<FunctionSpec>().size() == 11);
  CHECK(spec.all<DataElement>().size() == 14);
}

TEST_CASE("restriction clause forms") {
  auto spec = parse_or_throw(
      "type N int\n"
      "type S string\n"
      "data a : N restrict 0 <= value <= 10\n"
      "data b : N restrict 10 > value\n"
      "data c : N restrict value > -3 restrict value < 7\n"
      "data d : S restrict length > 1 restrict length < 9\n"
      "data e : N init -4\n");
  auto elems = spec.all<DataElement>();
  auto a = std::get<NumericRange>(elems[0]->restriction);
  CHECK(std::get<std::int64_t>(a.lower->value) == 0);
  CHECK(std::get<std::int64_t>(a.upper->value) == 10);
  auto b = std::get<NumericRange>(elems[1]->restriction);
  CHECK_FALSE(b.lower.has_value());
  CHECK_FALSE(b.upper->inclusive);
  auto c = std::get<NumericRange>(elems[2]->restriction);
  CHECK(std::get<std::int64_t>(c.lower->value) == -3);
  auto d = std::get<StringLength>(elems[3]->restriction);
  CHECK(d.min == 2);
  CHECK(d.max == 8);
  CHECK(elems[4]->init.status == Status::Known);
  CHECK(std::get<std::int64_t>(*elems[4]->init.value) == -4);
}

TEST_CASE("duplicate or mixed bounds are syntax errors") {
  CHECK_FALSE(parse_spec("type N int\ndata a : N restrict value > 1 restrict value >= 2").ok());
  CHECK_FALSE(parse_spec("type N int\ndata a : N restrict value > 1 restrict length <= 2").ok());
}

TEST_CASE("$state is reserved") {
  CHECK_FALSE(parse_spec("type S string\ndata $state : S").ok());
  CHECK(parse_spec("states { A }\ntype S string\ndata $other : S").ok());
}

TEST_CASE("strings, escapes, and comments") {
  auto spec = parse_or_throw(
      "type S string  # trailing comment\n"
      "data s : S init \"a \\\"b\\\" \\\\ c\"\n");
  CHECK(std::get<std::string>(*spec.all<DataElement>()[0]->init.value) == "a \"b\" \\ c");
  CHECK_FALSE(parse_spec("type S string\ndata s : S init \"oops\n\"").ok());
  CHECK_FALSE(parse_spec("type S string\ndata s : S init \"bad \\n escape\"").ok());
}

TEST_CASE("expressions keep precedence and associativity") {
  auto spec = parse_or_throw(
      "type N int\ndata a : N\ndata b : N\ndata c : N\n"
      "func F {\n class category=x group=y level=z states=[]\n"
      " param a out\n param b in\n param c in\n"
      " effect e { a := b - (c - 1) * 2 + -b / len(\"xy\") }\n}\n");
  const auto& s = spec.all<FunctionSpec>()[0]->effects[0].body[0];
  CHECK(format_statement(s) == "a := b - (c - 1) * 2 + -b / len(\"xy\")");
  CHECK(format_expr(parse_or_throw("type N int\ndata a : N\nfunc F {\n class category=x group=y "
                                   "level=z states=[]\n effect e { a := (1 + 2) + (3 + 4) }\n}\n")
                        .all<FunctionSpec>()[0]
                        ->effects[0]
                        .body[0]
                        .lhs) == "1 + 2 + (3 + 4)");
}

TEST_CASE("format_spec canonical forms") {
  Specification s;
  s.declarations.push_back(DataType{.id = "N", .base = BaseKind::Int});
  CHECK(format_spec(s) == "type N int\n");
  CHECK(format_real(1.0) == "1.0");
  CHECK(format_real(2.5) == "2.5");
  CHECK(format_real(1e300).find(".0e") != std::string::npos);
  CHECK(format_restriction(NumericRange{Bound{0.0, true}, std::nullopt}) == "value >= 0.0");
  CHECK(format_restriction(Unrestricted{}).empty());
}

TEST_CASE("round trip parse-format-parse over the fixture corpus") {
  for (const char* name : {"mini_gks.svsp", "syntax_tour.svsp"}) {
    CAPTURE(name);
    const auto first = parse_or_throw(svsp::testing::read_fixture(name));
    const std::string text = format_spec(first);
    const auto second = parse_or_throw(text);
    CHECK(first == second);
    CHECK(format_spec(second) == text);
  }
}

TEST_CASE("equality ignores locations but not content") {
  auto a = parse_or_throw("type N int\ndata x : N");
  auto b = parse_or_throw("\n\n  type N int\n\ndata   x : N");
  auto c = parse_or_throw("type N int\ndata y : N");
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("parse_literal") {
  CHECK(parse_literal("-2.5") == Value{-2.5});
  CHECK(parse_literal("7") == Value{std::int64_t{7}});
  CHECK(parse_literal("\"x y\"") == Value{std::string("x y")});
  CHECK_FALSE(parse_literal("abc").has_value());
  CHECK_FALSE(parse_literal("1 2").has_value());
}

TEST_CASE("parser survives random byte mutations") {
  const std::string base = svsp::testing::read_fixture("mini_gks.svsp");
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 300; ++i) {
    std::string text = base;
    std::uniform_int_distribution<std::size_t> where(0, text.size() - 1);
    const int edits = 1 + i % 8;
    for (int k = 0; k < edits; ++k) text[where(rng)] = static_cast<char>(byte(rng));
    auto out = parse_spec(text);
    if (!out.ok()) {
      CHECK_FALSE(out.errors.empty());
      for (const auto& d : out.errors) CHECK(d.code == "E000");
    }
  }
  std::string deep(5000, '(');
  auto out = parse_spec("type N int\ndata a : N\nfunc F {\n class category=x group=y level=z "
                        "states=[]\n param a out\n effect e { a := " + deep + "1 }\n}\n");
  CHECK_FALSE(out.ok());
}
