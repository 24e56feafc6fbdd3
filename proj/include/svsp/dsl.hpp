// The `.svsp` specification language: parser and canonical formatter.
//
// parse_spec is purely syntactic; semantic problems are left to the checker.
// format_spec emits canonical text such that parsing it again yields a
// Specification equal to the original.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svsp/diagnostic.hpp"
#include "svsp/model.hpp"

namespace svsp {

struct ParseOutcome {
  std::optional<Specification> spec;  // set iff errors is empty
  std::vector<Diagnostic> errors;     // E000 only

  [[nodiscard]] bool ok() const { return spec.has_value(); }
};

[[nodiscard]] ParseOutcome parse_spec(std::string_view text);

[[nodiscard]] std::string format_spec(const Specification& spec);
[[nodiscard]] std::string format_declaration(const Declaration& decl);

/// Literal syntax: 42, -1.5, "a \"quoted\" word".
[[nodiscard]] std::string format_value(const Value& v);
/// Shortest round-tripping text that still contains a decimal point.
[[nodiscard]] std::string format_real(double d);
/// Display form without the `restrict` keyword, e.g. `value >= 0.0`;
/// empty for Unrestricted.
[[nodiscard]] std::string format_restriction(const Restriction& r);
[[nodiscard]] std::string format_expr(const Expr& e);
[[nodiscard]] std::string format_statement(const Statement& s);

/// Parses a single literal (optionally signed number, or quoted string).
[[nodiscard]] std::optional<Value> parse_literal(std::string_view text);

}  // namespace svsp
