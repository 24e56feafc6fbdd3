// Selective retrieval over functions, data elements, and data types.
//
// Query text is a conjunction of `&`-separated terms:
//
//   kind=function & name=SET_* & class.category=attribute
//   class.states~GKOP & refs=line_width & type=WidthScale & unused
//   select=id,class.category
//
// `~` is set membership, `=` is equality (glob for `name`: `*` and `?`).

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "svsp/model.hpp"

namespace svsp {

enum class QueryKind : std::uint8_t { Function, Element, Type };

[[nodiscard]] std::string_view to_string(QueryKind k);

struct Predicate {
  enum class Kind : std::uint8_t { NameGlob, ClassEquals, StateContains, References, UsesType, Unused };

  Kind kind = Kind::NameGlob;
  std::string field;  // ClassEquals: category, group, or level
  std::string value;
};

struct Query {
  QueryKind kind = QueryKind::Function;
  std::vector<Predicate> filters;
  std::vector<std::string> select{"id"};
};

/// Rejected query (InvalidQuery) or xref of an undeclared element
/// (UnknownElement).
class QueryError : public std::runtime_error {
 public:
  QueryError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Parses query text.  `default_kind` applies when the text has no `kind=`
/// term.  Validates predicate and projection applicability; throws
/// QueryError("InvalidQuery").
[[nodiscard]] Query parse_query(std::string_view text, QueryKind default_kind = QueryKind::Function);

/// Replaces the projection, validating it for the query's kind.
void set_select(Query& q, std::string_view comma_separated_fields);

[[nodiscard]] bool glob_match(std::string_view pattern, std::string_view text);

using Cell = std::variant<std::string, std::int64_t, std::vector<std::string>>;

[[nodiscard]] std::string cell_text(const Cell& c);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Rows of q.kind satisfying every filter, in declaration order.
[[nodiscard]] Table evaluate(const Specification& spec, const Query& q);

struct XrefFunction {
  std::string function;
  Direction direction = Direction::In;
  bool implicit = false;
};

struct XrefEffect {
  std::string function;
  std::string effect;
  bool reads = false;
  bool assigns = false;
  std::optional<Status> pre;
  std::optional<Status> post;
};

struct Xref {
  std::string element;
  std::string type;  // type identifier; empty for `$state`
  std::optional<ElementKind> kind;
  std::string restriction;  // canonical text, empty when unrestricted
  std::vector<XrefFunction> functions;
  std::vector<XrefEffect> effects;
};

/// Throws QueryError("UnknownElement").
[[nodiscard]] Xref xref(const Specification& spec, std::string_view element_id);

}  // namespace svsp
