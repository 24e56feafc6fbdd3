// Core domain model for software-package specifications.
//
// A Specification is an ordered list of declarations (data types, an optional
// state set, data elements, and functions).  All model values are plain value
// types; once built they are not mutated by any analysis in this library.
//
// Equality on every model type is structural and ignores source locations, so
// that a parsed specification compares equal to one parsed from its canonical
// re-formatting.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace svsp {

/// Position of a construct in the source text.  Never participates in
/// equality: two entities at different positions compare equal.
struct Loc {
  int line = 0;
  int col = 0;

  [[nodiscard]] bool valid() const { return line > 0; }
  friend bool operator==(const Loc&, const Loc&) { return true; }
};

/// How much is established about a data element.  Totally ordered:
/// Unallocated < Allocated < Defined < Known.
enum class Status : std::uint8_t { Unallocated, Allocated, Defined, Known };

[[nodiscard]] bool status_at_least(Status actual, Status required);
[[nodiscard]] std::string_view to_string(Status s);
[[nodiscard]] std::optional<Status> parse_status(std::string_view text);

/// Literal value of an Int, Real, or String data element.
using Value = std::variant<std::int64_t, double, std::string>;

enum class BaseKind : std::uint8_t { Int, Real, String };

/// Kind of a data element once its type is resolved.
enum class ElementKind : std::uint8_t { Int, Real, String, Record };

[[nodiscard]] std::string_view to_string(BaseKind k);
[[nodiscard]] std::string_view to_string(ElementKind k);
[[nodiscard]] std::optional<BaseKind> parse_base_kind(std::string_view text);
[[nodiscard]] ElementKind element_kind(BaseKind k);
[[nodiscard]] ElementKind kind_of(const Value& v);
[[nodiscard]] bool is_numeric(ElementKind k);

struct RecordField {
  std::string name;
  BaseKind base = BaseKind::Int;
  Loc loc;

  friend bool operator==(const RecordField&, const RecordField&) = default;
};

struct DataType {
  std::string id;
  bool is_record = false;
  BaseKind base = BaseKind::Int;  // meaningful only when !is_record
  std::vector<RecordField> fields;
  Loc loc;

  [[nodiscard]] ElementKind kind() const {
    return is_record ? ElementKind::Record : element_kind(base);
  }
  friend bool operator==(const DataType&, const DataType&) = default;
};

// --- restrictions ----------------------------------------------------------

struct Bound {
  Value value;  // std::int64_t or double
  bool inclusive = true;

  friend bool operator==(const Bound&, const Bound&) = default;
};

struct NumericRange {
  std::optional<Bound> lower;
  std::optional<Bound> upper;

  friend bool operator==(const NumericRange&, const NumericRange&) = default;
};

struct StringLength {
  std::int64_t min = 0;
  std::optional<std::int64_t> max;

  friend bool operator==(const StringLength&, const StringLength&) = default;
};

struct Unrestricted {
  friend bool operator==(const Unrestricted&, const Unrestricted&) = default;
};

using Restriction = std::variant<Unrestricted, NumericRange, StringLength>;

[[nodiscard]] inline bool is_unrestricted(const Restriction& r) {
  return std::holds_alternative<Unrestricted>(r);
}

// --- data elements ---------------------------------------------------------

struct Init {
  Status status = Status::Unallocated;
  std::optional<Value> value;  // present iff status == Known

  friend bool operator==(const Init&, const Init&) = default;
};

struct DataElement {
  std::string id;
  std::string type_ref;
  Restriction restriction;
  Init init;
  Loc loc;
  Loc restriction_loc;
  Loc init_loc;

  friend bool operator==(const DataElement&, const DataElement&) = default;
};

struct StateDecl {
  std::vector<std::string> states;
  Loc loc;

  friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

// --- functions -------------------------------------------------------------

struct Classification {
  std::string category;
  std::string group;
  std::string level;
  std::vector<std::string> states;  // set semantics, declaration order kept
  Loc loc;

  friend bool operator==(const Classification&, const Classification&) = default;
};

enum class Direction : std::uint8_t { In, Out, InOut };

[[nodiscard]] std::string_view to_string(Direction d);

struct ParamRef {
  std::string element;
  Direction direction = Direction::In;
  bool implicit = false;
  Loc loc;

  friend bool operator==(const ParamRef&, const ParamRef&) = default;
};

enum class BinaryOp : std::uint8_t { Add, Sub, Concat, Mul, Div };
enum class RelOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

[[nodiscard]] std::string_view to_string(BinaryOp op);
[[nodiscard]] std::string_view to_string(RelOp op);

struct Expr {
  enum class Kind : std::uint8_t { Literal, Ref, Neg, Len, Binary };

  Kind kind = Kind::Literal;
  Value literal;             // Literal
  std::string name;          // Ref
  BinaryOp op = BinaryOp::Add;  // Binary
  std::vector<Expr> operands;   // Neg/Len: 1, Binary: 2
  Loc loc;

  static Expr make_literal(Value v, Loc loc = {});
  static Expr make_ref(std::string name, Loc loc = {});
  static Expr make_neg(Expr operand, Loc loc = {});
  static Expr make_len(Expr operand, Loc loc = {});
  static Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, Loc loc = {});

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Collects every element name read by the expression, in evaluation order.
void collect_refs(const Expr& e, std::vector<std::string>& out);

struct Statement {
  enum class Kind : std::uint8_t { Assign, Require };

  Kind kind = Kind::Assign;
  std::string target;  // Assign
  Expr lhs;            // Assign: the value; Require: left operand
  RelOp relop = RelOp::Eq;
  Expr rhs;            // Require only
  Loc loc;

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct PreCondition {
  std::string param;
  Status required = Status::Unallocated;
  std::optional<Restriction> restriction;
  Loc loc;

  friend bool operator==(const PreCondition&, const PreCondition&) = default;
};

struct PostCondition {
  std::string param;
  Status resulting = Status::Unallocated;
  Loc loc;

  friend bool operator==(const PostCondition&, const PostCondition&) = default;
};

struct Effect {
  std::string id;
  std::vector<PreCondition> pre;
  std::vector<PostCondition> post;
  bool is_abstract = false;
  std::vector<Statement> body;
  Loc loc;

  /// True if the effect names `element` in a pre, post, or statement.
  [[nodiscard]] bool mentions(std::string_view element) const;

  friend bool operator==(const Effect&, const Effect&) = default;
};

struct FunctionSpec {
  std::string id;
  Classification classification;
  std::vector<ParamRef> params;
  std::vector<Effect> effects;
  Loc loc;

  [[nodiscard]] const ParamRef* find_param(std::string_view element) const;

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

// --- specification ---------------------------------------------------------

using Declaration = std::variant<DataType, StateDecl, DataElement, FunctionSpec>;

enum class DeclKind : std::uint8_t { Type, States, Element, Function };

[[nodiscard]] DeclKind decl_kind(const Declaration& d);
[[nodiscard]] std::string_view to_string(DeclKind k);
[[nodiscard]] const std::string& decl_id(const Declaration& d);
[[nodiscard]] Loc decl_loc(const Declaration& d);

/// Name of the distinguished element that tracks the operating state.
inline constexpr std::string_view kStateElement = "$state";

struct Specification {
  std::vector<Declaration> declarations;

  template <typename T>
  [[nodiscard]] std::vector<const T*> all() const {
    std::vector<const T*> out;
    for (const auto& d : declarations)
      if (const auto* p = std::get_if<T>(&d)) out.push_back(p);
    return out;
  }

  /// First state declaration, if any.
  [[nodiscard]] const StateDecl* state_decl() const;

  friend bool operator==(const Specification&, const Specification&) = default;
};

}  // namespace svsp
