#include "svsp/model.hpp"

#include <array>

namespace svsp {

bool status_at_least(Status actual, Status required) {
  return static_cast<int>(actual) >= static_cast<int>(required);
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Unallocated: return "unallocated";
    case Status::Allocated: return "allocated";
    case Status::Defined: return "defined";
    case Status::Known: return "known";
  }
  return "unallocated";
}

std::optional<Status> parse_status(std::string_view text) {
  for (auto s : {Status::Unallocated, Status::Allocated, Status::Defined, Status::Known})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

std::string_view to_string(BaseKind k) {
  switch (k) {
    case BaseKind::Int: return "int";
    case BaseKind::Real: return "real";
    case BaseKind::String: return "string";
  }
  return "int";
}

std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Int: return "int";
    case ElementKind::Real: return "real";
    case ElementKind::String: return "string";
    case ElementKind::Record: return "record";
  }
  return "int";
}

std::optional<BaseKind> parse_base_kind(std::string_view text) {
  for (auto k : {BaseKind::Int, BaseKind::Real, BaseKind::String})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

ElementKind element_kind(BaseKind k) {
  switch (k) {
    case BaseKind::Int: return ElementKind::Int;
    case BaseKind::Real: return ElementKind::Real;
    case BaseKind::String: return ElementKind::String;
  }
  return ElementKind::Int;
}

ElementKind kind_of(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return ElementKind::Int;
  if (std::holds_alternative<double>(v)) return ElementKind::Real;
  return ElementKind::String;
}

bool is_numeric(ElementKind k) { return k == ElementKind::Int || k == ElementKind::Real; }

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::In: return "in";
    case Direction::Out: return "out";
    case Direction::InOut: return "inout";
  }
  return "in";
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Concat: return "++";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "+";
}

std::string_view to_string(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "==";
    case RelOp::Ne: return "!=";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "==";
}

Expr Expr::make_literal(Value v, Loc loc) {
  Expr e;
  e.kind = Kind::Literal;
  e.literal = std::move(v);
  e.loc = loc;
  return e;
}

Expr Expr::make_ref(std::string name, Loc loc) {
  Expr e;
  e.kind = Kind::Ref;
  e.name = std::move(name);
  e.loc = loc;
  return e;
}

Expr Expr::make_neg(Expr operand, Loc loc) {
  Expr e;
  e.kind = Kind::Neg;
  e.operands.push_back(std::move(operand));
  e.loc = loc;
  return e;
}

Expr Expr::make_len(Expr operand, Loc loc) {
  Expr e;
  e.kind = Kind::Len;
  e.operands.push_back(std::move(operand));
  e.loc = loc;
  return e;
}

Expr Expr::make_binary(BinaryOp op, Expr lhs, Expr rhs, Loc loc) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  e.loc = loc;
  return e;
}

void collect_refs(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::Ref) {
    out.push_back(e.name);
    return;
  }
  for (const auto& child : e.operands) collect_refs(child, out);
}

bool Effect::mentions(std::string_view element) const {
  for (const auto& p : pre)
    if (p.param == element) return true;
  for (const auto& p : post)
    if (p.param == element) return true;
  std::vector<std::string> refs;
  for (const auto& s : body) {
    if (s.kind == Statement::Kind::Assign && s.target == element) return true;
    refs.clear();
    collect_refs(s.lhs, refs);
    if (s.kind == Statement::Kind::Require) collect_refs(s.rhs, refs);
    for (const auto& r : refs)
      if (r == element) return true;
  }
  return false;
}

const ParamRef* FunctionSpec::find_param(std::string_view element) const {
  for (const auto& p : params)
    if (p.element == element) return &p;
  return nullptr;
}

DeclKind decl_kind(const Declaration& d) {
  return static_cast<DeclKind>(d.index());
}

std::string_view to_string(DeclKind k) {
  static constexpr std::array<std::string_view, 4> names{"type", "states", "element", "function"};
  return names[static_cast<std::size_t>(k)];
}

const std::string& decl_id(const Declaration& d) {
  static const std::string states_id = "states";
  return std::visit(
      [](const auto& x) -> const std::string& {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StateDecl>) {
          return states_id;
        } else {
          return x.id;
        }
      },
      d);
}

Loc decl_loc(const Declaration& d) {
  return std::visit([](const auto& x) { return x.loc; }, d);
}

const StateDecl* Specification::state_decl() const {
  for (const auto& d : declarations)
    if (const auto* s = std::get_if<StateDecl>(&d)) return s;
  return nullptr;
}

}  // namespace svsp
