#include <charconv>
#include <sstream>

#include "svsp/dsl.hpp"

namespace svsp {

std::string format_real(double d) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) {
    s += ".0";
  } else if (s.find('.') == std::string::npos) {
    s.insert(s.find('e'), ".0");
  }
  return s;
}

std::string format_value(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_real(*d);
  std::string out = "\"";
  for (char c : std::get<std::string>(v)) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string_view lower_op(const Bound& b, bool value_on_left) {
  if (value_on_left) return b.inclusive ? ">=" : ">";
  return b.inclusive ? "<=" : "<";
}

std::string_view upper_op(const Bound& b) { return b.inclusive ? "<=" : "<"; }

// Restrict clauses without the leading keyword.
std::vector<std::string> restriction_clauses(const Restriction& r) {
  std::vector<std::string> out;
  if (const auto* range = std::get_if<NumericRange>(&r)) {
    if (range->lower && range->upper) {
      out.push_back(format_value(range->lower->value) + " " +
                    std::string(lower_op(*range->lower, false)) + " value " +
                    std::string(upper_op(*range->upper)) + " " + format_value(range->upper->value));
    } else if (range->lower) {
      out.push_back("value " + std::string(lower_op(*range->lower, true)) + " " +
                    format_value(range->lower->value));
    } else if (range->upper) {
      out.push_back("value " + std::string(upper_op(*range->upper)) + " " +
                    format_value(range->upper->value));
    }
  } else if (const auto* len = std::get_if<StringLength>(&r)) {
    if (len->min > 0 || !len->max) out.push_back("length >= " + std::to_string(len->min));
    if (len->max) out.push_back("length <= " + std::to_string(*len->max));
  }
  return out;
}

std::string restrict_suffix(const Restriction& r) {
  std::string out;
  for (const auto& c : restriction_clauses(r)) out += " restrict " + c;
  return out;
}

int precedence(const Expr& e) {
  if (e.kind != Expr::Kind::Binary) return 3;
  return (e.op == BinaryOp::Mul || e.op == BinaryOp::Div) ? 2 : 1;
}

void write_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal: os << format_value(e.literal); return;
    case Expr::Kind::Ref: os << e.name; return;
    case Expr::Kind::Len:
      os << "len(";
      write_expr(os, e.operands[0]);
      os << ')';
      return;
    case Expr::Kind::Neg: {
      os << '-';
      const Expr& x = e.operands[0];
      const bool paren = x.kind == Expr::Kind::Binary ||
                         (x.kind == Expr::Kind::Literal && x.literal.index() != 2 &&
                          format_value(x.literal).starts_with("-"));
      if (paren) os << '(';
      write_expr(os, x);
      if (paren) os << ')';
      return;
    }
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      const Expr& l = e.operands[0];
      const Expr& r = e.operands[1];
      const bool lp = precedence(l) < p;
      const bool rp = precedence(r) <= p;
      if (lp) os << '(';
      write_expr(os, l);
      if (lp) os << ')';
      os << ' ' << to_string(e.op) << ' ';
      if (rp) os << '(';
      write_expr(os, r);
      if (rp) os << ')';
      return;
    }
  }
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

void write_type(std::ostream& os, const DataType& t) {
  os << "type " << t.id << ' ';
  if (!t.is_record) {
    os << to_string(t.base) << '\n';
    return;
  }
  os << "record { ";
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    if (i > 0) os << ", ";
    os << t.fields[i].name << ": " << to_string(t.fields[i].base);
  }
  os << " }\n";
}

void write_element(std::ostream& os, const DataElement& e) {
  os << "data " << e.id << " : " << e.type_ref << restrict_suffix(e.restriction);
  switch (e.init.status) {
    case Status::Unallocated: break;
    case Status::Allocated: os << " init allocated"; break;
    case Status::Defined: os << " init defined"; break;
    case Status::Known:
      if (e.init.value) os << " init " << format_value(*e.init.value);
      break;
  }
  os << '\n';
}

void write_function(std::ostream& os, const FunctionSpec& f) {
  const auto& c = f.classification;
  os << "func " << f.id << " {\n";
  os << "  class category=" << c.category << " group=" << c.group << " level=" << c.level
     << " states=[" << join(c.states, ", ") << "]\n";
  for (const auto& p : f.params) {
    os << "  param " << p.element << ' ' << to_string(p.direction);
    if (p.implicit) os << " implicit";
    os << '\n';
  }
  for (const auto& e : f.effects) {
    os << "  effect " << e.id << " {\n";
    for (const auto& pre : e.pre) {
      os << "    pre " << pre.param << ' ' << to_string(pre.required);
      if (pre.restriction) os << restrict_suffix(*pre.restriction);
      os << '\n';
    }
    for (const auto& post : e.post) os << "    post " << post.param << ' ' << to_string(post.resulting) << '\n';
    if (e.is_abstract) os << "    abstract\n";
    for (const auto& s : e.body) os << "    " << format_statement(s) << '\n';
    os << "  }\n";
  }
  os << "}\n";
}

}  // namespace

std::string format_restriction(const Restriction& r) { return join(restriction_clauses(r), ", "); }

std::string format_expr(const Expr& e) {
  std::ostringstream os;
  write_expr(os, e);
  return os.str();
}

std::string format_statement(const Statement& s) {
  if (s.kind == Statement::Kind::Assign) return s.target + " := " + format_expr(s.lhs);
  return "require " + format_expr(s.lhs) + " " + std::string(to_string(s.relop)) + " " +
         format_expr(s.rhs);
}

std::string format_declaration(const Declaration& decl) {
  std::ostringstream os;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DataType>) {
          write_type(os, d);
        } else if constexpr (std::is_same_v<T, StateDecl>) {
          os << "states { " << join(d.states, ", ") << " }\n";
        } else if constexpr (std::is_same_v<T, DataElement>) {
          write_element(os, d);
        } else {
          write_function(os, d);
        }
      },
      decl);
  return os.str();
}

std::string format_spec(const Specification& spec) {
  std::string out;
  const Declaration* prev = nullptr;
  for (const auto& d : spec.declarations) {
    if (prev != nullptr && (decl_kind(*prev) != decl_kind(d) ||
                            decl_kind(d) == DeclKind::Function)) {
      out += '\n';
    }
    out += format_declaration(d);
    prev = &d;
  }
  return out;
}

}  // namespace svsp
