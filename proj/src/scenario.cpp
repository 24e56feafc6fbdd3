#include "svsp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svsp/checker.hpp"
#include "svsp/dsl.hpp"
#include "svsp/lexer.hpp"
#include "svsp/restriction.hpp"

namespace svsp {

void Store::add(std::string id, StoreEntry entry) {
  slots_.emplace(id, entries_.size());
  entries_.emplace_back(std::move(id), std::move(entry));
}

const StoreEntry* Store::find(std::string_view id) const {
  auto it = slots_.find(std::string(id));
  return it == slots_.end() ? nullptr : &entries_[it->second].second;
}

StoreEntry* Store::find(std::string_view id) {
  auto it = slots_.find(std::string(id));
  return it == slots_.end() ? nullptr : &entries_[it->second].second;
}

Store initial_store(const SpecIndex& index) {
  Store store;
  for (const DataElement* e : index.elements()) store.add(e->id, StoreEntry{e->init.status, e->init.value});
  return store;
}

namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

struct Rejection {
  std::string code;
  std::string detail;
  Loc loc;
};

[[noreturn]] void reject(std::string_view code, std::string detail, Loc loc = {}) {
  throw Rejection{std::string(code), std::move(detail), loc};
}

/// Result of evaluating an expression: a value when every operand is Known,
/// otherwise a symbolic Defined result.
struct Eval {
  std::optional<Value> value;
};

bool both_int(const Value& a, const Value& b) {
  return std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b);
}

double as_real(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

/// Three-way comparison of two values of compatible kinds.
std::optional<int> compare_values(const Value& a, const Value& b) {
  if (both_int(a, b)) {
    const auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  const bool a_str = std::holds_alternative<std::string>(a);
  const bool b_str = std::holds_alternative<std::string>(b);
  if (a_str != b_str) return std::nullopt;
  if (a_str) {
    const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  const double x = as_real(a), y = as_real(b);
  return x < y ? -1 : (x > y ? 1 : 0);
}

bool relop_holds(RelOp op, int cmp) {
  switch (op) {
    case RelOp::Eq: return cmp == 0;
    case RelOp::Ne: return cmp != 0;
    case RelOp::Lt: return cmp < 0;
    case RelOp::Le: return cmp <= 0;
    case RelOp::Gt: return cmp > 0;
    case RelOp::Ge: return cmp >= 0;
  }
  return false;
}

Value arithmetic(BinaryOp op, const Value& a, const Value& b) {
  if (op == BinaryOp::Concat) return std::get<std::string>(a) + std::get<std::string>(b);
  if (both_int(a, b)) {
    const auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
      case BinaryOp::Add: overflow = __builtin_add_overflow(x, y, &r); break;
      case BinaryOp::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
      case BinaryOp::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
      case BinaryOp::Div:
        if (y == 0) reject("R107", "integer division by zero");
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) overflow = true;
        else r = x / y;
        break;
      case BinaryOp::Concat: break;
    }
    if (overflow) reject("R107", "integer overflow");
    return r;
  }
  const double x = as_real(a), y = as_real(b);
  double r = 0;
  switch (op) {
    case BinaryOp::Add: r = x + y; break;
    case BinaryOp::Sub: r = x - y; break;
    case BinaryOp::Mul: r = x * y; break;
    case BinaryOp::Div:
      if (y == 0.0) reject("R107", "real division by zero");
      r = x / y;
      break;
    case BinaryOp::Concat: break;
  }
  if (!std::isfinite(r)) reject("R107", "real result is not finite");
  return r;
}

class CallRunner {
 public:
  CallRunner(const SpecIndex& index, Store shadow, TraceRecord& rec)
      : index_(index), shadow_(std::move(shadow)), rec_(rec) {}

  Store run(const Binding& bindings) {
    const FunctionSpec* fn = index_.function(rec_.function);
    if (fn == nullptr) reject("R101", quoted(rec_.function));
    fn_ = fn;
    state_gate();
    bind(bindings);
    entry_pres();
    for (const auto& effect : fn_->effects) execute(effect);
    return std::move(shadow_);
  }

 private:
  void state_gate() {
    if (!index_.has_states()) return;
    const StoreEntry* st = shadow_.find(kStateElement);
    const std::string* current = nullptr;
    if (st != nullptr && st->value) current = std::get_if<std::string>(&*st->value);
    if (current != nullptr) rec_.state_before = *current;
    const auto& allowed = fn_->classification.states;
    if (current == nullptr || std::find(allowed.begin(), allowed.end(), *current) == allowed.end()) {
      std::string list;
      for (const auto& s : allowed) list += (list.empty() ? "" : ", ") + s;
      reject("R102", fn_->id + " requires $state in [" + list + "], current is " +
                         (current != nullptr ? quoted(*current) : std::string("not known")));
    }
  }

  static bool bindable(const ParamRef& p) { return !p.implicit && p.direction != Direction::Out; }

  void bind(const Binding& bindings) {
    for (const auto& [name, _] : bindings) {
      const ParamRef* p = fn_->find_param(name);
      if (p == nullptr || !bindable(*p))
        reject("R105", quoted(name) + " is not an explicit in/inout parameter of " + fn_->id);
    }
    for (const auto& p : fn_->params) {
      if (!bindable(p)) continue;
      auto it = bindings.find(p.element);
      if (it == bindings.end()) reject("R105", quoted(p.element) + " is not bound");
      bind_one(p, it->second);
    }
  }

  void bind_one(const ParamRef& p, const BindingValue& b) {
    const ElementKind kind = *index_.element_kind(p.element);
    if (!b.value) {
      set(p.element, Status::Defined, std::nullopt, rec_.binding_deltas);
      return;
    }
    Value v = *b.value;
    const ElementKind vk = kind_of(v);
    if (kind == ElementKind::Real && vk == ElementKind::Int) {
      v = static_cast<double>(std::get<std::int64_t>(v));
    } else if (kind != vk) {
      reject("R106", quoted(p.element) + " is " + std::string(to_string(kind)) + ", bound to " +
                         std::string(to_string(vk)) + " " + format_value(v));
    }
    const DataElement* e = index_.element(p.element);
    if (!restriction_admits(e->restriction, v).holds())
      reject("R103", quoted(p.element) + " = " + format_value(v) + " is outside " +
                         quoted(format_restriction(e->restriction)));
    for (const auto& effect : fn_->effects)
      for (const auto& pre : effect.pre)
        if (pre.param == p.element && pre.restriction && !restriction_admits(*pre.restriction, v).holds())
          reject("R103", quoted(p.element) + " = " + format_value(v) + " is outside " +
                             quoted(format_restriction(*pre.restriction)) + " required by effect " + effect.id,
                 pre.loc);
    set(p.element, Status::Known, std::move(v), rec_.binding_deltas);
  }

  void check_pre(const Effect& effect, const PreCondition& pre) {
    const StoreEntry* entry = shadow_.find(pre.param);
    if (!status_at_least(entry->status, pre.required))
      reject("R104", quoted(pre.param) + " is " + std::string(to_string(entry->status)) + ", effect " +
                         effect.id + " requires " + std::string(to_string(pre.required)),
             pre.loc);
    if (pre.restriction && entry->value && !restriction_admits(*pre.restriction, *entry->value).holds())
      reject("R103", quoted(pre.param) + " = " + format_value(*entry->value) + " is outside " +
                         quoted(format_restriction(*pre.restriction)) + " required by effect " + effect.id,
             pre.loc);
  }

  void entry_pres() {
    for (const auto& p : fn_->params) {
      for (const auto& effect : fn_->effects) {
        if (!effect.mentions(p.element)) continue;
        for (const auto& pre : effect.pre)
          if (pre.param == p.element) check_pre(effect, pre);
        break;
      }
    }
  }

  void execute(const Effect& effect) {
    EffectLog log;
    log.id = effect.id;
    log.is_abstract = effect.is_abstract;
    for (const auto& pre : effect.pre) check_pre(effect, pre);
    if (effect.is_abstract) log.statements.emplace_back("abstract");
    for (const auto& s : effect.body) {
      log.statements.push_back(format_statement(s));
      if (s.kind == Statement::Kind::Assign) {
        assign(s, log);
      } else {
        require(s);
      }
    }
    for (const auto& post : effect.post) {
      const StoreEntry* entry = shadow_.find(post.param);
      if (post.resulting == Status::Known) {
        // Known needs a value; without one the strongest honest status is Defined.
        if (entry->value) continue;
        set(post.param, Status::Defined, std::nullopt, log.deltas);
      } else {
        set(post.param, post.resulting, std::nullopt, log.deltas);
      }
    }
    rec_.effects.push_back(std::move(log));
  }

  void assign(const Statement& s, EffectLog& log) {
    Eval r = eval(s.lhs, s.loc);
    if (!r.value) {
      set(s.target, Status::Defined, std::nullopt, log.deltas);
      return;
    }
    Value v = std::move(*r.value);
    if (index_.element_kind(s.target) == ElementKind::Real && std::holds_alternative<std::int64_t>(v))
      v = static_cast<double>(std::get<std::int64_t>(v));
    const DataElement* e = index_.element(s.target);
    if (!restriction_admits(e->restriction, v).holds())
      reject("R103", quoted(s.target) + " := " + format_value(v) + " is outside " +
                         quoted(format_restriction(e->restriction)),
             s.loc);
    set(s.target, Status::Known, std::move(v), log.deltas);
  }

  void require(const Statement& s) {
    Eval a = eval(s.lhs, s.loc);
    Eval b = eval(s.rhs, s.loc);
    if (!a.value || !b.value) {
      rec_.diagnostics.push_back(
          Diagnostic::make("W201", fn_->id, "require " + format_expr(s.lhs) + " " +
                                                std::string(to_string(s.relop)) + " " + format_expr(s.rhs) +
                                                " reads a defined but unknown value",
                           s.loc));
      return;
    }
    const auto cmp = compare_values(*a.value, *b.value);
    if (!cmp || !relop_holds(s.relop, *cmp))
      reject("R108", format_statement(s) + " with " + format_expr(s.lhs) + " = " + format_value(*a.value) +
                         ", " + format_expr(s.rhs) + " = " + format_value(*b.value),
             s.loc);
  }

  Eval eval(const Expr& e, Loc at) {
    switch (e.kind) {
      case Expr::Kind::Literal: return {e.literal};
      case Expr::Kind::Ref: {
        const StoreEntry* entry = shadow_.find(e.name);
        if (!status_at_least(entry->status, Status::Defined))
          reject("R104", quoted(e.name) + " is read while " + std::string(to_string(entry->status)), at);
        return {entry->value};
      }
      case Expr::Kind::Neg: {
        Eval x = eval(e.operands[0], at);
        if (!x.value) return x;
        if (const auto* i = std::get_if<std::int64_t>(&*x.value)) {
          if (*i == std::numeric_limits<std::int64_t>::min()) reject("R107", "integer overflow", at);
          return {Value{-*i}};
        }
        return {Value{-std::get<double>(*x.value)}};
      }
      case Expr::Kind::Len: {
        Eval x = eval(e.operands[0], at);
        if (!x.value) return x;
        return {Value{utf8_length(std::get<std::string>(*x.value))}};
      }
      case Expr::Kind::Binary: {
        Eval a = eval(e.operands[0], at);
        Eval b = eval(e.operands[1], at);
        if (!a.value || !b.value) return {};
        try {
          return {arithmetic(e.op, *a.value, *b.value)};
        } catch (Rejection& r) {
          r.loc = at;
          throw;
        }
      }
    }
    return {};
  }

  void set(const std::string& id, Status status, std::optional<Value> value, std::vector<Delta>& deltas) {
    StoreEntry* entry = shadow_.find(id);
    StoreEntry next{status, std::move(value)};
    if (*entry == next) return;
    *entry = next;
    deltas.push_back(Delta{id, next.status, next.value});
  }

  const SpecIndex& index_;
  Store shadow_;
  TraceRecord& rec_;
  const FunctionSpec* fn_ = nullptr;
};

}  // namespace

Session::Session(std::shared_ptr<const Specification> spec) : spec_(std::move(spec)) {
  const CheckReport report = check_spec(*spec_);
  if (!report.consistent)
    throw ScenarioError("InconsistentSpec",
                        "the specification has " + std::to_string(report.error_count()) +
                            " error(s); scenarios need a consistent specification",
                        report.diagnostics);
  index_ = std::make_unique<SpecIndex>(*spec_);
  store_ = initial_store(*index_);
}

Session::Session(Specification spec) : Session(std::make_shared<const Specification>(std::move(spec))) {}

void Session::reset() {
  store_ = initial_store(*index_);
  trace_.clear();
}

TraceRecord Session::call(std::string_view function_id, const Binding& bindings) {
  TraceRecord rec;
  rec.seq = static_cast<std::int64_t>(trace_.size()) + 1;
  rec.function = std::string(function_id);
  rec.bindings = bindings;
  try {
    Store next = CallRunner(*index_, store_, rec).run(bindings);
    store_ = std::move(next);
    rec.outcome = Outcome::Ok;
  } catch (const Rejection& r) {
    rec.outcome = Outcome::Rejected;
    rec.code = r.code;
    Diagnostic d = Diagnostic::make(r.code, rec.function, r.detail, r.loc);
    rec.message = d.message;
    rec.binding_deltas.clear();
    rec.effects.clear();
    rec.diagnostics = {std::move(d)};
  }
  trace_.push_back(rec);
  return rec;
}

// --- scripts ---------------------------------------------------------------

std::optional<BindingValue> parse_binding_value(std::string_view text) {
  if (text == "defined") return BindingValue::defined();
  auto v = parse_literal(text);
  if (!v) return std::nullopt;
  return BindingValue{std::move(*v)};
}

namespace {

/// Splits on whitespace outside double quotes; stops at `#` outside quotes.
/// Returns nullopt on an unterminated string.
std::optional<std::vector<std::string>> tokenize_line(std::string_view line, std::string& kept) {
  std::vector<std::string> tokens;
  std::string current;
  bool in_string = false, have = false;
  std::size_t end = line.size();
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      current += c;
      if (c == '\\' && i + 1 < line.size()) {
        current += line[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '#') {
      end = i;
      break;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      if (have) tokens.push_back(std::move(current));
      current.clear();
      have = false;
      continue;
    }
    if (c == '"') in_string = true;
    current += c;
    have = true;
  }
  if (in_string) return std::nullopt;
  if (have) tokens.push_back(std::move(current));
  std::string_view k = line.substr(0, end);
  while (!k.empty() && (k.back() == ' ' || k.back() == '\t' || k.back() == '\r')) k.remove_suffix(1);
  while (!k.empty() && (k.front() == ' ' || k.front() == '\t')) k.remove_prefix(1);
  kept = std::string(k);
  return tokens;
}

std::optional<RelOp> parse_relop(std::string_view t) {
  if (t == "==") return RelOp::Eq;
  if (t == "!=") return RelOp::Ne;
  if (t == "<") return RelOp::Lt;
  if (t == "<=") return RelOp::Le;
  if (t == ">") return RelOp::Gt;
  if (t == ">=") return RelOp::Ge;
  return std::nullopt;
}

}  // namespace

ScriptParse parse_script(std::string_view text) {
  ScriptParse out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto error = [&](const std::string& detail) {
      out.errors.push_back(Diagnostic::make("E000", "script", detail, Loc{line_no, 1}));
    };
    std::string kept;
    auto tokens = tokenize_line(line, kept);
    if (!tokens) {
      error("unterminated string");
      continue;
    }
    if (tokens->empty()) continue;
    const auto& t = *tokens;

    ScriptDirective d;
    d.line = line_no;
    d.text = kept;
    std::size_t call_at = 0;
    if (t[0] == "call") {
      d.kind = ScriptDirective::Kind::Call;
      call_at = 0;
    } else if (t[0] == "expect-error") {
      d.kind = ScriptDirective::Kind::ExpectError;
      if (t.size() < 3 || t[2] != "call") {
        error("expected 'expect-error CODE call FUNC ...'");
        continue;
      }
      const DiagnosticInfo* info = find_diagnostic(t[1]);
      if (info == nullptr || !t[1].starts_with("R")) {
        error("unknown rejection code " + quoted(t[1]));
        continue;
      }
      d.expected_code = t[1];
      call_at = 2;
    } else if (t[0] == "assert") {
      d.kind = ScriptDirective::Kind::Assert;
      std::optional<RelOp> op;
      std::optional<Value> lit;
      if (t.size() != 4 || !(op = parse_relop(t[2])) || !(lit = parse_literal(t[3]))) {
        error("expected 'assert ELEM relop literal'");
        continue;
      }
      d.element = t[1];
      d.relop = *op;
      d.literal = *lit;
      out.directives.push_back(std::move(d));
      continue;
    } else if (t[0] == "assert-status") {
      std::optional<Status> st;
      if (t.size() != 3 || !(st = parse_status(t[2]))) {
        error("expected 'assert-status ELEM status'");
        continue;
      }
      d.kind = ScriptDirective::Kind::AssertStatus;
      d.element = t[1];
      d.status = *st;
      out.directives.push_back(std::move(d));
      continue;
    } else {
      error("unknown directive " + quoted(t[0]));
      continue;
    }

    if (t.size() < call_at + 2 || !is_identifier(t[call_at + 1])) {
      error("expected a function name after 'call'");
      continue;
    }
    d.function = t[call_at + 1];
    bool ok = true;
    for (std::size_t i = call_at + 2; i < t.size() && ok; ++i) {
      const auto eq = t[i].find('=');
      if (eq == std::string::npos || !is_identifier(t[i].substr(0, eq))) {
        error("expected name=value, got " + quoted(t[i]));
        ok = false;
        break;
      }
      auto value = parse_binding_value(std::string_view(t[i]).substr(eq + 1));
      if (!value) {
        error("bad value in " + quoted(t[i]));
        ok = false;
        break;
      }
      if (!d.bindings.emplace(t[i].substr(0, eq), std::move(*value)).second) {
        error("binding " + quoted(t[i].substr(0, eq)) + " given twice");
        ok = false;
      }
    }
    if (ok) out.directives.push_back(std::move(d));
  }
  return out;
}

ScriptRun run_script(Session& session, std::string_view script) {
  ScriptRun run;
  ScriptParse parsed = parse_script(script);
  if (!parsed.errors.empty()) {
    run.errors = std::move(parsed.errors);
    return run;
  }
  for (const auto& d : parsed.directives) {
    DirectiveResult r{d.line, d.text, false, {}};
    switch (d.kind) {
      case ScriptDirective::Kind::Call: {
        const TraceRecord rec = session.call(d.function, d.bindings);
        r.passed = rec.outcome == Outcome::Ok;
        if (!r.passed) r.detail = rec.code + " " + rec.message;
        break;
      }
      case ScriptDirective::Kind::ExpectError: {
        const TraceRecord rec = session.call(d.function, d.bindings);
        r.passed = rec.outcome == Outcome::Rejected && rec.code == d.expected_code;
        if (!r.passed)
          r.detail = "expected " + d.expected_code + ", got " +
                     (rec.outcome == Outcome::Ok ? std::string("ok") : rec.code + " " + rec.message);
        break;
      }
      case ScriptDirective::Kind::Assert: {
        const StoreEntry* e = session.store().find(d.element);
        if (e == nullptr) {
          r.detail = "no data element " + quoted(d.element);
        } else if (!e->value) {
          r.detail = d.element + " is " + std::string(to_string(e->status)) + " with no value";
        } else {
          const auto cmp = compare_values(*e->value, d.literal);
          r.passed = cmp && relop_holds(d.relop, *cmp);
          if (!r.passed) r.detail = d.element + " = " + format_value(*e->value);
        }
        break;
      }
      case ScriptDirective::Kind::AssertStatus: {
        const StoreEntry* e = session.store().find(d.element);
        if (e == nullptr) {
          r.detail = "no data element " + quoted(d.element);
        } else {
          r.passed = e->status == d.status;
          if (!r.passed) r.detail = d.element + " is " + std::string(to_string(e->status));
        }
        break;
      }
    }
    (r.passed ? run.passed : run.failed)++;
    run.results.push_back(std::move(r));
  }
  return run;
}

}  // namespace svsp
