#include <stdexcept>

#include "svsp/dsl.hpp"
#include "svsp/lexer.hpp"

namespace svsp {

namespace {

constexpr int kMaxExprDepth = 200;

struct SyntaxError : std::runtime_error {
  SyntaxError(Loc at, const std::string& msg) : std::runtime_error(msg), loc(at) {}
  Loc loc;
};

bool is_top_level_keyword(const Token& t) {
  return t.kind == Token::Kind::Ident &&
         (t.text == "type" || t.text == "states" || t.text == "data" || t.text == "func");
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End: return "end of input";
    case Token::Kind::String: return "string literal";
    case Token::Kind::Int:
    case Token::Kind::Real: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

// Accumulates restrict clauses into one Restriction.
class RestrictionBuilder {
 public:
  void lower(const Bound& b, Loc at) {
    value_clause(at);
    if (lower_) throw SyntaxError(at, "duplicate lower bound");
    lower_ = b;
  }
  void upper(const Bound& b, Loc at) {
    value_clause(at);
    if (upper_) throw SyntaxError(at, "duplicate upper bound");
    upper_ = b;
  }
  void min_length(std::int64_t n, Loc at) {
    length_clause(at);
    if (min_) throw SyntaxError(at, "duplicate minimum length");
    min_ = n;
  }
  void max_length(std::int64_t n, Loc at) {
    length_clause(at);
    if (max_) throw SyntaxError(at, "duplicate maximum length");
    max_ = n;
  }

  [[nodiscard]] bool empty() const { return !has_value_ && !has_length_; }

  [[nodiscard]] Restriction build() const {
    if (has_value_) return NumericRange{lower_, upper_};
    if (has_length_) return StringLength{min_.value_or(0), max_};
    return Unrestricted{};
  }

 private:
  void value_clause(Loc at) {
    if (has_length_) throw SyntaxError(at, "value bounds mixed with length bounds");
    has_value_ = true;
  }
  void length_clause(Loc at) {
    if (has_value_) throw SyntaxError(at, "length bounds mixed with value bounds");
    has_length_ = true;
  }

  bool has_value_ = false;
  bool has_length_ = false;
  std::optional<Bound> lower_;
  std::optional<Bound> upper_;
  std::optional<std::int64_t> min_;
  std::optional<std::int64_t> max_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Specification parse_all(std::vector<Diagnostic>& errors) {
    Specification spec;
    while (!at_end()) {
      decl_start_ = pos_;
      try {
        if (!is_top_level_keyword(cur())) {
          throw SyntaxError(cur().loc, "expected a declaration (type, states, data, func), found " +
                                           describe(cur()));
        }
        spec.declarations.push_back(parse_declaration());
      } catch (const SyntaxError& e) {
        errors.push_back(Diagnostic::make("E000", "", e.what(), e.loc));
        recover();
      }
    }
    return spec;
  }

  Declaration parse_single_declaration() { return parse_declaration(); }

  [[nodiscard]] bool at_end() const { return cur().kind == Token::Kind::End; }
  [[nodiscard]] const Token& cur() const { return toks_[pos_]; }

  // Literal with optional leading minus; used by restrictions, init, scripts.
  Value parse_signed_literal() {
    const Token& t = cur();
    if (t.is_punct("-")) {
      const Loc at = t.loc;
      next();
      const Token& n = cur();
      if (n.kind == Token::Kind::Int) {
        const auto v = std::get<std::int64_t>(n.value);
        next();
        return -v;
      }
      if (n.kind == Token::Kind::Real) {
        const double v = std::get<double>(n.value);
        next();
        return -v;
      }
      throw SyntaxError(at, "expected a number after '-'");
    }
    if (t.kind == Token::Kind::Int || t.kind == Token::Kind::Real ||
        t.kind == Token::Kind::String) {
      Value v = t.value;
      next();
      return v;
    }
    throw SyntaxError(t.loc, "expected a literal, found " + describe(t));
  }

 private:
  void next() {
    if (!at_end()) ++pos_;
  }

  // Skips to the next top-level keyword that starts a line.  A keyword that
  // interrupted the failed declaration is kept.
  void recover() {
    if (pos_ == decl_start_) next();
    while (!at_end() && !(is_top_level_keyword(cur()) && cur().line_start)) next();
  }

  const Token& expect_punct(std::string_view p) {
    if (!cur().is_punct(p))
      throw SyntaxError(cur().loc, "expected '" + std::string(p) + "', found " + describe(cur()));
    const Token& t = cur();
    next();
    return t;
  }

  const Token& expect_keyword(std::string_view kw) {
    if (!cur().is_ident(kw))
      throw SyntaxError(cur().loc, "expected '" + std::string(kw) + "', found " + describe(cur()));
    const Token& t = cur();
    next();
    return t;
  }

  bool accept_keyword(std::string_view kw) {
    if (cur().is_ident(kw)) {
      next();
      return true;
    }
    return false;
  }

  const Token& expect_ident(std::string_view what) {
    if (cur().kind != Token::Kind::Ident)
      throw SyntaxError(cur().loc, "expected " + std::string(what) + ", found " + describe(cur()));
    const Token& t = cur();
    next();
    return t;
  }

  // Identifier introduced by a declaration: `$state` is reserved.
  const Token& expect_decl_name(std::string_view what) {
    const Token& t = expect_ident(what);
    if (t.text == kStateElement)
      throw SyntaxError(t.loc, "'$state' is reserved and cannot be declared");
    return t;
  }

  Declaration parse_declaration() {
    const Token& kw = cur();
    if (kw.text == "type") return parse_type();
    if (kw.text == "states") return parse_states();
    if (kw.text == "data") return parse_data();
    return parse_func();
  }

  BaseKind parse_base_kind_token() {
    const Token& t = expect_ident("a base type (int, real, string)");
    auto k = svsp::parse_base_kind(t.text);
    if (!k) throw SyntaxError(t.loc, "expected int, real, or string, found '" + t.text + "'");
    return *k;
  }

  DataType parse_type() {
    DataType type;
    type.loc = cur().loc;
    next();
    type.id = expect_decl_name("a type name").text;
    if (accept_keyword("record")) {
      type.is_record = true;
      expect_punct("{");
      do {
        RecordField f;
        const Token& name = expect_ident("a field name");
        f.name = name.text;
        f.loc = name.loc;
        expect_punct(":");
        f.base = parse_base_kind_token();
        type.fields.push_back(std::move(f));
      } while (accept_punct(","));
      expect_punct("}");
      return type;
    }
    type.base = parse_base_kind_token();
    return type;
  }

  bool accept_punct(std::string_view p) {
    if (cur().is_punct(p)) {
      next();
      return true;
    }
    return false;
  }

  StateDecl parse_states() {
    StateDecl decl;
    decl.loc = cur().loc;
    next();
    expect_punct("{");
    do {
      decl.states.push_back(expect_decl_name("a state name").text);
    } while (accept_punct(","));
    expect_punct("}");
    return decl;
  }

  std::optional<bool> cmp_is_lower(const Token& t, bool value_on_left, bool& inclusive) {
    // value_on_left:  value > L  => lower;  value < U  => upper.
    // otherwise:      L < value  => lower;  U > value  => upper.
    if (t.kind != Token::Kind::Punct) return std::nullopt;
    const std::string& op = t.text;
    if (op != "<" && op != "<=" && op != ">" && op != ">=") return std::nullopt;
    inclusive = op.size() == 2;
    const bool greater = op[0] == '>';
    return value_on_left ? greater : !greater;
  }

  std::pair<bool, bool> expect_cmp(bool value_on_left) {
    bool inclusive = false;
    auto lower = cmp_is_lower(cur(), value_on_left, inclusive);
    if (!lower)
      throw SyntaxError(cur().loc, "expected a comparison (<, <=, >, >=), found " + describe(cur()));
    next();
    return {*lower, inclusive};
  }

  Value expect_number() {
    const Loc at = cur().loc;
    Value v = parse_signed_literal();
    if (std::holds_alternative<std::string>(v))
      throw SyntaxError(at, "expected a numeric bound, found a string literal");
    return v;
  }

  void parse_restrict_clause(RestrictionBuilder& b) {
    expect_keyword("restrict");
    const Token& head = cur();
    if (head.is_ident("value")) {
      next();
      const Loc at = cur().loc;
      auto [lower, inclusive] = expect_cmp(true);
      Bound bound{expect_number(), inclusive};
      lower ? b.lower(bound, at) : b.upper(bound, at);
      return;
    }
    if (head.is_ident("length")) {
      next();
      const Loc at = cur().loc;
      auto [lower, inclusive] = expect_cmp(true);
      const Token& n = cur();
      if (n.kind != Token::Kind::Int)
        throw SyntaxError(n.loc, "expected a natural number, found " + describe(n));
      const auto v = std::get<std::int64_t>(n.value);
      next();
      if (lower) {
        b.min_length(inclusive ? v : v + 1, at);
      } else {
        b.max_length(inclusive ? v : v - 1, at);
      }
      return;
    }
    const Loc at = head.loc;
    Value first = expect_number();
    auto [lower, inclusive] = expect_cmp(false);
    lower ? b.lower(Bound{first, inclusive}, at) : b.upper(Bound{first, inclusive}, at);
    expect_keyword("value");
    bool ignored = false;
    if (cmp_is_lower(cur(), true, ignored)) {
      const Loc at2 = cur().loc;
      auto [lower2, inclusive2] = expect_cmp(true);
      Bound bound{expect_number(), inclusive2};
      lower2 ? b.lower(bound, at2) : b.upper(bound, at2);
    }
  }

  DataElement parse_data() {
    DataElement e;
    e.loc = cur().loc;
    next();
    e.id = expect_decl_name("a data element name").text;
    expect_punct(":");
    e.type_ref = expect_ident("a type name").text;
    RestrictionBuilder rb;
    while (cur().is_ident("restrict")) {
      if (rb.empty()) e.restriction_loc = cur().loc;
      parse_restrict_clause(rb);
    }
    e.restriction = rb.build();
    if (cur().is_ident("init")) {
      e.init_loc = cur().loc;
      next();
      if (accept_keyword("allocated")) {
        e.init.status = Status::Allocated;
      } else if (accept_keyword("defined")) {
        e.init.status = Status::Defined;
      } else {
        e.init.status = Status::Known;
        e.init.value = parse_signed_literal();
      }
    }
    return e;
  }

  Status parse_status_token() {
    const Token& t = expect_ident("a status (unallocated, allocated, defined, known)");
    auto s = svsp::parse_status(t.text);
    if (!s) throw SyntaxError(t.loc, "unknown status '" + t.text + "'");
    return *s;
  }

  FunctionSpec parse_func() {
    FunctionSpec fn;
    fn.loc = cur().loc;
    next();
    fn.id = expect_decl_name("a function name").text;
    expect_punct("{");
    fn.classification = parse_class();
    while (cur().is_ident("param")) fn.params.push_back(parse_param());
    while (cur().is_ident("effect")) fn.effects.push_back(parse_effect());
    expect_punct("}");
    return fn;
  }

  std::string parse_descriptor(std::string_view name) {
    expect_keyword(name);
    expect_punct("=");
    return expect_ident("a descriptor value").text;
  }

  Classification parse_class() {
    Classification c;
    c.loc = cur().loc;
    expect_keyword("class");
    c.category = parse_descriptor("category");
    c.group = parse_descriptor("group");
    c.level = parse_descriptor("level");
    expect_keyword("states");
    expect_punct("=");
    expect_punct("[");
    if (!cur().is_punct("]")) {
      do {
        c.states.push_back(expect_ident("a state name").text);
      } while (accept_punct(","));
    }
    expect_punct("]");
    return c;
  }

  ParamRef parse_param() {
    ParamRef p;
    p.loc = cur().loc;
    next();
    p.element = expect_ident("a data element name").text;
    const Token& dir = expect_ident("a direction (in, out, inout)");
    if (dir.text == "in") {
      p.direction = Direction::In;
    } else if (dir.text == "out") {
      p.direction = Direction::Out;
    } else if (dir.text == "inout") {
      p.direction = Direction::InOut;
    } else {
      throw SyntaxError(dir.loc, "expected in, out, or inout, found '" + dir.text + "'");
    }
    p.implicit = accept_keyword("implicit");
    return p;
  }

  Effect parse_effect() {
    Effect e;
    e.loc = cur().loc;
    next();
    e.id = expect_ident("an effect name").text;
    expect_punct("{");
    while (cur().is_ident("pre")) {
      PreCondition pre;
      pre.loc = cur().loc;
      next();
      pre.param = expect_ident("a parameter name").text;
      pre.required = parse_status_token();
      RestrictionBuilder rb;
      while (cur().is_ident("restrict")) parse_restrict_clause(rb);
      if (!rb.empty()) pre.restriction = rb.build();
      e.pre.push_back(std::move(pre));
    }
    while (cur().is_ident("post")) {
      PostCondition post;
      post.loc = cur().loc;
      next();
      post.param = expect_ident("a parameter name").text;
      post.resulting = parse_status_token();
      e.post.push_back(std::move(post));
    }
    if (accept_keyword("abstract")) {
      e.is_abstract = true;
    } else {
      while (!cur().is_punct("}") && !at_end()) e.body.push_back(parse_statement());
    }
    expect_punct("}");
    return e;
  }

  Statement parse_statement() {
    Statement s;
    s.loc = cur().loc;
    if (cur().is_ident("require") && !toks_[pos_ + 1].is_punct(":=")) {
      next();
      s.kind = Statement::Kind::Require;
      s.lhs = parse_expr(0);
      s.relop = parse_relop();
      s.rhs = parse_expr(0);
      return s;
    }
    s.kind = Statement::Kind::Assign;
    s.target = expect_ident("a statement (assignment or require)").text;
    expect_punct(":=");
    s.lhs = parse_expr(0);
    return s;
  }

  RelOp parse_relop() {
    const Token& t = cur();
    static const std::pair<std::string_view, RelOp> ops[] = {
        {"==", RelOp::Eq}, {"!=", RelOp::Ne}, {"<", RelOp::Lt},
        {"<=", RelOp::Le}, {">", RelOp::Gt},  {">=", RelOp::Ge}};
    if (t.kind == Token::Kind::Punct) {
      for (const auto& [text, op] : ops) {
        if (t.text == text) {
          next();
          return op;
        }
      }
    }
    throw SyntaxError(t.loc, "expected a relational operator, found " + describe(t));
  }

  void enter(Loc at, int depth) {
    if (depth > kMaxExprDepth) throw SyntaxError(at, "expression nested too deeply");
  }

  Expr parse_expr(int depth) {
    enter(cur().loc, depth);
    Expr lhs = parse_term(depth + 1);
    while (true) {
      BinaryOp op;
      if (cur().is_punct("+")) {
        op = BinaryOp::Add;
      } else if (cur().is_punct("-")) {
        op = BinaryOp::Sub;
      } else if (cur().is_punct("++")) {
        op = BinaryOp::Concat;
      } else {
        break;
      }
      const Loc at = cur().loc;
      next();
      Expr rhs = parse_term(depth + 1);
      lhs = Expr::make_binary(op, std::move(lhs), std::move(rhs), at);
    }
    return lhs;
  }

  Expr parse_term(int depth) {
    enter(cur().loc, depth);
    Expr lhs = parse_factor(depth + 1);
    while (cur().is_punct("*") || cur().is_punct("/")) {
      const BinaryOp op = cur().is_punct("*") ? BinaryOp::Mul : BinaryOp::Div;
      const Loc at = cur().loc;
      next();
      Expr rhs = parse_factor(depth + 1);
      lhs = Expr::make_binary(op, std::move(lhs), std::move(rhs), at);
    }
    return lhs;
  }

  Expr parse_factor(int depth) {
    enter(cur().loc, depth);
    const Token& t = cur();
    const Loc at = t.loc;
    switch (t.kind) {
      case Token::Kind::Int:
      case Token::Kind::Real:
      case Token::Kind::String: {
        Value v = t.value;
        next();
        return Expr::make_literal(std::move(v), at);
      }
      case Token::Kind::Ident: {
        if (t.text == "len" && toks_[pos_ + 1].is_punct("(")) {
          next();
          next();
          Expr inner = parse_expr(depth + 1);
          expect_punct(")");
          return Expr::make_len(std::move(inner), at);
        }
        std::string name = t.text;
        next();
        return Expr::make_ref(std::move(name), at);
      }
      case Token::Kind::Punct:
        if (t.text == "-") {
          next();
          return Expr::make_neg(parse_factor(depth + 1), at);
        }
        if (t.text == "(") {
          next();
          Expr inner = parse_expr(depth + 1);
          expect_punct(")");
          return inner;
        }
        break;
      case Token::Kind::End: break;
    }
    throw SyntaxError(at, "expected an expression, found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t decl_start_ = 0;
};

}  // namespace

ParseOutcome parse_spec(std::string_view text) {
  LexResult lexed = lex(text);
  std::vector<Diagnostic> errors = std::move(lexed.errors);
  Parser parser(std::move(lexed.tokens));
  Specification spec = parser.parse_all(errors);
  ParseOutcome out;
  if (errors.empty()) {
    out.spec = std::move(spec);
  } else {
    sort_diagnostics(errors);
    out.errors = std::move(errors);
  }
  return out;
}

std::optional<Value> parse_literal(std::string_view text) {
  LexResult lexed = lex(text);
  if (!lexed.errors.empty()) return std::nullopt;
  Parser parser(std::move(lexed.tokens));
  try {
    Value v = parser.parse_signed_literal();
    if (!parser.at_end()) return std::nullopt;
    return v;
  } catch (const SyntaxError&) {
    return std::nullopt;
  }
}

}  // namespace svsp
