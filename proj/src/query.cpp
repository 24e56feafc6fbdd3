#include "svsp/query.hpp"

#include <algorithm>
#include <unordered_set>

#include "svsp/dsl.hpp"
#include "svsp/lexer.hpp"
#include "svsp/spec_index.hpp"

namespace svsp {

std::string_view to_string(QueryKind k) {
  switch (k) {
    case QueryKind::Function: return "function";
    case QueryKind::Element: return "element";
    case QueryKind::Type: return "type";
  }
  return "?";
}

namespace {

[[noreturn]] void invalid(const std::string& message) { throw QueryError("InvalidQuery", message); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool applicable(QueryKind kind, const std::string& field) {
  if (field == "id") return true;
  if (field == "type") return kind != QueryKind::Function;
  if (field == "restriction") return kind == QueryKind::Element;
  if (field == "class.category" || field == "class.group" || field == "class.level" ||
      field == "class.states" || field == "param-count" || field == "effect-count")
    return kind == QueryKind::Function;
  return false;
}

bool applicable(QueryKind kind, Predicate::Kind p) {
  switch (p) {
    case Predicate::Kind::NameGlob: return true;
    case Predicate::Kind::ClassEquals:
    case Predicate::Kind::StateContains:
    case Predicate::Kind::References: return kind == QueryKind::Function;
    case Predicate::Kind::UsesType: return kind != QueryKind::Type;
    case Predicate::Kind::Unused: return kind != QueryKind::Function;
  }
  return false;
}

std::string_view predicate_name(const Predicate& p) {
  switch (p.kind) {
    case Predicate::Kind::NameGlob: return "name";
    case Predicate::Kind::ClassEquals: return "class";
    case Predicate::Kind::StateContains: return "class.states";
    case Predicate::Kind::References: return "refs";
    case Predicate::Kind::UsesType: return "type";
    case Predicate::Kind::Unused: return "unused";
  }
  return "?";
}

void require_identifier(std::string_view key, std::string_view value) {
  if (!is_identifier(value))
    invalid("'" + std::string(key) + "' expects an identifier, got '" + std::string(value) + "'");
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view text) {
  // Iterative matcher with single-star backtracking.
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

void set_select(Query& q, std::string_view fields) {
  std::vector<std::string> select;
  std::string_view rest = fields;
  while (true) {
    const auto comma = rest.find(',');
    const std::string field(trim(rest.substr(0, comma)));
    if (field.empty()) invalid("empty projection field");
    if (!applicable(q.kind, field))
      invalid("projection '" + field + "' is not available for " + std::string(to_string(q.kind)) +
              " queries");
    select.push_back(field);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  q.select = std::move(select);
}

Query parse_query(std::string_view text, QueryKind default_kind) {
  Query q;
  q.kind = default_kind;
  bool kind_seen = false;
  std::optional<std::string> select;

  std::string_view rest = text;
  while (true) {
    const auto amp = rest.find('&');
    const std::string_view term = trim(rest.substr(0, amp));
    if (!term.empty()) {
      const auto op_pos = term.find_first_of("=~");
      if (op_pos == std::string_view::npos) {
        if (term != "unused") invalid("unrecognized term '" + std::string(term) + "'");
        q.filters.push_back({Predicate::Kind::Unused, {}, {}});
      } else {
        const std::string key(trim(term.substr(0, op_pos)));
        const char op = term[op_pos];
        const std::string value(trim(term.substr(op_pos + 1)));
        if (value.empty()) invalid("'" + key + "' has no value");
        if (op == '~' && key != "class.states")
          invalid("'~' applies only to class.states, not '" + key + "'");
        if (key == "kind") {
          if (kind_seen) invalid("kind given twice");
          kind_seen = true;
          if (value == "function") {
            q.kind = QueryKind::Function;
          } else if (value == "element") {
            q.kind = QueryKind::Element;
          } else if (value == "type") {
            q.kind = QueryKind::Type;
          } else {
            invalid("unknown kind '" + value + "'");
          }
        } else if (key == "name") {
          if (!std::all_of(value.begin(), value.end(),
                           [](char c) { return is_ident_char(c) || c == '$' || c == '*' || c == '?'; }))
            invalid("bad glob '" + value + "' (only identifier characters, '*' and '?')");
          q.filters.push_back({Predicate::Kind::NameGlob, {}, value});
        } else if (key == "class.category" || key == "class.group" || key == "class.level") {
          require_identifier(key, value);
          q.filters.push_back({Predicate::Kind::ClassEquals, key.substr(6), value});
        } else if (key == "class.states") {
          if (op != '~') invalid("class.states is a set; use class.states~STATE");
          require_identifier(key, value);
          q.filters.push_back({Predicate::Kind::StateContains, {}, value});
        } else if (key == "refs") {
          require_identifier(key, value);
          q.filters.push_back({Predicate::Kind::References, {}, value});
        } else if (key == "type") {
          require_identifier(key, value);
          q.filters.push_back({Predicate::Kind::UsesType, {}, value});
        } else if (key == "select") {
          if (select) invalid("select given twice");
          select = value;
        } else {
          invalid("unknown query field '" + key + "'");
        }
      }
    }
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }

  for (const auto& p : q.filters)
    if (!applicable(q.kind, p.kind))
      invalid("'" + std::string(predicate_name(p)) + "' does not apply to " +
              std::string(to_string(q.kind)) + " queries");
  if (select) set_select(q, *select);
  return q;
}

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  std::string out;
  for (const auto& s : std::get<std::vector<std::string>>(c)) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Specification& spec, const Query& q) : spec_(spec), q_(q), index_(spec) {
    for (const auto& d : spec.declarations) {
      if (const auto* f = std::get_if<FunctionSpec>(&d))
        for (const auto& p : f->params) referenced_elements_.insert(p.element);
      if (const auto* e = std::get_if<DataElement>(&d)) used_types_.insert(e->type_ref);
    }
  }

  Table run() {
    Table table;
    table.columns = q_.select;
    for (const auto& d : spec_.declarations) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (!std::is_same_v<T, StateDecl>) {
              if (!wanted<T>() || !matches(x)) return;
              std::vector<Cell> row;
              for (const auto& field : q_.select) row.push_back(project(x, field));
              table.rows.push_back(std::move(row));
            }
          },
          d);
    }
    return table;
  }

 private:
  template <typename T>
  bool wanted() const {
    if constexpr (std::is_same_v<T, FunctionSpec>) return q_.kind == QueryKind::Function;
    if constexpr (std::is_same_v<T, DataElement>) return q_.kind == QueryKind::Element;
    return q_.kind == QueryKind::Type;
  }

  template <typename T>
  bool matches(const T& x) const {
    return std::all_of(q_.filters.begin(), q_.filters.end(),
                       [&](const Predicate& p) { return test(x, p); });
  }

  bool test(const FunctionSpec& f, const Predicate& p) const {
    const Classification& c = f.classification;
    switch (p.kind) {
      case Predicate::Kind::NameGlob: return glob_match(p.value, f.id);
      case Predicate::Kind::ClassEquals:
        return (p.field == "category" ? c.category : p.field == "group" ? c.group : c.level) == p.value;
      case Predicate::Kind::StateContains:
        return std::find(c.states.begin(), c.states.end(), p.value) != c.states.end();
      case Predicate::Kind::References: return f.find_param(p.value) != nullptr;
      case Predicate::Kind::UsesType:
        return std::any_of(f.params.begin(), f.params.end(), [&](const ParamRef& r) {
          const DataElement* e = index_.element(r.element);
          return e != nullptr && e->type_ref == p.value;
        });
      case Predicate::Kind::Unused: return false;
    }
    return false;
  }

  bool test(const DataElement& e, const Predicate& p) const {
    switch (p.kind) {
      case Predicate::Kind::NameGlob: return glob_match(p.value, e.id);
      case Predicate::Kind::UsesType: return e.type_ref == p.value;
      case Predicate::Kind::Unused: return !referenced_elements_.contains(e.id);
      default: return false;
    }
  }

  bool test(const DataType& t, const Predicate& p) const {
    switch (p.kind) {
      case Predicate::Kind::NameGlob: return glob_match(p.value, t.id);
      case Predicate::Kind::Unused: return !used_types_.contains(t.id);
      default: return false;
    }
  }

  static Cell project(const FunctionSpec& f, const std::string& field) {
    if (field == "id") return f.id;
    if (field == "class.category") return f.classification.category;
    if (field == "class.group") return f.classification.group;
    if (field == "class.level") return f.classification.level;
    if (field == "class.states") return f.classification.states;
    if (field == "param-count") return static_cast<std::int64_t>(f.params.size());
    return static_cast<std::int64_t>(f.effects.size());
  }

  static Cell project(const DataElement& e, const std::string& field) {
    if (field == "id") return e.id;
    if (field == "type") return e.type_ref;
    return format_restriction(e.restriction);
  }

  static Cell project(const DataType& t, const std::string& field) {
    if (field == "id") return t.id;
    return t.is_record ? std::string("record") : std::string(to_string(t.base));
  }

  const Specification& spec_;
  const Query& q_;
  SpecIndex index_;
  std::unordered_set<std::string> referenced_elements_;
  std::unordered_set<std::string> used_types_;
};

}  // namespace

Table evaluate(const Specification& spec, const Query& q) { return Evaluator(spec, q).run(); }

Xref xref(const Specification& spec, std::string_view element_id) {
  SpecIndex index(spec);
  const DataElement* e = index.element(element_id);
  if (e == nullptr) throw QueryError("UnknownElement", "no data element '" + std::string(element_id) + "'");

  Xref out;
  out.element = e->id;
  out.type = e->type_ref;
  out.kind = index.element_kind(e->id);
  out.restriction = format_restriction(e->restriction);

  std::vector<std::string> refs;
  for (const auto* f : index.functions()) {
    const ParamRef* p = f->find_param(e->id);
    if (p != nullptr) out.functions.push_back({f->id, p->direction, p->implicit});
    for (const auto& eff : f->effects) {
      XrefEffect use{f->id, eff.id, false, false, std::nullopt, std::nullopt};
      for (const auto& pre : eff.pre)
        if (pre.param == e->id) use.pre = pre.required;
      for (const auto& post : eff.post)
        if (post.param == e->id) use.post = post.resulting;
      for (const auto& s : eff.body) {
        if (s.kind == Statement::Kind::Assign && s.target == e->id) use.assigns = true;
        refs.clear();
        collect_refs(s.lhs, refs);
        if (s.kind == Statement::Kind::Require) collect_refs(s.rhs, refs);
        if (std::find(refs.begin(), refs.end(), e->id) != refs.end()) use.reads = true;
      }
      if (use.reads || use.assigns || use.pre || use.post) out.effects.push_back(std::move(use));
    }
  }
  return out;
}

}  // namespace svsp
