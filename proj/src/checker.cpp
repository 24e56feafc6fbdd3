#include "svsp/checker.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "svsp/dsl.hpp"
#include "svsp/restriction.hpp"
#include "svsp/spec_index.hpp"

namespace svsp {

int CheckReport::error_count() const {
  return static_cast<int>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                        [](const Diagnostic& d) { return d.is_error(); }));
}

int CheckReport::warning_count() const {
  return static_cast<int>(diagnostics.size()) - error_count();
}

CheckReport make_report(std::vector<Diagnostic> diagnostics) {
  CheckReport r;
  sort_diagnostics(diagnostics);
  for (const auto& d : diagnostics) {
    ++r.summary[d.code];
    if (d.is_error()) r.consistent = false;
  }
  r.diagnostics = std::move(diagnostics);
  return r;
}

namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

// --- restriction agreement -------------------------------------------------

NumericDomain domain_for(ElementKind k) {
  return k == ElementKind::Int ? NumericDomain::Int : NumericDomain::Real;
}

bool has_real_bound(const Restriction& r) {
  const auto* range = std::get_if<NumericRange>(&r);
  return range != nullptr && implied_domain(*range) == NumericDomain::Real;
}

// Kind-level well-formedness of a restriction on an element of kind `k`.
std::optional<std::string> restriction_kind_problem(const Restriction& r, ElementKind k) {
  if (is_unrestricted(r)) return std::nullopt;
  if (k == ElementKind::Record) return "record-typed elements carry no value restrictions";
  if (!restriction_fits_kind(r, k)) {
    return std::holds_alternative<NumericRange>(r)
               ? "value bounds on a " + std::string(to_string(k)) + " element"
               : "length bounds on a " + std::string(to_string(k)) + " element";
  }
  if (k == ElementKind::Int && has_real_bound(r)) return "real-valued bound on an int element";
  return std::nullopt;
}

bool value_fits_kind(const Value& v, ElementKind k) {
  const ElementKind vk = kind_of(v);
  if (vk == k) return true;
  return k == ElementKind::Real && vk == ElementKind::Int;
}

struct RestrictionPass {
  const SpecIndex& index;
  const std::unordered_set<const void*>& skip;
  std::vector<Diagnostic>& out;
  std::unordered_set<std::string> bad_elements{};

  void run() {
    for (const auto& d : index.spec().declarations) {
      if (const auto* e = std::get_if<DataElement>(&d)) {
        if (!skip.contains(e)) check_element(*e);
      }
    }
    for (const auto& d : index.spec().declarations) {
      if (const auto* f = std::get_if<FunctionSpec>(&d)) {
        if (!skip.contains(f)) check_function(*f);
      }
    }
  }

  void check_element(const DataElement& e) {
    const auto kind = index.element_kind(e.id);
    if (!kind || index.element(e.id) != &e) return;
    const Loc rloc = e.restriction_loc.valid() ? e.restriction_loc : e.loc;
    if (auto problem = restriction_kind_problem(e.restriction, *kind)) {
      out.push_back(Diagnostic::make("E005", e.id, *problem, rloc));
      bad_elements.insert(e.id);
    } else if (restriction_is_empty(e.restriction, domain_for(*kind))) {
      out.push_back(Diagnostic::make("E007", e.id,
                                     quoted(format_restriction(e.restriction)) + " admits no value",
                                     rloc));
      bad_elements.insert(e.id);
    }
    if (e.init.status != Status::Known || !e.init.value) return;
    const Loc iloc = e.init_loc.valid() ? e.init_loc : e.loc;
    if (*kind == ElementKind::Record) {
      out.push_back(Diagnostic::make("E005", e.id, "record-typed elements have no known value", iloc));
      return;
    }
    if (!value_fits_kind(*e.init.value, *kind)) {
      out.push_back(Diagnostic::make("E005", e.id,
                                     "initial value " + format_value(*e.init.value) +
                                         " is not of kind " + std::string(to_string(*kind)),
                                     iloc));
      return;
    }
    if (bad_elements.contains(e.id)) return;
    if (!restriction_admits(e.restriction, *e.init.value).holds()) {
      out.push_back(Diagnostic::make("E003", e.id,
                                     "initial value " + format_value(*e.init.value) +
                                         " is outside " + quoted(format_restriction(e.restriction)),
                                     iloc));
    }
  }

  void check_function(const FunctionSpec& f) {
    for (const auto& effect : f.effects) {
      for (const auto& pre : effect.pre) {
        if (!pre.restriction) continue;
        const DataElement* e = index.element(pre.param);
        const auto kind = index.element_kind(pre.param);
        if (e == nullptr || !kind || f.find_param(pre.param) == nullptr) continue;
        const Restriction& r = *pre.restriction;
        if (auto problem = restriction_kind_problem(r, *kind)) {
          out.push_back(Diagnostic::make("E005", f.id, *problem + " (effect " + effect.id + ")",
                                         pre.loc));
          continue;
        }
        if (restriction_is_empty(r, domain_for(*kind))) {
          out.push_back(Diagnostic::make("E007", f.id,
                                         quoted(format_restriction(r)) + " on " + pre.param +
                                             " in effect " + effect.id + " admits no value",
                                         pre.loc));
          continue;
        }
        if (bad_elements.contains(pre.param)) continue;
        if (!restriction_contains(e->restriction, r, domain_for(*kind)).holds()) {
          const std::string outer = is_unrestricted(e->restriction)
                                        ? std::string("unrestricted")
                                        : format_restriction(e->restriction);
          out.push_back(Diagnostic::make("E003", f.id,
                                         quoted(format_restriction(r)) + " on " + pre.param +
                                             " in effect " + effect.id + " is not within " +
                                             quoted(outer),
                                         pre.loc));
        }
      }
    }
  }
};

// --- transform typing ------------------------------------------------------

struct TypePass {
  const SpecIndex& index;
  const FunctionSpec& fn;
  std::vector<Diagnostic>& out;
  bool reported = false;

  void error(std::string_view code, const std::string& detail, Loc loc) {
    if (reported) return;
    out.push_back(Diagnostic::make(code, fn.id, detail, loc));
    reported = true;
  }

  std::optional<ElementKind> infer(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal: return kind_of(e.literal);
      case Expr::Kind::Ref: {
        auto k = index.element_kind(e.name);
        if (!k) return std::nullopt;
        if (*k == ElementKind::Record) {
          error("E005", "record-typed element " + quoted(e.name) + " used in a transform", e.loc);
          return std::nullopt;
        }
        return k;
      }
      case Expr::Kind::Neg: {
        auto k = infer(e.operands[0]);
        if (!k) return std::nullopt;
        if (!is_numeric(*k)) {
          error("E005", "negation of a " + std::string(to_string(*k)) + " operand", e.loc);
          return std::nullopt;
        }
        return k;
      }
      case Expr::Kind::Len: {
        auto k = infer(e.operands[0]);
        if (!k) return std::nullopt;
        if (*k != ElementKind::String) {
          error("E005", "len() of a " + std::string(to_string(*k)) + " operand", e.loc);
          return std::nullopt;
        }
        return ElementKind::Int;
      }
      case Expr::Kind::Binary: {
        auto l = infer(e.operands[0]);
        auto r = infer(e.operands[1]);
        if (!l || !r) return std::nullopt;
        const std::string op(to_string(e.op));
        if (e.op == BinaryOp::Concat) {
          if (*l != ElementKind::String || *r != ElementKind::String) {
            error("E005",
                  "'++' needs string operands, found " + std::string(to_string(*l)) + " and " +
                      std::string(to_string(*r)),
                  e.loc);
            return std::nullopt;
          }
          return ElementKind::String;
        }
        if (!is_numeric(*l) || !is_numeric(*r)) {
          error("E005",
                "'" + op + "' needs numeric operands, found " + std::string(to_string(*l)) +
                    " and " + std::string(to_string(*r)),
                e.loc);
          return std::nullopt;
        }
        return (*l == ElementKind::Real || *r == ElementKind::Real) ? ElementKind::Real
                                                                    : ElementKind::Int;
      }
    }
    return std::nullopt;
  }

  void statement(const Statement& s) {
    reported = false;
    if (s.kind == Statement::Kind::Require) {
      auto l = infer(s.lhs);
      auto r = infer(s.rhs);
      if (!l || !r) return;
      const bool ok = (is_numeric(*l) && is_numeric(*r)) || (*l == *r);
      if (!ok) {
        error("E005",
              "cannot compare " + std::string(to_string(*l)) + " with " +
                  std::string(to_string(*r)),
              s.loc);
      }
      return;
    }
    const ParamRef* target = fn.find_param(s.target);
    if (target != nullptr && target->direction == Direction::In) {
      error("E008", quoted(s.target) + " is an in-parameter of " + fn.id, s.loc);
      return;
    }
    if (s.target == kStateElement) {
      const bool ok = s.lhs.kind == Expr::Kind::Literal &&
                      std::holds_alternative<std::string>(s.lhs.literal) &&
                      index.is_state(std::get<std::string>(s.lhs.literal));
      if (!ok) {
        error("E006", "$state must be assigned a declared state literal, found " +
                          format_expr(s.lhs),
              s.loc);
      }
      return;
    }
    auto tk = index.element_kind(s.target);
    if (!tk) return;
    if (*tk == ElementKind::Record) {
      error("E005", "assignment to record-typed element " + quoted(s.target), s.loc);
      return;
    }
    auto ek = infer(s.lhs);
    if (!ek) return;
    const bool ok = *tk == *ek || (*tk == ElementKind::Real && *ek == ElementKind::Int);
    if (!ok) {
      error("E005",
            "cannot assign a " + std::string(to_string(*ek)) + " value to " + std::string(to_string(*tk)) +
                " element " + quoted(s.target),
            s.loc);
    }
  }

  void run() {
    for (const auto& effect : fn.effects)
      for (const auto& s : effect.body) statement(s);
  }
};

// --- status flow -----------------------------------------------------------

std::vector<Diagnostic> status_flow(const SpecIndex& index, const FunctionSpec& fn,
                                    const std::map<std::string, Status>* entry_override) {
  std::vector<Diagnostic> out;
  std::unordered_map<std::string, Status> guaranteed;
  for (const auto& p : fn.params) {
    Status entry = Status::Unallocated;
    if (const DataElement* e = index.element(p.element)) entry = e->init.status;
    for (const auto& effect : fn.effects) {
      if (!effect.mentions(p.element)) continue;
      for (const auto& pre : effect.pre) {
        if (pre.param == p.element) {
          entry = pre.required;
          break;
        }
      }
      break;
    }
    if (entry_override != nullptr) {
      if (auto it = entry_override->find(p.element); it != entry_override->end()) entry = it->second;
    }
    guaranteed.emplace(p.element, entry);
  }

  std::vector<std::string> refs;
  for (const auto& effect : fn.effects) {
    for (const auto& pre : effect.pre) {
      auto it = guaranteed.find(pre.param);
      if (it == guaranteed.end()) continue;
      if (!status_at_least(it->second, pre.required)) {
        out.push_back(Diagnostic::make(
            "E004", fn.id,
            "effect " + effect.id + " requires " + quoted(pre.param) + " " +
                std::string(to_string(pre.required)) + " but only " +
                std::string(to_string(it->second)) + " is guaranteed",
            pre.loc));
        it->second = pre.required;
      }
    }
    for (const auto& s : effect.body) {
      refs.clear();
      collect_refs(s.lhs, refs);
      if (s.kind == Statement::Kind::Require) collect_refs(s.rhs, refs);
      bool all_known = true;
      std::set<std::string> seen;
      for (const auto& r : refs) {
        auto it = guaranteed.find(r);
        if (it == guaranteed.end()) continue;
        if (!seen.insert(r).second) continue;
        if (!status_at_least(it->second, Status::Defined)) {
          out.push_back(Diagnostic::make(
              "E004", fn.id,
              quoted(r) + " is used as input in effect " + effect.id +
                  " while neither allocated nor defined (guaranteed " +
                  std::string(to_string(it->second)) + ")",
              s.loc));
          it->second = Status::Defined;
        }
        if (it->second != Status::Known) all_known = false;
      }
      if (s.kind == Statement::Kind::Assign) {
        auto it = guaranteed.find(s.target);
        if (it != guaranteed.end()) it->second = all_known ? Status::Known : Status::Defined;
      }
    }
    for (const auto& post : effect.post) {
      auto it = guaranteed.find(post.param);
      if (it != guaranteed.end()) it->second = post.resulting;
    }
  }
  return out;
}

// --- whole-spec driver -----------------------------------------------------

class SpecChecker {
 public:
  explicit SpecChecker(const Specification& spec) : spec_(spec), index_(spec) {}

  std::vector<Diagnostic> run() {
    uniqueness();
    existence();
    RestrictionPass{index_, skip_, out_}.run();
    for (const auto* f : index_.functions()) {
      if (skip_.contains(f)) continue;
      TypePass{index_, *f, out_}.run();
    }
    for (const auto* f : index_.functions()) {
      if (skip_.contains(f)) continue;
      auto flow = status_flow(index_, *f, nullptr);
      out_.insert(out_.end(), flow.begin(), flow.end());
    }
    unused();
    return std::move(out_);
  }

 private:
  void emit(std::string_view code, std::string entity, const std::string& detail, Loc loc) {
    out_.push_back(Diagnostic::make(code, std::move(entity), detail, loc));
  }

  void uniqueness() {
    // namespace -> name -> kind that first claimed it
    std::map<std::string, DeclKind, std::less<>> claimed;
    std::set<std::string, std::less<>> types, elements, functions, states, effects;
    const StateDecl* first_states = nullptr;

    auto shadow_check = [&](const std::string& name, DeclKind kind, Loc loc) {
      auto [it, inserted] = claimed.emplace(name, kind);
      if (!inserted && it->second != kind) {
        emit("W003", name,
             "the " + std::string(to_string(kind)) + " " + quoted(name) + " shares its name with a " +
                 std::string(to_string(it->second)),
             loc);
      }
    };

    for (const auto& d : spec_.declarations) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, DataType>) {
              if (!types.insert(x.id).second) {
                emit("E001", x.id, "", x.loc);
                skip_.insert(&x);
                return;
              }
              shadow_check(x.id, DeclKind::Type, x.loc);
              std::set<std::string> fields;
              for (const auto& f : x.fields)
                if (!fields.insert(f.name).second)
                  emit("E001", x.id, "field " + quoted(f.name), f.loc);
            } else if constexpr (std::is_same_v<T, StateDecl>) {
              if (first_states != nullptr) {
                emit("E001", "states", "a second state declaration", x.loc);
                return;
              }
              first_states = &x;
              for (const auto& s : x.states) {
                if (!states.insert(s).second) {
                  emit("E001", s, "state " + quoted(s), x.loc);
                  continue;
                }
                shadow_check(s, DeclKind::States, x.loc);
              }
            } else if constexpr (std::is_same_v<T, DataElement>) {
              if (!elements.insert(x.id).second) {
                emit("E001", x.id, "", x.loc);
                skip_.insert(&x);
                return;
              }
              shadow_check(x.id, DeclKind::Element, x.loc);
            } else {
              if (!functions.insert(x.id).second) {
                emit("E001", x.id, "", x.loc);
                skip_.insert(&x);
                return;
              }
              shadow_check(x.id, DeclKind::Function, x.loc);
              function_uniqueness(x, effects);
            }
          },
          d);
    }
  }

  void function_uniqueness(const FunctionSpec& f, std::set<std::string, std::less<>>& effects) {
    std::set<std::string> params;
    for (const auto& p : f.params) {
      if (!params.insert(p.element).second) {
        emit("E001", f.id, "parameter " + quoted(p.element) + " listed twice", p.loc);
        skip_.insert(&f);
      }
    }
    for (const auto& e : f.effects) {
      if (!effects.insert(e.id).second) {
        emit("E001", f.id, "effect " + quoted(e.id), e.loc);
        skip_.insert(&f);
      }
      std::set<std::string> pres, posts;
      for (const auto& p : e.pre) {
        if (!pres.insert(p.param).second) {
          emit("E001", f.id, "second pre for " + quoted(p.param) + " in effect " + e.id, p.loc);
          skip_.insert(&f);
        }
      }
      for (const auto& p : e.post) {
        if (!posts.insert(p.param).second) {
          emit("E001", f.id, "second post for " + quoted(p.param) + " in effect " + e.id, p.loc);
          skip_.insert(&f);
        }
      }
    }
  }

  void existence() {
    for (const auto& d : spec_.declarations) {
      if (const auto* e = std::get_if<DataElement>(&d)) {
        if (skip_.contains(e)) continue;
        if (index_.type(e->type_ref) == nullptr) {
          emit("E002", e->id, "type " + quoted(e->type_ref), e->loc);
          skip_.insert(e);
        }
      } else if (const auto* f = std::get_if<FunctionSpec>(&d)) {
        if (skip_.contains(f)) continue;
        function_existence(*f);
      }
    }
  }

  void function_existence(const FunctionSpec& f) {
    bool unresolved = false;
    for (const auto& p : f.params) {
      if (index_.element(p.element) == nullptr) {
        emit("E002", f.id, "data element " + quoted(p.element), p.loc);
        unresolved = true;
      }
    }
    const Classification& c = f.classification;
    if (index_.has_states()) {
      if (c.states.empty()) emit("E006", f.id, "classification lists no states", c.loc);
      for (const auto& s : c.states)
        if (!index_.is_state(s)) emit("E006", f.id, quoted(s), c.loc);
    } else {
      for (const auto& s : c.states)
        emit("E006", f.id, quoted(s) + " (the specification declares no states)", c.loc);
    }
    auto require_param = [&](const std::string& name, const std::string& where, Loc loc) {
      if (f.find_param(name) == nullptr) {
        emit("E002", f.id, quoted(name) + " in effect " + where + " is not a parameter of " + f.id,
             loc);
        unresolved = true;
      }
    };
    std::vector<std::string> refs;
    for (const auto& e : f.effects) {
      for (const auto& p : e.pre) require_param(p.param, e.id, p.loc);
      for (const auto& p : e.post) require_param(p.param, e.id, p.loc);
      for (const auto& s : e.body) {
        refs.clear();
        if (s.kind == Statement::Kind::Assign) refs.push_back(s.target);
        collect_refs(s.lhs, refs);
        if (s.kind == Statement::Kind::Require) collect_refs(s.rhs, refs);
        std::set<std::string> seen;
        for (const auto& r : refs)
          if (seen.insert(r).second) require_param(r, e.id, s.loc);
      }
    }
    if (unresolved) skip_.insert(&f);
  }

  void unused() {
    std::unordered_set<std::string> referenced;
    for (const auto& d : spec_.declarations)
      if (const auto* f = std::get_if<FunctionSpec>(&d))
        for (const auto& p : f->params) referenced.insert(p.element);
    for (const auto& d : spec_.declarations) {
      if (const auto* e = std::get_if<DataElement>(&d)) {
        if (skip_.contains(e) || referenced.contains(e->id)) continue;
        emit("W101", e->id, quoted(e->id) + " is referenced by no function", e->loc);
      } else if (const auto* f = std::get_if<FunctionSpec>(&d)) {
        if (skip_.contains(f) && index_.function(f->id) != f) continue;
        if (f->effects.empty()) emit("W102", f->id, quoted(f->id) + " declares no effects", f->loc);
      }
    }
  }

  const Specification& spec_;
  SpecIndex index_;
  std::unordered_set<const void*> skip_;
  std::vector<Diagnostic> out_;
};

}  // namespace

CheckReport check_spec(const Specification& spec) { return make_report(SpecChecker(spec).run()); }

std::vector<Diagnostic> check_restriction_agreement(const Specification& spec) {
  SpecIndex index(spec);
  std::unordered_set<const void*> skip;
  std::vector<Diagnostic> out;
  RestrictionPass{index, skip, out}.run();
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_status_flow(const FunctionSpec& fn, const Specification& spec) {
  SpecIndex index(spec);
  return status_flow(index, fn, nullptr);
}

std::vector<Diagnostic> check_status_flow(const FunctionSpec& fn, const Specification& spec,
                                          const std::map<std::string, Status>& entry_statuses) {
  SpecIndex index(spec);
  return status_flow(index, fn, &entry_statuses);
}

std::vector<Diagnostic> check_transform_types(const FunctionSpec& fn, const Specification& spec) {
  SpecIndex index(spec);
  std::vector<Diagnostic> out;
  TypePass{index, fn, out}.run();
  return out;
}

}  // namespace svsp
