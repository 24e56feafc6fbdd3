#include "svsp/json_io.hpp"

#include <limits>

#include "svsp/dsl.hpp"

namespace svsp {

Json to_json(const Value& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

Json to_json(const Diagnostic& d) {
  Json j;
  j["code"] = d.code;
  j["severity"] = std::string(to_string(d.severity));
  j["entity"] = d.entity;
  j["message"] = d.message;
  j["line"] = d.location ? Json(d.location->line) : Json(nullptr);
  j["col"] = d.location ? Json(d.location->col) : Json(nullptr);
  return j;
}

Json to_json(const std::vector<Diagnostic>& diags) {
  Json arr = Json::array();
  for (const auto& d : diags) arr.push_back(to_json(d));
  return arr;
}

Json to_json(const CheckReport& r) {
  Json j;
  j["consistent"] = r.consistent;
  j["errors"] = r.error_count();
  j["warnings"] = r.warning_count();
  Json summary = Json::object();
  for (const auto& [code, n] : r.summary) summary[code] = n;
  j["summary"] = summary;
  j["diagnostics"] = to_json(r.diagnostics);
  return j;
}

Json to_json(const Store& s) {
  Json j = Json::object();
  for (const auto& [id, entry] : s.entries()) {
    Json e;
    e["status"] = std::string(to_string(entry.status));
    if (entry.value) e["value"] = to_json(*entry.value);
    j[id] = e;
  }
  return j;
}

Json to_json(const Binding& b) {
  Json j = Json::object();
  for (const auto& [name, v] : b) j[name] = v.value ? to_json(*v.value) : Json{{"defined", true}};
  return j;
}

namespace {

Json deltas_json(const std::vector<Delta>& deltas) {
  Json arr = Json::array();
  for (const auto& d : deltas) {
    Json j;
    j["elem"] = d.element;
    j["status"] = std::string(to_string(d.status));
    j["value"] = d.value ? to_json(*d.value) : Json(nullptr);
    arr.push_back(j);
  }
  return arr;
}

std::string kind_text(const std::optional<ElementKind>& k) {
  return k ? std::string(to_string(*k)) : std::string();
}

}  // namespace

Json to_json(const TraceRecord& r) {
  Json j;
  j["seq"] = r.seq;
  j["function"] = r.function;
  j["bindings"] = to_json(r.bindings);
  j["outcome"] = r.outcome == Outcome::Ok ? "ok" : "rejected";
  j["code"] = r.code.empty() ? Json(nullptr) : Json(r.code);
  j["message"] = r.message.empty() ? Json(nullptr) : Json(r.message);
  j["state_before"] = r.state_before ? Json(*r.state_before) : Json(nullptr);
  j["binding_deltas"] = deltas_json(r.binding_deltas);
  Json effects = Json::array();
  for (const auto& e : r.effects) {
    Json ej;
    ej["id"] = e.id;
    ej["abstract"] = e.is_abstract;
    ej["statements"] = e.statements;
    ej["deltas"] = deltas_json(e.deltas);
    effects.push_back(ej);
  }
  j["effects"] = effects;
  j["diagnostics"] = to_json(r.diagnostics);
  return j;
}

Json to_json(const std::vector<TraceRecord>& trace) {
  Json arr = Json::array();
  for (const auto& r : trace) arr.push_back(to_json(r));
  return arr;
}

Json to_json(const Table& t) {
  Json arr = Json::array();
  const bool ids_only = t.columns.size() == 1 && t.columns[0] == "id";
  for (const auto& row : t.rows) {
    if (ids_only) {
      arr.push_back(cell_text(row[0]));
      continue;
    }
    Json obj;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      obj[t.columns[i]] = std::visit([](const auto& x) { return Json(x); }, row[i]);
    arr.push_back(obj);
  }
  return arr;
}

Json to_json(const Xref& x) {
  Json j;
  j["element"] = x.element;
  j["type"] = x.type.empty() ? Json(nullptr) : Json(x.type);
  j["kind"] = kind_text(x.kind);
  j["restriction"] = x.restriction;
  Json fns = Json::array();
  for (const auto& f : x.functions) {
    Json fj;
    fj["function"] = f.function;
    fj["direction"] = std::string(to_string(f.direction));
    fj["implicit"] = f.implicit;
    fns.push_back(fj);
  }
  j["functions"] = fns;
  Json effects = Json::array();
  for (const auto& e : x.effects) {
    Json ej;
    ej["function"] = e.function;
    ej["effect"] = e.effect;
    ej["reads"] = e.reads;
    ej["assigns"] = e.assigns;
    ej["pre"] = e.pre ? Json(std::string(to_string(*e.pre))) : Json(nullptr);
    ej["post"] = e.post ? Json(std::string(to_string(*e.post))) : Json(nullptr);
    effects.push_back(ej);
  }
  j["effects"] = effects;
  return j;
}

Json to_json(const Proposal& p) {
  Json j;
  j["proposal_id"] = p.id;
  j["status"] = std::string(to_string(p.status));
  j["op"] = std::string(to_string(p.change.op));
  j["kind"] = std::string(to_string(p.change.kind));
  j["id"] = p.change.id;
  j["base_version"] = p.base_version;
  j["report"] = to_json(p.report);
  return j;
}

Json function_json(const FunctionSpec& f, const SpecIndex& index) {
  Json j;
  j["id"] = f.id;
  j["line"] = f.loc.line;
  const Classification& c = f.classification;
  j["class"] = Json{{"category", c.category}, {"group", c.group}, {"level", c.level}, {"states", c.states}};
  Json params = Json::array();
  for (const auto& p : f.params) {
    Json pj;
    pj["element"] = p.element;
    pj["direction"] = std::string(to_string(p.direction));
    pj["implicit"] = p.implicit;
    const DataElement* e = index.element(p.element);
    pj["type"] = e != nullptr && !e->type_ref.empty() ? Json(e->type_ref) : Json(nullptr);
    pj["kind"] = kind_text(index.element_kind(p.element));
    pj["restriction"] = e != nullptr ? format_restriction(e->restriction) : std::string();
    params.push_back(pj);
  }
  j["params"] = params;
  Json effects = Json::array();
  for (const auto& e : f.effects) {
    Json ej;
    ej["id"] = e.id;
    ej["abstract"] = e.is_abstract;
    Json pres = Json::array();
    for (const auto& p : e.pre) {
      Json pj;
      pj["param"] = p.param;
      pj["status"] = std::string(to_string(p.required));
      pj["restriction"] = p.restriction ? Json(format_restriction(*p.restriction)) : Json(nullptr);
      pres.push_back(pj);
    }
    ej["pre"] = pres;
    Json posts = Json::array();
    for (const auto& p : e.post)
      posts.push_back(Json{{"param", p.param}, {"status", std::string(to_string(p.resulting))}});
    ej["post"] = posts;
    Json body = Json::array();
    for (const auto& s : e.body) body.push_back(format_statement(s));
    ej["body"] = body;
    effects.push_back(ej);
  }
  j["effects"] = effects;
  j["text"] = format_declaration(f);
  return j;
}

Json element_json(const DataElement& e, const SpecIndex& index) {
  Json j;
  j["id"] = e.id;
  j["type"] = e.type_ref.empty() ? Json(nullptr) : Json(e.type_ref);
  j["kind"] = kind_text(index.element_kind(e.id));
  j["restriction"] = format_restriction(e.restriction);
  Json init;
  init["status"] = std::string(to_string(e.init.status));
  if (e.init.value) init["value"] = to_json(*e.init.value);
  j["init"] = init;
  j["implicit"] = e.id == kStateElement;
  return j;
}

Json type_json(const DataType& t) {
  Json j;
  j["id"] = t.id;
  j["kind"] = std::string(to_string(t.kind()));
  if (t.is_record) {
    Json fields = Json::array();
    for (const auto& f : t.fields) fields.push_back(Json{{"name", f.name}, {"base", std::string(to_string(f.base))}});
    j["fields"] = fields;
  }
  return j;
}

Binding binding_from_json(const Json& j) {
  if (j.is_null()) return {};
  if (!j.is_object()) throw JsonShapeError("bindings must be an object");
  Binding b;
  for (const auto& [name, v] : j.items()) {
    if (v.is_number_integer() && !v.is_number_unsigned()) {
      b[name] = BindingValue{Value{v.get<std::int64_t>()}};
    } else if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw JsonShapeError("binding '" + name + "' is out of the integer range");
      b[name] = BindingValue{Value{static_cast<std::int64_t>(u)}};
    } else if (v.is_number_float()) {
      b[name] = BindingValue{Value{v.get<double>()}};
    } else if (v.is_string()) {
      b[name] = BindingValue{Value{v.get<std::string>()}};
    } else if (v.is_object() && v.size() == 1 && v.contains("defined") && v["defined"] == true) {
      b[name] = BindingValue::defined();
    } else {
      throw JsonShapeError("binding '" + name + "' must be a number, a string, or {\"defined\":true}");
    }
  }
  return b;
}

Change change_from_json(const Json& j) {
  if (!j.is_object()) throw JsonShapeError("a change must be a JSON object");
  auto field = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key) || j[key].is_null()) {
      if (required) throw JsonShapeError(std::string("change is missing \"") + key + "\"");
      return {};
    }
    if (!j[key].is_string()) throw JsonShapeError(std::string("change field \"") + key + "\" must be a string");
    return j[key].get<std::string>();
  };
  const std::string op = field("op", true);
  return make_change(op, field("kind", true), field("id", false), field("decl", op != "delete"));
}

}  // namespace svsp
