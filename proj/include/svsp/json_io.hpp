// JSON forms of diagnostics, reports, stores, traces, query results, and
// specification entities.  Object keys keep insertion order so output is
// byte-stable for equal inputs.

#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "svsp/checker.hpp"
#include "svsp/editor.hpp"
#include "svsp/query.hpp"
#include "svsp/scenario.hpp"
#include "svsp/spec_index.hpp"

namespace svsp {

using Json = nlohmann::ordered_json;

/// Malformed JSON input (wrong shape or value kinds).
class JsonShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] Json to_json(const Value& v);
[[nodiscard]] Json to_json(const Diagnostic& d);
[[nodiscard]] Json to_json(const std::vector<Diagnostic>& diags);
[[nodiscard]] Json to_json(const CheckReport& r);
[[nodiscard]] Json to_json(const Store& s);
[[nodiscard]] Json to_json(const Binding& b);
[[nodiscard]] Json to_json(const TraceRecord& r);
[[nodiscard]] Json to_json(const std::vector<TraceRecord>& trace);
[[nodiscard]] Json to_json(const Table& t);
[[nodiscard]] Json to_json(const Xref& x);
[[nodiscard]] Json to_json(const Proposal& p);

/// Entity detail views; `index` resolves element types and kinds.
[[nodiscard]] Json function_json(const FunctionSpec& f, const SpecIndex& index);
[[nodiscard]] Json element_json(const DataElement& e, const SpecIndex& index);
[[nodiscard]] Json type_json(const DataType& t);

/// {"lw": 2.5, "name": "x", "flag": {"defined": true}}.  Throws JsonShapeError.
[[nodiscard]] Binding binding_from_json(const Json& j);

/// {"op","kind","id","decl"}.  Throws JsonShapeError or ChangeError.
[[nodiscard]] Change change_from_json(const Json& j);

}  // namespace svsp
