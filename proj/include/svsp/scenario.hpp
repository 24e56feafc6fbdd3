// Dynamic simulation of function calls against a store of data-element
// statuses and values.
//
// Store invariants, preserved by every call:
//   - value present <=> status Known;
//   - every Known value satisfies its element's restriction;
//   - a Rejected call leaves the store unchanged (calls run on a shadow copy).

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "svsp/diagnostic.hpp"
#include "svsp/model.hpp"
#include "svsp/spec_index.hpp"

namespace svsp {

struct StoreEntry {
  Status status = Status::Unallocated;
  std::optional<Value> value;

  friend bool operator==(const StoreEntry&, const StoreEntry&) = default;
};

/// Element statuses in declaration order, `$state` first.
class Store {
 public:
  void add(std::string id, StoreEntry entry);

  [[nodiscard]] const StoreEntry* find(std::string_view id) const;
  [[nodiscard]] StoreEntry* find(std::string_view id);
  [[nodiscard]] const std::vector<std::pair<std::string, StoreEntry>>& entries() const { return entries_; }

  friend bool operator==(const Store& a, const Store& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::pair<std::string, StoreEntry>> entries_;
  std::unordered_map<std::string, std::size_t> slots_;
};

/// A caller-supplied value, or the `defined` marker (no value).
struct BindingValue {
  std::optional<Value> value;

  static BindingValue defined() { return {}; }
  friend bool operator==(const BindingValue&, const BindingValue&) = default;
};

using Binding = std::map<std::string, BindingValue>;

struct Delta {
  std::string element;
  Status status = Status::Unallocated;
  std::optional<Value> value;

  friend bool operator==(const Delta&, const Delta&) = default;
};

struct EffectLog {
  std::string id;
  bool is_abstract = false;
  std::vector<std::string> statements;  // canonical text of executed statements
  std::vector<Delta> deltas;

  friend bool operator==(const EffectLog&, const EffectLog&) = default;
};

enum class Outcome : std::uint8_t { Ok, Rejected };

struct TraceRecord {
  std::int64_t seq = 0;
  std::string function;
  Binding bindings;
  Outcome outcome = Outcome::Ok;
  std::string code;     // R-code when Rejected
  std::string message;  // human text when Rejected
  std::optional<std::string> state_before;  // `$state` value at call time
  std::vector<Delta> binding_deltas;        // store changes made by bindings
  std::vector<EffectLog> effects;           // empty when Rejected
  std::vector<Diagnostic> diagnostics;      // R-code on rejection, W201 warnings

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string code, const std::string& message, std::vector<Diagnostic> diagnostics = {})
      : std::runtime_error(message), code_(std::move(code)), diagnostics_(std::move(diagnostics)) {}
  [[nodiscard]] const std::string& code() const { return code_; }
  [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::string code_;
  std::vector<Diagnostic> diagnostics_;
};

/// Initial store: every element per its init clause, `$state` Known(first
/// declared state) when states are declared.
[[nodiscard]] Store initial_store(const SpecIndex& index);

/// A single-writer simulation session over an immutable specification.
class Session {
 public:
  /// Throws ScenarioError("InconsistentSpec") unless the spec checks clean
  /// of errors.
  explicit Session(std::shared_ptr<const Specification> spec);
  explicit Session(Specification spec);

  TraceRecord call(std::string_view function_id, const Binding& bindings);

  [[nodiscard]] const Store& store() const { return store_; }
  [[nodiscard]] Store snapshot() const { return store_; }
  [[nodiscard]] const std::vector<TraceRecord>& trace() const { return trace_; }
  [[nodiscard]] const Specification& spec() const { return *spec_; }
  [[nodiscard]] const SpecIndex& index() const { return *index_; }

  /// Back to the initial store with an empty trace.
  void reset();

 private:
  std::shared_ptr<const Specification> spec_;
  std::unique_ptr<SpecIndex> index_;
  Store store_;
  std::vector<TraceRecord> trace_;
};

// --- scripts ---------------------------------------------------------------

struct ScriptDirective {
  enum class Kind : std::uint8_t { Call, ExpectError, Assert, AssertStatus };

  Kind kind = Kind::Call;
  int line = 0;
  std::string text;  // source line without comment
  std::string function;
  Binding bindings;
  std::string expected_code;  // ExpectError
  std::string element;        // Assert, AssertStatus
  RelOp relop = RelOp::Eq;
  Value literal;
  Status status = Status::Unallocated;
};

struct ScriptParse {
  std::vector<ScriptDirective> directives;
  std::vector<Diagnostic> errors;  // E000
};

[[nodiscard]] ScriptParse parse_script(std::string_view text);

struct DirectiveResult {
  int line = 0;
  std::string text;
  bool passed = false;
  std::string detail;
};

struct ScriptRun {
  std::vector<Diagnostic> errors;  // syntax errors; nothing was executed
  std::vector<DirectiveResult> results;
  int passed = 0;
  int failed = 0;

  [[nodiscard]] bool ok() const { return errors.empty() && failed == 0; }
};

/// Executes every directive, continuing past failures.
[[nodiscard]] ScriptRun run_script(Session& session, std::string_view script);

/// Parses a binding literal: a number, a quoted string, or `defined`.
[[nodiscard]] std::optional<BindingValue> parse_binding_value(std::string_view text);

}  // namespace svsp
