#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svsp/model.hpp"

namespace svsp {

enum class Severity { Error, Warning };

[[nodiscard]] std::string_view to_string(Severity s);

/// One entry of the stable diagnostic catalog.
struct DiagnosticInfo {
  std::string_view code;
  Severity severity;
  std::string_view title;
};

/// Static codes (E0xx, W1xx, W003) and dynamic scenario codes (R1xx, W2xx).
[[nodiscard]] const std::vector<DiagnosticInfo>& diagnostic_catalog();
[[nodiscard]] const DiagnosticInfo* find_diagnostic(std::string_view code);

/// A coded finding.  `entity` names the top-level declaration it concerns;
/// `location` points at the offending construct inside that declaration.
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string entity;
  std::string message;
  std::optional<Loc> location;

  /// Builds a diagnostic whose severity and message prefix come from the
  /// catalog.  `detail`, when non-empty, is appended after the title.
  static Diagnostic make(std::string_view code, std::string entity, std::string_view detail,
                         Loc loc = {});

  [[nodiscard]] bool is_error() const { return severity == Severity::Error; }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Sorts by source location, then code, then entity; diagnostics without a
/// location come last.
void sort_diagnostics(std::vector<Diagnostic>& diags);

/// `CODE severity entity line:col message`
[[nodiscard]] std::string format_diagnostic_line(const Diagnostic& d);

}  // namespace svsp
