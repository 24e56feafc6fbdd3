#include "svsp/diagnostic.hpp"

#include <algorithm>
#include <tuple>

namespace svsp {

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

const std::vector<DiagnosticInfo>& diagnostic_catalog() {
  static const std::vector<DiagnosticInfo> catalog{
      {"E000", Severity::Error, "syntax error"},
      {"E001", Severity::Error, "duplicate identifier"},
      {"E002", Severity::Error, "unresolved reference"},
      {"E003", Severity::Error, "restriction not a subset of element restriction"},
      {"E004", Severity::Error, "status-flow violation"},
      {"E005", Severity::Error, "type mismatch"},
      {"E006", Severity::Error, "unknown state name"},
      {"E007", Severity::Error, "unsatisfiable restriction"},
      {"E008", Severity::Error, "assignment to in-parameter"},
      {"W003", Severity::Warning, "identifier shadows a name in another namespace"},
      {"W101", Severity::Warning, "unused data element"},
      {"W102", Severity::Warning, "function with no effects"},
      {"R101", Severity::Error, "unknown function"},
      {"R102", Severity::Error, "state violation"},
      {"R103", Severity::Error, "restriction violation"},
      {"R104", Severity::Error, "status violation"},
      {"R105", Severity::Error, "missing binding"},
      {"R106", Severity::Error, "type mismatch"},
      {"R107", Severity::Error, "division by zero or arithmetic overflow"},
      {"R108", Severity::Error, "require failed"},
      {"W201", Severity::Warning, "unverifiable guard"},
  };
  return catalog;
}

const DiagnosticInfo* find_diagnostic(std::string_view code) {
  for (const auto& info : diagnostic_catalog())
    if (info.code == code) return &info;
  return nullptr;
}

Diagnostic Diagnostic::make(std::string_view code, std::string entity, std::string_view detail,
                            Loc loc) {
  Diagnostic d;
  d.code = std::string(code);
  d.entity = std::move(entity);
  const DiagnosticInfo* info = find_diagnostic(code);
  if (info != nullptr) {
    d.severity = info->severity;
    d.message = std::string(info->title);
  } else {
    d.severity = code.starts_with("W") ? Severity::Warning : Severity::Error;
  }
  if (!detail.empty()) {
    if (!d.message.empty()) d.message += ": ";
    d.message += detail;
  }
  if (loc.valid()) d.location = loc;
  return d;
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
  auto key = [](const Diagnostic& d) {
    const bool has = d.location.has_value();
    return std::make_tuple(!has, has ? d.location->line : 0, has ? d.location->col : 0,
                           std::string_view(d.code), std::string_view(d.entity),
                           std::string_view(d.message));
  };
  std::stable_sort(diags.begin(), diags.end(),
                   [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
}

std::string format_diagnostic_line(const Diagnostic& d) {
  std::string out = d.code;
  out += ' ';
  out += to_string(d.severity);
  out += ' ';
  out += d.entity.empty() ? "-" : d.entity;
  out += ' ';
  if (d.location) {
    out += std::to_string(d.location->line);
    out += ':';
    out += std::to_string(d.location->col);
  } else {
    out += "-";
  }
  out += ' ';
  out += d.message;
  return out;
}

}  // namespace svsp
