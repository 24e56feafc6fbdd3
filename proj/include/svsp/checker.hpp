// Static consistency analysis of a Specification.
//
// check_spec runs, in order: uniqueness, reference existence, restriction
// well-formedness and agreement, transform typing, status flow, and unused
// entity warnings.  Entities flagged by the uniqueness or existence phases
// are skipped by the later phases so that one defect yields one finding.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "svsp/diagnostic.hpp"
#include "svsp/model.hpp"

namespace svsp {

struct CheckReport {
  std::vector<Diagnostic> diagnostics;  // sorted: location, then code
  std::map<std::string, int> summary;   // count per code
  bool consistent = true;               // no Error-severity diagnostics

  [[nodiscard]] int error_count() const;
  [[nodiscard]] int warning_count() const;
};

[[nodiscard]] CheckReport make_report(std::vector<Diagnostic> diagnostics);

[[nodiscard]] CheckReport check_spec(const Specification& spec);

/// E003/E005/E007 findings for element and effect-level restrictions.
[[nodiscard]] std::vector<Diagnostic> check_restriction_agreement(const Specification& spec);

/// Simulates guaranteed statuses through the function's effects in order.
/// The entry status of each parameter is the pre of the first effect that
/// mentions it, or the element's init otherwise.
[[nodiscard]] std::vector<Diagnostic> check_status_flow(const FunctionSpec& fn,
                                                        const Specification& spec);

/// Same analysis with caller-supplied entry statuses for the listed
/// parameters (e.g. the actual statuses of a scenario store).
[[nodiscard]] std::vector<Diagnostic> check_status_flow(
    const FunctionSpec& fn, const Specification& spec,
    const std::map<std::string, Status>& entry_statuses);

[[nodiscard]] std::vector<Diagnostic> check_transform_types(const FunctionSpec& fn,
                                                            const Specification& spec);

}  // namespace svsp
