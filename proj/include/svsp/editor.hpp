// Check-gated editing: every change is proposed, checked against the
// current base specification, and only then committed.
//
// Invariant: an EditSession's base specification is consistent at every
// moment.  Failed operations leave the base untouched.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "svsp/checker.hpp"
#include "svsp/model.hpp"

namespace svsp {

enum class ChangeOp : std::uint8_t { Add, Replace, Delete };

[[nodiscard]] std::string_view to_string(ChangeOp op);

/// One edit.  `kind` is Type, Element, or Function.  `decl` is present for
/// Add and Replace; `id` names the target of Replace and Delete.
struct Change {
  ChangeOp op = ChangeOp::Add;
  DeclKind kind = DeclKind::Element;
  std::string id;
  std::optional<Declaration> decl;
};

/// Malformed change description (bad op/kind, declaration text that does
/// not parse to exactly one declaration of the stated kind).
class ChangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds a Change from its textual fields; `decl_text` is DSL source of a
/// single declaration.  Throws ChangeError.
[[nodiscard]] Change make_change(std::string_view op, std::string_view kind, std::string id,
                                 std::string_view decl_text);

enum class ProposalStatus : std::uint8_t { Pending, Committed, Abandoned };

[[nodiscard]] std::string_view to_string(ProposalStatus s);

struct Proposal {
  std::string id;
  Change change;
  CheckReport report;  // of the hypothetical post-change specification
  ProposalStatus status = ProposalStatus::Pending;
  std::uint64_t base_version = 0;
};

class EditError : public std::runtime_error {
 public:
  enum class Kind : std::uint8_t { NotConsistent, StaleProposal, UnknownProposal, InconsistentBase };

  EditError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string_view code() const;

 private:
  Kind kind_;
};

class EditSession {
 public:
  /// Throws EditError(InconsistentBase) unless `base` checks consistent.
  explicit EditSession(Specification base);

  [[nodiscard]] const Specification& base() const { return base_; }
  /// Incremented by every commit.
  [[nodiscard]] std::uint64_t version() const { return version_; }

  /// Checks base+change without touching the base.  Replace or Delete of a
  /// missing target yields a report carrying E002 on that id.
  const Proposal& propose(Change change);

  /// Replaces the base with the proposal's candidate.  Throws
  /// UnknownProposal, StaleProposal, or NotConsistent.
  const Specification& commit(std::string_view proposal_id);

  /// Throws UnknownProposal unless the proposal is Pending.
  void abandon(std::string_view proposal_id);

  [[nodiscard]] const Proposal* find(std::string_view proposal_id) const;

 private:
  struct Entry {
    Proposal proposal;
    std::optional<Specification> candidate;  // dropped once no longer committable
  };

  Entry& pending_entry(std::string_view proposal_id);

  Specification base_;
  std::uint64_t version_ = 0;
  std::uint64_t next_id_ = 1;
  std::map<std::string, Entry, std::less<>> proposals_;
};

/// The hypothetical specification `base` + `change`, plus any diagnostics
/// about the change itself (E002 for a missing Replace/Delete target).
struct AppliedChange {
  Specification spec;
  std::vector<Diagnostic> diagnostics;
};

[[nodiscard]] AppliedChange apply_change(const Specification& base, const Change& change);

}  // namespace svsp
