#include "svsp/editor.hpp"

#include <algorithm>

#include "svsp/dsl.hpp"

namespace svsp {

std::string_view to_string(ChangeOp op) {
  switch (op) {
    case ChangeOp::Add: return "add";
    case ChangeOp::Replace: return "replace";
    case ChangeOp::Delete: return "delete";
  }
  return "?";
}

std::string_view to_string(ProposalStatus s) {
  switch (s) {
    case ProposalStatus::Pending: return "pending";
    case ProposalStatus::Committed: return "committed";
    case ProposalStatus::Abandoned: return "abandoned";
  }
  return "?";
}

std::string_view EditError::code() const {
  switch (kind_) {
    case Kind::NotConsistent: return "NotConsistent";
    case Kind::StaleProposal: return "StaleProposal";
    case Kind::UnknownProposal: return "UnknownProposal";
    case Kind::InconsistentBase: return "InconsistentSpec";
  }
  return "?";
}

namespace {

std::optional<DeclKind> parse_kind(std::string_view kind) {
  if (kind == "type") return DeclKind::Type;
  if (kind == "element") return DeclKind::Element;
  if (kind == "function") return DeclKind::Function;
  return std::nullopt;
}

}  // namespace

Change make_change(std::string_view op, std::string_view kind, std::string id,
                   std::string_view decl_text) {
  Change change;
  if (op == "add") {
    change.op = ChangeOp::Add;
  } else if (op == "replace") {
    change.op = ChangeOp::Replace;
  } else if (op == "delete") {
    change.op = ChangeOp::Delete;
  } else {
    throw ChangeError("unknown op '" + std::string(op) + "' (expected add, replace, or delete)");
  }
  const auto k = parse_kind(kind);
  if (!k) throw ChangeError("unknown kind '" + std::string(kind) + "' (expected type, element, or function)");
  change.kind = *k;
  change.id = std::move(id);

  if (change.op == ChangeOp::Delete) {
    if (change.id.empty()) throw ChangeError("delete requires an id");
    return change;
  }
  auto parsed = parse_spec(decl_text);
  if (!parsed.ok()) {
    std::string msg = "declaration does not parse";
    for (const auto& d : parsed.errors) msg += "; " + format_diagnostic_line(d);
    throw ChangeError(msg);
  }
  if (parsed.spec->declarations.size() != 1)
    throw ChangeError("expected exactly one declaration, found " +
                      std::to_string(parsed.spec->declarations.size()));
  Declaration decl = std::move(parsed.spec->declarations.front());
  if (decl_kind(decl) != change.kind)
    throw ChangeError("declaration is a " + std::string(to_string(decl_kind(decl))) + ", not a " +
                      std::string(kind));
  if (change.op == ChangeOp::Add) {
    if (!change.id.empty() && change.id != decl_id(decl))
      throw ChangeError("id '" + change.id + "' does not match the declared '" + decl_id(decl) + "'");
    change.id = decl_id(decl);
  } else if (change.id.empty()) {
    throw ChangeError("replace requires an id");
  }
  change.decl = std::move(decl);
  return change;
}

AppliedChange apply_change(const Specification& base, const Change& change) {
  AppliedChange out{base, {}};
  auto& decls = out.spec.declarations;
  if (change.op == ChangeOp::Add) {
    decls.push_back(*change.decl);
    return out;
  }
  auto target = std::find_if(decls.begin(), decls.end(), [&](const Declaration& d) {
    return decl_kind(d) == change.kind && decl_id(d) == change.id;
  });
  if (target == decls.end()) {
    out.diagnostics.push_back(Diagnostic::make(
        "E002", change.id,
        "no " + std::string(to_string(change.kind)) + " '" + change.id + "' to " +
            std::string(to_string(change.op))));
    return out;
  }
  if (change.op == ChangeOp::Replace) {
    *target = *change.decl;
  } else {
    decls.erase(target);
  }
  return out;
}

EditSession::EditSession(Specification base) : base_(std::move(base)) {
  if (!check_spec(base_).consistent)
    throw EditError(EditError::Kind::InconsistentBase, "the base specification is not consistent");
}

const Proposal& EditSession::propose(Change change) {
  AppliedChange applied = apply_change(base_, change);
  auto diags = check_spec(applied.spec).diagnostics;
  diags.insert(diags.end(), applied.diagnostics.begin(), applied.diagnostics.end());

  Entry entry;
  entry.proposal.id = "p" + std::to_string(next_id_++);
  entry.proposal.change = std::move(change);
  entry.proposal.report = make_report(std::move(diags));
  entry.proposal.base_version = version_;
  if (entry.proposal.report.consistent) entry.candidate = std::move(applied.spec);
  auto [it, _] = proposals_.emplace(entry.proposal.id, std::move(entry));
  return it->second.proposal;
}

EditSession::Entry& EditSession::pending_entry(std::string_view proposal_id) {
  auto it = proposals_.find(proposal_id);
  if (it == proposals_.end() || it->second.proposal.status != ProposalStatus::Pending)
    throw EditError(EditError::Kind::UnknownProposal,
                    "no pending proposal '" + std::string(proposal_id) + "'");
  return it->second;
}

const Specification& EditSession::commit(std::string_view proposal_id) {
  Entry& entry = pending_entry(proposal_id);
  if (entry.proposal.base_version != version_)
    throw EditError(EditError::Kind::StaleProposal,
                    "proposal " + entry.proposal.id + " was checked against an older specification");
  if (!entry.proposal.report.consistent)
    throw EditError(EditError::Kind::NotConsistent,
                    "proposal " + entry.proposal.id + " has " +
                        std::to_string(entry.proposal.report.error_count()) + " error(s)");
  base_ = std::move(*entry.candidate);
  ++version_;
  entry.proposal.status = ProposalStatus::Committed;
  for (auto& [id, other] : proposals_) other.candidate.reset();
  return base_;
}

void EditSession::abandon(std::string_view proposal_id) {
  Entry& entry = pending_entry(proposal_id);
  entry.proposal.status = ProposalStatus::Abandoned;
  entry.candidate.reset();
}

const Proposal* EditSession::find(std::string_view proposal_id) const {
  auto it = proposals_.find(proposal_id);
  return it == proposals_.end() ? nullptr : &it->second.proposal;
}

}  // namespace svsp
