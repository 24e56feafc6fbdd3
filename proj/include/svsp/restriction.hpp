// Restriction algebra: membership, containment, emptiness, and Int
// normalization over the inequality / length constraints of data elements.

#pragma once

#include <string>
#include <utility>
#include <variant>

#include "svsp/model.hpp"

namespace svsp {

/// Returned instead of a boolean when a restriction and a value (or two
/// restrictions) apply to different base kinds.
struct KindMismatch {
  std::string detail;
};

/// Either a boolean answer or a KindMismatch.  Callers must distinguish a
/// type error from an ordinary "no".
class Verdict {
 public:
  Verdict(bool b) : v_(b) {}  // NOLINT(google-explicit-constructor)
  Verdict(KindMismatch e) : v_(std::move(e)) {}  // NOLINT

  [[nodiscard]] bool ok() const { return std::holds_alternative<bool>(v_); }
  [[nodiscard]] bool value() const { return std::get<bool>(v_); }
  [[nodiscard]] const KindMismatch& error() const { return std::get<KindMismatch>(v_); }

  /// True only for a well-kinded "yes".
  [[nodiscard]] bool holds() const { return ok() && value(); }

 private:
  std::variant<bool, KindMismatch> v_;
};

/// Numeric domain used when comparing ranges.
enum class NumericDomain { Int, Real };

/// Domain implied by the literals of a range: Real if any bound is Real.
[[nodiscard]] NumericDomain implied_domain(const NumericRange& r);

/// Int-kind normalization: strict bounds become inclusive (x > 3 => x >= 4),
/// Real-valued bounds are rounded inward.  Never changes the admitted set of
/// integers.  The result holds only std::int64_t bounds.
[[nodiscard]] NumericRange normalize_int(const NumericRange& r);

/// The range [v, v].
[[nodiscard]] Restriction point_restriction(const Value& v);

/// Whether a restriction may apply to elements of the given kind.
[[nodiscard]] bool restriction_fits_kind(const Restriction& r, ElementKind kind);

/// True iff `v` satisfies every bound of `r`.
[[nodiscard]] Verdict restriction_admits(const Restriction& r, const Value& v);

/// True iff the restriction admits no value at all in `domain` (the domain is
/// ignored for string restrictions).
[[nodiscard]] bool restriction_is_empty(const Restriction& r, NumericDomain domain);
[[nodiscard]] bool restriction_is_empty(const Restriction& r);

/// True iff every value admitted by `inner` is admitted by `outer`.
[[nodiscard]] Verdict restriction_contains(const Restriction& outer, const Restriction& inner,
                                           NumericDomain domain);
/// As above, with the domain taken from the literals of both restrictions.
[[nodiscard]] Verdict restriction_contains(const Restriction& outer, const Restriction& inner);

/// Number of Unicode code points in a UTF-8 string.
[[nodiscard]] std::int64_t utf8_length(std::string_view s);

}  // namespace svsp
