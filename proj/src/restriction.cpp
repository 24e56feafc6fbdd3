#include "svsp/restriction.hpp"

#include <cmath>
#include <limits>

namespace svsp {

namespace {

using Int = std::int64_t;

constexpr Int kIntMin = std::numeric_limits<Int>::min();
constexpr Int kIntMax = std::numeric_limits<Int>::max();

bool is_real(const Value& v) { return std::holds_alternative<double>(v); }

long double as_number(const Value& v) {
  if (const auto* i = std::get_if<Int>(&v)) return static_cast<long double>(*i);
  return static_cast<long double>(std::get<double>(v));
}

// -1, 0, 1; both values numeric.
int compare_numbers(const Value& a, const Value& b) {
  if (const auto* ia = std::get_if<Int>(&a)) {
    if (const auto* ib = std::get_if<Int>(&b)) return *ia < *ib ? -1 : (*ia > *ib ? 1 : 0);
  }
  const long double x = as_number(a);
  const long double y = as_number(b);
  return x < y ? -1 : (x > y ? 1 : 0);
}

Int clamp_to_int(long double d) {
  if (d <= static_cast<long double>(kIntMin)) return kIntMin;
  if (d >= static_cast<long double>(kIntMax)) return kIntMax;
  return static_cast<Int>(d);
}

std::optional<Bound> normalize_lower(const std::optional<Bound>& b) {
  if (!b) return std::nullopt;
  if (const auto* i = std::get_if<Int>(&b->value)) {
    if (b->inclusive) return Bound{*i, true};
    return Bound{*i == kIntMax ? kIntMax : *i + 1, true};
  }
  const long double d = std::get<double>(b->value);
  const long double r = b->inclusive ? std::ceil(d) : std::floor(d) + 1;
  return Bound{clamp_to_int(r), true};
}

std::optional<Bound> normalize_upper(const std::optional<Bound>& b) {
  if (!b) return std::nullopt;
  if (const auto* i = std::get_if<Int>(&b->value)) {
    if (b->inclusive) return Bound{*i, true};
    return Bound{*i == kIntMin ? kIntMin : *i - 1, true};
  }
  const long double d = std::get<double>(b->value);
  const long double r = b->inclusive ? std::floor(d) : std::ceil(d) - 1;
  return Bound{clamp_to_int(r), true};
}

bool range_is_empty(const NumericRange& r, NumericDomain domain) {
  if (domain == NumericDomain::Int) {
    const NumericRange n = normalize_int(r);
    if (!n.lower || !n.upper) return false;
    return std::get<Int>(n.lower->value) > std::get<Int>(n.upper->value);
  }
  if (!r.lower || !r.upper) return false;
  const int c = compare_numbers(r.lower->value, r.upper->value);
  if (c > 0) return true;
  if (c == 0) return !(r.lower->inclusive && r.upper->inclusive);
  return false;
}

bool length_is_empty(const StringLength& s) {
  return s.max && (*s.max < s.min || *s.max < 0);
}

// Is the lower bound `inner` at least as tight as `outer`?
bool lower_within(const std::optional<Bound>& outer, const std::optional<Bound>& inner) {
  if (!outer) return true;
  if (!inner) return false;
  const int c = compare_numbers(inner->value, outer->value);
  if (c != 0) return c > 0;
  return outer->inclusive || !inner->inclusive;
}

bool upper_within(const std::optional<Bound>& outer, const std::optional<Bound>& inner) {
  if (!outer) return true;
  if (!inner) return false;
  const int c = compare_numbers(inner->value, outer->value);
  if (c != 0) return c < 0;
  return outer->inclusive || !inner->inclusive;
}

bool range_contains(const NumericRange& outer, const NumericRange& inner, NumericDomain domain) {
  if (range_is_empty(inner, domain)) return true;
  if (domain == NumericDomain::Int) {
    const NumericRange o = normalize_int(outer);
    const NumericRange i = normalize_int(inner);
    return lower_within(o.lower, i.lower) && upper_within(o.upper, i.upper);
  }
  return lower_within(outer.lower, inner.lower) && upper_within(outer.upper, inner.upper);
}

bool length_contains(const StringLength& outer, const StringLength& inner) {
  if (length_is_empty(inner)) return true;
  if (inner.min < outer.min) return false;
  if (!outer.max) return true;
  return inner.max && *inner.max <= *outer.max;
}

bool range_is_full(const NumericRange& r) { return !r.lower && !r.upper; }
bool length_is_full(const StringLength& s) { return s.min <= 0 && !s.max; }

bool has_real_bound(const NumericRange& r) {
  return (r.lower && is_real(r.lower->value)) || (r.upper && is_real(r.upper->value));
}

}  // namespace

NumericDomain implied_domain(const NumericRange& r) {
  return has_real_bound(r) ? NumericDomain::Real : NumericDomain::Int;
}

NumericRange normalize_int(const NumericRange& r) {
  return NumericRange{normalize_lower(r.lower), normalize_upper(r.upper)};
}

Restriction point_restriction(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) {
    const Int n = utf8_length(*s);
    return StringLength{n, n};
  }
  return NumericRange{Bound{v, true}, Bound{v, true}};
}

bool restriction_fits_kind(const Restriction& r, ElementKind kind) {
  if (is_unrestricted(r)) return true;
  if (std::holds_alternative<NumericRange>(r)) return is_numeric(kind);
  return kind == ElementKind::String;
}

Verdict restriction_admits(const Restriction& r, const Value& v) {
  if (is_unrestricted(r)) return true;
  if (const auto* range = std::get_if<NumericRange>(&r)) {
    if (std::holds_alternative<std::string>(v))
      return KindMismatch{"string value checked against a numeric range"};
    if (range->lower) {
      const int c = compare_numbers(v, range->lower->value);
      if (c < 0 || (c == 0 && !range->lower->inclusive)) return false;
    }
    if (range->upper) {
      const int c = compare_numbers(v, range->upper->value);
      if (c > 0 || (c == 0 && !range->upper->inclusive)) return false;
    }
    return true;
  }
  const auto& len = std::get<StringLength>(r);
  const auto* s = std::get_if<std::string>(&v);
  if (s == nullptr) return KindMismatch{"numeric value checked against a length restriction"};
  const Int n = utf8_length(*s);
  return n >= len.min && (!len.max || n <= *len.max);
}

bool restriction_is_empty(const Restriction& r, NumericDomain domain) {
  if (const auto* range = std::get_if<NumericRange>(&r)) return range_is_empty(*range, domain);
  if (const auto* len = std::get_if<StringLength>(&r)) return length_is_empty(*len);
  return false;
}

bool restriction_is_empty(const Restriction& r) {
  if (const auto* range = std::get_if<NumericRange>(&r))
    return range_is_empty(*range, implied_domain(*range));
  return restriction_is_empty(r, NumericDomain::Real);
}

Verdict restriction_contains(const Restriction& outer, const Restriction& inner,
                             NumericDomain domain) {
  if (is_unrestricted(outer)) return true;
  if (is_unrestricted(inner)) {
    if (const auto* range = std::get_if<NumericRange>(&outer)) return range_is_full(*range);
    return length_is_full(std::get<StringLength>(outer));
  }
  const auto* orange = std::get_if<NumericRange>(&outer);
  const auto* irange = std::get_if<NumericRange>(&inner);
  if (orange && irange) return range_contains(*orange, *irange, domain);
  const auto* olen = std::get_if<StringLength>(&outer);
  const auto* ilen = std::get_if<StringLength>(&inner);
  if (olen && ilen) return length_contains(*olen, *ilen);
  return KindMismatch{"numeric range compared with a length restriction"};
}

Verdict restriction_contains(const Restriction& outer, const Restriction& inner) {
  bool real = false;
  if (const auto* r = std::get_if<NumericRange>(&outer)) real = real || has_real_bound(*r);
  if (const auto* r = std::get_if<NumericRange>(&inner)) real = real || has_real_bound(*r);
  return restriction_contains(outer, inner, real ? NumericDomain::Real : NumericDomain::Int);
}

std::int64_t utf8_length(std::string_view s) {
  std::int64_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0U) != 0x80U) ++n;
  return n;
}

}  // namespace svsp
