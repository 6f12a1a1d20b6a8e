#pragma once

// Exact rational arithmetic. Every predicate in the library compares values of
// this type; no floating point is involved anywhere.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace nodal {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Parses "p/q" or "p" (optional leading '-'); q must be positive.
/// The result is normalized. Throws Error{Errc::parse_error}.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text with q > 0 and gcd(p, q) = 1; integers print as "p/1".
std::string format_rational(const Rational& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& value) {
  return boost::multiprecision::numerator(value);
}

inline BigInt denominator_of(const Rational& value) {
  return boost::multiprecision::denominator(value);
}

}  // namespace nodal
