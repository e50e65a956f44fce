#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace dynmatch {

// Utilities, discount factors and discounted payoffs are exact rationals so
// that stability predicates and payoff comparisons never depend on rounding.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rational_pow(const Rational& base, unsigned exp) {
  Rational acc = 1;
  Rational b = base;
  while (exp > 0) {
    if (exp & 1u) acc *= b;
    b *= b;
    exp >>= 1u;
  }
  return acc;
}

inline long double to_long_double(const Rational& r) {
  return r.convert_to<long double>();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p", "p/q" or a plain decimal such as "-0.25" into an exact rational.
std::optional<Rational> parse_rational(const std::string& text);

/// Canonical exact form: "p" when the denominator is 1, else "p/q".
std::string rational_to_string(const Rational& r);

/// Decimal rendering with 5 significant digits, for human-facing reports.
std::string rational_to_decimal(const Rational& r);

}  // namespace dynmatch
