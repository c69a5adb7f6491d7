#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace moduli {

using Rational = mpq_class;
using Integer = mpz_class;

/// p/q in lowest terms. The two-argument mpq_class constructor does not reduce.
inline Rational ratio(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws Error(ParseError).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);
bool is_integer(const Rational& r);

/// Fractional part in [0, 1).
Rational frac(const Rational& r);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

long to_long(const Integer& z);

}  // namespace moduli
