#pragma once

// Exact rational arithmetic on top of GMP.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rwall {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p" or a finite decimal such as "0.3" into an exact rational.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

Rational pow(const Rational& base, unsigned exponent);

inline double to_double(const Rational& x) { return x.get_d(); }

/// "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& x);

}  // namespace rwall
