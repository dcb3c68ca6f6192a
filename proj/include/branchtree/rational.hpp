#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace branchtree {

// All masses and costs are exact rationals. GMP keeps them canonical
// (reduced, positive denominator) through arithmetic.
using Rational = mpq_class;

// Parses "3", "-7/2" or a decimal string like "0.3" / "1.25e2" into an
// exact rational. Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

// GMP arithmetic and comparison assume canonical operands (reduced, positive
// denominator); values built as Rational(p, q) are not canonical until told
// so. Entry points below run inputs through this.
inline Rational canonical(Rational value) {
    value.canonicalize();
    return value;
}

// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

// Shortest decimal string that round-trips to the same double; used to
// turn floating-point inputs into the rational the user most likely meant.
std::string shortest_decimal(double value);

}  // namespace branchtree
