#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace seqpack {

// All geometry and arithmetic in this library is exact. Rational is the one
// numeric type used for coordinates, coefficients and bounds; nothing is ever
// rounded except at the output boundary (decimal_string).
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

int sign(const Rational& r);

// Parses a decimal literal ("10", "-0.25", "1.5e2") into an exact rational,
// so "0.1" becomes exactly 1/10.
Rational rational_from_decimal(std::string_view text);

// Accepts either a decimal literal or an exact "p/q" fraction.
Rational rational_from_string(std::string_view text);

// Plain decimal representation with the given number of significant digits
// (round half away from zero), trailing zeros stripped. Never uses exponent
// notation.
std::string decimal_string(const Rational& r, int significant_digits = 12);

// Canonical exact form: "p/q", or just "p" when the denominator is 1.
std::string exact_string(const Rational& r);

double to_double(const Rational& r);

} // namespace seqpack
