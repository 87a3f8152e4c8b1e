#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace advlin {

// Arbitrary-precision exact rational. Backed by Boost.Multiprecision's
// cpp_rational, which keeps gcd(|num|, den) = 1 and den > 0 after every
// operation; only parsing/formatting helpers are added here.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parse "3/2", "-1/1000000", "7", "0.001", "-1.5".
Rational parse_rational(std::string_view text);

/// "num/den", or just "num" when den == 1.
std::string rational_to_string(const Rational& r);

double rational_to_double(const Rational& r);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational rational_from_double(double v);

/// Smallest integer >= r.
BigInt rational_ceil(const Rational& r);

}  // namespace advlin
