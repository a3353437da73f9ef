#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sforest {

// All costs, times, duals and budgets in the pipeline are exact rationals.
// Event ordering in the moat engine is decided by comparisons of derived
// quantities, so nothing may ever be rounded.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denom(const Rational& r) { return boost::multiprecision::denominator(r); }

// Parses "p/q", "p", or a decimal literal like "3.25" (converted exactly,
// i.e. 325/100 reduced). Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

// "p" when the denominator is 1, else "p/q" in lowest terms.
std::string fraction_str(const Rational& r);

// Decimal approximation rounded to `sig` significant digits. Marked
// approximate wherever it appears in machine output.
std::string decimal_str(const Rational& r, int sig = 12);

}  // namespace sforest
