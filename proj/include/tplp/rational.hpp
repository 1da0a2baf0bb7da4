#ifndef TPLP_RATIONAL_HPP
#define TPLP_RATIONAL_HPP

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace tplp {

/// Exact probability values. Every probability in a program is held as a
/// GMP rational so LP feasibility never depends on rounding.
using Rational = boost::multiprecision::mpq_rational;

/// Parses "0.25", "1", "3/7". Decimal literals may carry at most
/// `max_fraction_digits` digits after the point.
std::optional<Rational> parse_rational(std::string_view text, int max_fraction_digits = 9);

/// Shortest decimal form when the value has at most 9 fractional digits,
/// otherwise "num/den".
std::string to_decimal_string(const Rational& r);

/// Always "num/den" (JSON wire form, e.g. "1/4", "0/1").
std::string to_fraction_string(const Rational& r);

double to_double(const Rational& r);

/// Exact conversion of a finite double.
Rational from_double(double d);

}  // namespace tplp

#endif
