#include "tplp/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace tplp {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

boost::multiprecision::mpz_int parse_int(std::string_view s) {
  // A leading zero would select octal.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return boost::multiprecision::mpz_int(std::string(s));
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text, int max_fraction_digits) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    auto d = parse_int(den);
    if (d == 0) return std::nullopt;
    return Rational(parse_int(num), d);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    if (!all_digits(text)) return std::nullopt;
    return Rational(parse_int(text));
  }
  auto whole = text.substr(0, dot), frac = text.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
  if (static_cast<int>(frac.size()) > max_fraction_digits) return std::nullopt;
  boost::multiprecision::mpz_int den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  return Rational(parse_int(whole) * den + parse_int(frac), den);
}

std::string to_decimal_string(const Rational& r) {
  using boost::multiprecision::mpz_int;
  mpz_int num = boost::multiprecision::numerator(r);
  mpz_int den = boost::multiprecision::denominator(r);
  mpz_int scale = 1;
  int digits = 0;
  while (digits <= 9 && scale % den != 0) {
    scale *= 10;
    ++digits;
  }
  if (scale % den != 0) return to_fraction_string(r);
  bool negative = num < 0;
  if (negative) num = -num;
  mpz_int scaled = num * (scale / den);
  std::string s = scaled.str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
  }
  return negative ? "-" + s : s;
}

std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational from_double(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("from_double: non-finite value");
  return Rational(d);
}

}  // namespace tplp
