#include "tplp/interval.hpp"

#include <algorithm>
#include <sstream>

namespace tplp {

std::ostream& operator<<(std::ostream& os, const ProbInterval& i) {
  return os << '[' << to_decimal_string(i.lo) << ", " << to_decimal_string(i.hi) << ']';
}

std::string to_string(const ProbInterval& i) {
  std::ostringstream os;
  os << i;
  return os.str();
}

bool leq_b(const ProbInterval& a, const ProbInterval& b) { return a.lo <= b.lo && a.hi <= b.hi; }

bool leq_k(const ProbInterval& a, const ProbInterval& b) { return a.lo <= b.lo && a.hi >= b.hi; }

ProbInterval meet_k(const ProbInterval& a, const ProbInterval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

ProbInterval join_k(const ProbInterval& a, const ProbInterval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

ProbInterval and_ig(const ProbInterval& a, const ProbInterval& b) {
  Rational lower = a.lo + b.lo - 1;
  return {std::max(Rational(0), lower), std::min(a.hi, b.hi)};
}

ProbInterval or_ig(const ProbInterval& a, const ProbInterval& b) {
  Rational upper = a.hi + b.hi;
  return {std::max(a.lo, b.lo), std::min(Rational(1), upper)};
}

bool is_consistent(const ProbInterval& i) { return i.lo <= i.hi; }

}  // namespace tplp
