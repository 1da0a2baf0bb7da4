#ifndef TPLP_INTERVAL_HPP
#define TPLP_INTERVAL_HPP

#include <ostream>
#include <string>

#include "tplp/rational.hpp"

namespace tplp {

/** A closed probability interval [lo, hi] with both ends in [0,1].

    `lo > hi` is representable on purpose: the knowledge join can produce
    such intervals and they are kept as values rather than clamped. Use
    is_consistent() to ask whether an interval denotes any probability. */
struct ProbInterval {
  Rational lo{0};
  Rational hi{1};

  ProbInterval() = default;
  ProbInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

  static ProbInterval point(const Rational& p) { return {p, p}; }

  bool contains(const Rational& p) const { return lo <= p && p <= hi; }

  friend bool operator==(const ProbInterval&, const ProbInterval&) = default;
};

std::ostream& operator<<(std::ostream& os, const ProbInterval& i);
std::string to_string(const ProbInterval& i);

// Belief ordering: both bounds grow.
bool leq_b(const ProbInterval& a, const ProbInterval& b);
// Knowledge ordering: the interval narrows. [0,1] is the bottom.
bool leq_k(const ProbInterval& a, const ProbInterval& b);

/// Knowledge meet: [min lo, max hi].
ProbInterval meet_k(const ProbInterval& a, const ProbInterval& b);
/// Knowledge join: [max lo, min hi]. May be inconsistent.
ProbInterval join_k(const ProbInterval& a, const ProbInterval& b);

/// Conjunction under total ignorance of the dependency (Frechet bounds).
ProbInterval and_ig(const ProbInterval& a, const ProbInterval& b);
/// Disjunction under total ignorance of the dependency.
ProbInterval or_ig(const ProbInterval& a, const ProbInterval& b);

bool is_consistent(const ProbInterval& i);

}  // namespace tplp

#endif
