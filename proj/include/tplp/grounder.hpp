#ifndef TPLP_GROUNDER_HPP
#define TPLP_GROUNDER_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "tplp/core.hpp"
#include "tplp/interval.hpp"

namespace tplp {

enum class GroundingMode { Full, Relevant };

/// Ground instances of every clause. Object variables range over the
/// program's constants and independent temporal variables over the
/// calendar, so every constraint of the result is normal.
///
/// Relevant mode keeps an instance only if each body atom's signature
/// (predicate and object arguments, time ignored) is produced by the head of
/// some kept instance. Clauses written without variables are always kept.
///
/// Throws UniverseEmpty when a clause has object variables but the program
/// has no constants, and GroundingError when a grounded annotation is
/// ill-formed (e.g. a weight list no longer matches its solution set).
PTProgram ground_program(const PTProgram& p, GroundingMode mode);

/// A conjunct of an unfolded body: a ground basic formula and its interval.
struct PConjunct {
  BasicFormula formula;
  ProbInterval interval;

  friend bool operator==(const PConjunct&, const PConjunct&) = default;
};

/// Ground clause with constant-interval annotations.
struct PClause {
  TAtom head;
  ProbInterval head_interval;
  std::vector<PConjunct> body;

  bool is_fact() const { return body.empty(); }
  friend bool operator==(const PClause&, const PClause&) = default;
};

/// Ground atoms in canonical order. An atom's position is its bit in a world.
class HerbrandBase {
public:
  HerbrandBase() = default;
  /// Sorts and deduplicates.
  explicit HerbrandBase(std::vector<TAtom> atoms);

  const std::vector<TAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const TAtom& operator[](std::size_t i) const { return atoms_[i]; }
  std::optional<std::size_t> index_of(const TAtom& a) const;

  /// This base plus the given atoms, re-sorted.
  HerbrandBase extended(const std::vector<TAtom>& more) const;

  friend bool operator==(const HerbrandBase& a, const HerbrandBase& b) { return a.atoms_ == b.atoms_; }

private:
  std::vector<TAtom> atoms_;
  std::map<TAtom, std::size_t, AtomLess> index_;
};

struct PProgram {
  std::vector<PClause> clauses;
  HerbrandBase base;
};

/// Expands each tp-clause into one p-clause per head solution point; each
/// body conjunct is expanded over its own solution set. `warnings` receives
/// a note for clauses whose head constraint has no solution.
PProgram unfold(const PTProgram& ground, std::vector<Diagnostic>* warnings = nullptr);

/// Atoms occurring in pp, canonically ordered. Throws BaseTooLarge above `cap`.
HerbrandBase herbrand_base(const PProgram& pp, std::size_t cap = std::numeric_limits<std::size_t>::max());

/// Writes an unfolded program back as a PT-program: every formula becomes
/// `F@Y : <Y=t, [lo], [hi]>`.
PTProgram to_pt_program(const PProgram& pp, const Calendar& calendar);

}  // namespace tplp

#endif
