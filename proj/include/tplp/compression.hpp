#ifndef TPLP_COMPRESSION_HPP
#define TPLP_COMPRESSION_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tplp/core.hpp"
#include "tplp/grounder.hpp"
#include "tplp/parser.hpp"
#include "tplp/world.hpp"

namespace tplp {

/// A ground atom with its temporal position stripped: r(d).
struct CompressedAtom {
  std::string predicate;
  std::vector<std::string> args;

  /// r(d)@t
  TAtom at(TimePoint t) const;
  static CompressedAtom of(const TAtom& ground);

  friend auto operator<=>(const CompressedAtom&, const CompressedAtom&) = default;
};

std::string to_string(const CompressedAtom& a);

/// Duplicate-free, ordered set of compressed atoms; positions index the
/// bits of a world over the compressed base.
class CompressedBase {
public:
  CompressedBase() = default;
  explicit CompressedBase(std::vector<CompressedAtom> atoms);
  /// Time-stripped atoms of a Herbrand base.
  static CompressedBase of(const HerbrandBase& base);

  const std::vector<CompressedAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const CompressedAtom& operator[](std::size_t i) const { return atoms_[i]; }
  std::optional<std::size_t> index_of(const CompressedAtom& a) const;

  friend bool operator==(const CompressedBase& a, const CompressedBase& b) { return a.atoms_ == b.atoms_; }

private:
  std::vector<CompressedAtom> atoms_;
};

/// Every r(d)@t for r(d) in the compressed base and t in the calendar.
HerbrandBase flattened_base(const CompressedBase& base, const Calendar& cal);

/// th: compressed atom -> the time points at which it is true.
struct Thread {
  std::map<CompressedAtom, std::set<TimePoint>> times;

  friend auto operator<=>(const Thread&, const Thread&) = default;
};

using ThreadDistribution = std::map<Thread, Rational>;

/// th(r(d)) = {t | r(d)@t true in w}; the domain is every compressed atom
/// of `base`. Throws TimePointOutsideCalendar for base atoms off the calendar.
Thread compress(const World& w, const HerbrandBase& base, const Calendar& cal);

/// Inverse of compress onto flattened_base(domain of th, cal).
World flatten(const Thread& th, const Calendar& cal);

/// Pushes a world distribution through compress, summing equal threads.
ThreadDistribution compress(const WorldDistribution& ki, const HerbrandBase& base, const Calendar& cal);

/// Total mass of the threads whose set for `atom` contains t.
Rational thread_prob(const ThreadDistribution& kt, const CompressedAtom& atom, TimePoint t);

/// Identifies a basic formula of a skeleton: `clause` is 0-based, position
/// 0 is the head and k >= 1 the k-th body conjunct. The text form is
/// "clause.position" with a 1-based clause number.
struct FormulaId {
  std::size_t clause = 0;
  std::size_t position = 0;

  friend auto operator<=>(const FormulaId&, const FormulaId&) = default;
};

std::string to_string(const FormulaId& id);
std::optional<FormulaId> parse_formula_id(std::string_view text);

/// Per formula, its interval at each time of the evolution window.
using SliceTable = std::map<FormulaId, std::map<TimePoint, ProbInterval>>;

/// Reads CSV rows `formula_id,time,lo,hi`; a header row is skipped.
/// Appends problems to `diagnostics` and returns nullopt on any error.
std::optional<SliceTable> parse_slice_csv(std::string_view text, std::vector<Diagnostic>& diagnostics);

/// Rewrites every formula F of the skeleton as
/// F@Y : <Y : t1 ~ tN, [a1,...,aN], [b1,...,bN]> (or <Y = t1, ...> when N = 1).
/// Throws MissingTimeSlice when some formula lacks an interval at some t in
/// delta, and Error when delta is empty, not contiguous, or off the calendar.
PTProgram build_evolution_program(const ProgramSkeleton& skeleton, const SliceTable& slices,
                                  const std::vector<TimePoint>& delta);

/// PI: a distribution over worlds of the compressed base for each time in
/// the evolution window.
struct EvolutionProfile {
  CompressedBase base;
  std::vector<TimePoint> interval;
  std::map<TimePoint, WorldDistribution> dists;
};

/// A world of the compressed base observed at one time.
struct TaggedWorld {
  TimePoint time;
  World assignment;

  friend bool operator<(const TaggedWorld& a, const TaggedWorld& b) {
    return a.time != b.time ? a.time < b.time : a.assignment < b.assignment;
  }
};

/// DI(t, J) = PI(t)(J) / |calendar|.
std::map<TaggedWorld, Rational> tagged_distribution(const EvolutionProfile& pi, const Calendar& cal);

/// KI over flattened_base(pi.base, cal): each tagged world (t, J) adds
/// PI(t)(J) / |calendar| to the world whose true atoms are r(d)@t with
/// J(r(d)) = 1. All-false assignments from every t meet on the empty world.
WorldDistribution evolution_distribution(const EvolutionProfile& pi, const Calendar& cal);

enum class VerifyMode { Literal, Conditional };

struct SliceCheck {
  std::size_t clause = 0;  // index into the (ground) evolution program
  std::size_t position = 0;
  BasicFormula formula;  // instantiated at `time`
  TimePoint time;
  Rational mass;
  ProbInterval required;
  bool pass = false;
};

struct EvolutionReport {
  VerifyMode mode = VerifyMode::Literal;
  std::vector<SliceCheck> checks;
  bool all_pass = true;
  /// Literal mode only: whether KI satisfies the unfolded evolution program.
  std::optional<bool> program_satisfied;
};

/// Measures every annotated formula of p_delta at every time of its window.
/// Literal: the mass of F(t) under KI. Conditional: |calendar| times the
/// mass of the tagged worlds at time t satisfying F, i.e. PI(t)'s own mass.
/// Discrepancies are reported, never thrown.
EvolutionReport verify_evolution(const EvolutionProfile& pi, const PTProgram& p_delta, VerifyMode mode);

/// The p-program of one time slice: the skeleton instantiated at t with the
/// table's intervals at t. Throws MissingTimeSlice.
PProgram slice_program(const ProgramSkeleton& skeleton, const SliceTable& slices, TimePoint t);

}  // namespace tplp

#endif
