#ifndef TPLP_PSAT_HPP
#define TPLP_PSAT_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "tplp/core.hpp"
#include "tplp/grounder.hpp"
#include "tplp/interval.hpp"
#include "tplp/parser.hpp"
#include "tplp/world.hpp"

namespace tplp {

enum class LpMode { Exact, Float };

struct SolveOptions {
  /// Strict violations "Pr(F) outside [a,b]" are encoded as Pr(F) <= a - eps or >= b + eps.
  Rational epsilon{1, 1000000};
  std::size_t max_world_atoms = 16;
  LpMode lp_mode = LpMode::Exact;
  /// Worker threads for independent branch LPs.
  unsigned threads = 1;
  /// Sweep cap of the maximum-entropy solver.
  std::size_t max_entropy_iterations = 100000;
};

/// Which disjunct of a clause's satisfaction condition a branch commits to:
/// the head interval holds, or body conjunct `conjunct` lies strictly below
/// or above its interval.
struct BranchChoice {
  enum class Kind { HeadIn, BodyLow, BodyHigh };
  Kind kind = Kind::HeadIn;
  std::size_t conjunct = 0;

  friend bool operator==(const BranchChoice&, const BranchChoice&) = default;
};

using Branch = std::vector<BranchChoice>;

enum class Verdict { Consistent, Inconsistent, UnknownEps };

const char* verdict_name(Verdict v);

struct ConsistencyResult {
  Verdict verdict = Verdict::Inconsistent;
  std::optional<WorldDistribution> witness;
  std::optional<Branch> branch;
  /// Complete branches whose LP was solved.
  std::size_t branch_count = 0;
};

struct TightenResult {
  ProbInterval interval;
  std::size_t feasible_branches = 0;
  std::size_t branch_count = 0;
};

struct EntailmentResult {
  struct AtTime {
    TimePoint time;
    BasicFormula formula;
    ProbInterval entailed;  // tightest interval
    ProbInterval required;  // query interval at this time
    bool holds = false;
  };
  bool entailed = true;
  std::vector<AtTime> per_time;
  std::vector<Diagnostic> warnings;
  std::size_t branch_count = 0;
};

/// Interval constraints on formula masses that one branch imposes. Bounds
/// are kept per distinct formula; an empty map constrains nothing.
struct BranchConstraints {
  std::map<std::size_t, ProbInterval> bounds;  // formula id -> [lower, upper]

  /// Intersects; returns false once some formula's bounds become empty.
  bool tighten(std::size_t formula, const Rational& lo, const Rational& hi);
  friend bool operator==(const BranchConstraints&, const BranchConstraints&) = default;
};

/// A p-program prepared for interval PSAT over its possible worlds.
///
/// Every distinct formula of the program (and any extra formula such as a
/// query) is interned once; its satisfying worlds become one LP row.
class PsatEngine {
public:
  PsatEngine(const PProgram& pp, SolveOptions opts, const std::vector<BasicFormula>& extra_formulas = {});

  const HerbrandBase& base() const { return base_; }
  std::size_t world_count() const { return std::size_t{1} << base_.size(); }
  std::size_t formula_id(const BasicFormula& f) const;
  const SolveOptions& options() const { return opts_; }

  ConsistencyResult check_consistency() const;
  TightenResult tighten(const BasicFormula& f) const;

  struct Leaf {
    Branch branch;
    BranchConstraints constraints;
  };
  /// Every complete branch with a feasible LP, in deterministic order,
  /// skipping branches whose constraints repeat an earlier leaf.
  std::vector<Leaf> feasible_leaves(const Rational& epsilon, std::size_t* solved = nullptr) const;

  /// Feasibility of the constraints; returns the witness when feasible.
  std::optional<WorldDistribution> solve_feasible(const BranchConstraints& c) const;
  /// min (or max) of the mass of `formula` subject to c; nullopt if infeasible.
  std::optional<Rational> optimize(const BranchConstraints& c, std::size_t formula, bool maximize) const;

  /// Worlds (as indices) satisfying the interned formula.
  const std::vector<std::uint32_t>& satisfying_worlds(std::size_t formula) const { return sat_[formula]; }
  std::size_t formula_count() const { return formulas_.size(); }
  const BasicFormula& formula(std::size_t id) const { return formulas_[id]; }

  WorldDistribution to_distribution(const std::vector<Rational>& p) const;

private:
  struct ClauseRef {
    std::size_t head;
    ProbInterval head_interval;
    std::vector<std::pair<std::size_t, ProbInterval>> body;
  };

  std::size_t intern(const BasicFormula& f);
  std::vector<BranchChoice> options_for(std::size_t clause, const Rational& epsilon) const;
  bool apply(BranchConstraints& c, std::size_t clause, const BranchChoice& choice, const Rational& epsilon) const;
  void compute_implied_bounds();
  bool lp_feasible(const BranchConstraints& c) const;

  template <class Visitor>
  void search(const Rational& epsilon, Visitor&& visit, std::size_t* solved) const;

  SolveOptions opts_;
  HerbrandBase base_;
  std::vector<BasicFormula> formulas_;
  std::map<BasicFormula, std::size_t, bool (*)(const BasicFormula&, const BasicFormula&)> ids_{formula_less};
  std::vector<std::vector<std::uint32_t>> sat_;
  std::vector<ClauseRef> clauses_;
  std::vector<ProbInterval> implied_;  // per formula, from facts alone
};

/// Pointwise satisfaction of every p-clause (exact, no epsilon).
bool ki_satisfies(const PProgram& pp, const WorldDistribution& ki);
bool ki_satisfies(const PClause& c, const WorldDistribution& ki, const HerbrandBase& base);

/// Satisfaction of a ground PT-program directly by its tp-annotations,
/// over the given base (no unfolding involved).
bool ki_satisfies(const PTProgram& ground, const WorldDistribution& ki, const HerbrandBase& base);

/// True when no atom of f occurs in base. In every model of a consistent
/// program such a formula can take any mass, so its tightest interval is
/// [0,1] and it need not enlarge the world space.
bool outside_base(const BasicFormula& f, const HerbrandBase& base);

ConsistencyResult check_consistency(const PProgram& pp, const SolveOptions& opts = {});

/// Tightest [min, max] of f's mass over all models. Throws InconsistentProgram.
TightenResult tighten(const PProgram& pp, const BasicFormula& f, const SolveOptions& opts = {});

/// Checks an ENTAIL query at every point of its constraint's solution set.
EntailmentResult entails(const PProgram& pp, const Query& q, const Calendar& cal, const SolveOptions& opts = {});

}  // namespace tplp

#endif
