#ifndef TPLP_CORE_HPP
#define TPLP_CORE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tplp/diagnostics.hpp"
#include "tplp/interval.hpp"
#include "tplp/rational.hpp"

namespace tplp {

/// An instant of the calendar. Granularity is left to the program author.
struct TimePoint {
  std::int64_t value = 0;

  constexpr TimePoint() = default;
  constexpr explicit TimePoint(std::int64_t v) : value(v) {}
  friend constexpr auto operator<=>(const TimePoint&, const TimePoint&) = default;
};

std::ostream& operator<<(std::ostream& os, TimePoint t);

/// The finite, strictly increasing set of valid time points.
struct Calendar {
  std::vector<TimePoint> points;
  std::string name = "calendar";

  /// Contiguous range first..last (inclusive).
  static Calendar range(std::int64_t first, std::int64_t last);

  bool contains(TimePoint t) const;
  std::size_t size() const { return points.size(); }
  /// Position of t within the calendar; nullopt when t is not a member.
  std::optional<std::size_t> index_of(TimePoint t) const;
  /// True when the points form one contiguous integer run.
  bool contiguous() const;

  friend bool operator==(const Calendar&, const Calendar&) = default;
};

/// Object argument of a t-atom: a lowercase constant or a capitalized variable.
struct ObjectTerm {
  enum class Kind { Constant, Variable };
  Kind kind = Kind::Constant;
  std::string name;

  static ObjectTerm constant(std::string n) { return {Kind::Constant, std::move(n)}; }
  static ObjectTerm variable(std::string n) { return {Kind::Variable, std::move(n)}; }
  bool is_variable() const { return kind == Kind::Variable; }

  friend auto operator<=>(const ObjectTerm&, const ObjectTerm&) = default;
};

/// Temporal position of a t-atom: either a temporal variable or a time point.
struct TimeTerm {
  std::optional<std::string> variable;
  TimePoint point;

  static TimeTerm var(std::string name) { return {std::move(name), TimePoint{}}; }
  static TimeTerm at(TimePoint t) { return {std::nullopt, t}; }
  bool is_variable() const { return variable.has_value(); }

  friend auto operator<=>(const TimeTerm&, const TimeTerm&) = default;
};

struct TAtom {
  std::string predicate;
  std::vector<ObjectTerm> args;
  TimeTerm time;
  SourceSpan span;

  bool is_ground() const;
  friend bool operator==(const TAtom&, const TAtom&) = default;
};

/// Total order on predicate, arguments, then time. Ignores spans.
bool atom_less(const TAtom& a, const TAtom& b);

struct AtomLess {
  bool operator()(const TAtom& a, const TAtom& b) const { return atom_less(a, b); }
};

enum class Connective { Single, And, Or };

/// A t-atom or a homogeneous conjunction/disjunction of t-atoms.
struct BasicFormula {
  Connective connective = Connective::Single;
  std::vector<TAtom> atoms;

  static BasicFormula single(TAtom a) { return {Connective::Single, {std::move(a)}}; }
  friend bool operator==(const BasicFormula&, const BasicFormula&) = default;
};

bool formula_less(const BasicFormula& a, const BasicFormula& b);

/// Integer arithmetic over temporal variables: constants, variables, + - * and negation.
struct TimeExpr {
  enum class Op { Const, Var, Add, Sub, Mul, Neg };
  Op op = Op::Const;
  std::int64_t value = 0;
  std::string var;
  std::vector<TimeExpr> args;

  static TimeExpr constant(std::int64_t v) { return {Op::Const, v, {}, {}}; }
  static TimeExpr variable(std::string name) { return {Op::Var, 0, std::move(name), {}}; }
  static TimeExpr binary(Op op, TimeExpr l, TimeExpr r) { return {op, 0, {}, {std::move(l), std::move(r)}}; }
  static TimeExpr negate(TimeExpr e) { return {Op::Neg, 0, {}, {std::move(e)}}; }

  friend bool operator==(const TimeExpr&, const TimeExpr&) = default;
};

using TimeBindings = std::map<std::string, std::int64_t>;

/// Evaluates with the given bindings; throws NonNormalConstraint on an unbound variable.
std::int64_t evaluate(const TimeExpr& e, const TimeBindings& env);
void collect_variables(const TimeExpr& e, std::set<std::string>& out);
/// Replaces bound variables by constants and folds constant subtrees.
TimeExpr substitute(const TimeExpr& e, const TimeBindings& env);

enum class CompareOp { Le, Lt, Eq, Ne, Gt, Ge };

/// Node of a temporal constraint. Leaves compare the principal variable
/// against one expression (`Compare`) or test membership of a closed range
/// (`Range`, the `Y : lo ~ hi` shorthand).
struct ConstraintNode {
  enum class Kind { Compare, Range, And, Or, Not };
  Kind kind = Kind::Compare;
  CompareOp op = CompareOp::Eq;
  std::vector<TimeExpr> bounds;
  std::vector<ConstraintNode> children;
  SourceSpan span;

  static ConstraintNode compare(CompareOp op, TimeExpr rhs);
  static ConstraintNode range(TimeExpr lo, TimeExpr hi);
  static ConstraintNode conj(ConstraintNode l, ConstraintNode r);
  static ConstraintNode disj(ConstraintNode l, ConstraintNode r);
  static ConstraintNode negation(ConstraintNode c);

  friend bool operator==(const ConstraintNode&, const ConstraintNode&) = default;
};

struct TemporalConstraint {
  std::string principal = "Y";
  ConstraintNode root;

  /// Variables other than the principal one.
  std::set<std::string> independent_variables() const;
  bool is_normal() const { return independent_variables().empty(); }
  /// Truth at principal = t under the given bindings for independent variables.
  bool holds(TimePoint t, const TimeBindings& env = {}) const;
  TemporalConstraint substitute(const TimeBindings& env) const;

  friend bool operator==(const TemporalConstraint&, const TemporalConstraint&) = default;
};

/// Per-time probability weights of one annotation bound.
struct WeightFunction {
  enum class Kind { List, Sharp, Uniform };
  Kind kind = Kind::Sharp;
  std::vector<Rational> values;

  static WeightFunction list(std::vector<Rational> v) { return {Kind::List, std::move(v)}; }
  static WeightFunction sharp() { return {Kind::Sharp, {}}; }
  static WeightFunction uniform() { return {Kind::Uniform, {}}; }

  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;
};

struct TPAnnotation {
  TemporalConstraint constraint;
  WeightFunction lower;
  WeightFunction upper;
  SourceSpan span;

  friend bool operator==(const TPAnnotation&, const TPAnnotation&) = default;
};

struct AnnotatedFormula {
  BasicFormula formula;
  TPAnnotation annotation;

  friend bool operator==(const AnnotatedFormula&, const AnnotatedFormula&) = default;
};

struct TPClause {
  TAtom head;
  TPAnnotation head_annotation;
  std::vector<AnnotatedFormula> body;
  SourceSpan span;

  bool is_fact() const { return body.empty(); }
  friend bool operator==(const TPClause&, const TPClause&) = default;
};

struct PTProgram {
  Calendar calendar;
  /// Constants named in a `constants` declaration, in declaration order.
  std::vector<std::string> declared_constants;
  std::vector<TPClause> clauses;

  /// Declared constants together with every constant occurring in an atom.
  std::set<std::string> constants() const;

  friend bool operator==(const PTProgram&, const PTProgram&) = default;
};

/// Solution set of a normal constraint, in calendar order.
std::vector<TimePoint> solve_constraint(const TemporalConstraint& c, const Calendar& cal);

/// Weight at t given the solution set of the owning constraint.
Rational weight_at(const WeightFunction& w, const std::vector<TimePoint>& solutions, TimePoint t);
Rational weight_at(const WeightFunction& w, const TemporalConstraint& c, const Calendar& cal, TimePoint t);

/// The constant interval [lower(t), upper(t)] of an annotation at t.
ProbInterval interval_at(const TPAnnotation& a, const std::vector<TimePoint>& solutions, TimePoint t);

/// Well-formedness of one annotation against the calendar. Annotations
/// whose constraint still has independent variables are checked only after
/// grounding, so they produce no diagnostics here.
std::vector<Diagnostic> validate_annotation(const TPAnnotation& a, const Calendar& cal);

/// Whole-program checks: every annotation, arity per predicate, principal
/// variables, and that explicit time points lie in the calendar.
std::vector<Diagnostic> validate_program(const PTProgram& p);

/// Replaces every temporal variable of the formula's atoms by t.
BasicFormula substitute_time(const BasicFormula& f, TimePoint t);
TAtom substitute_time(const TAtom& a, TimePoint t);

/// The temporal variable shared by the formula's atoms, if any.
std::optional<std::string> principal_variable(const BasicFormula& f);

std::string to_string(const TAtom& a);
std::string to_string(const BasicFormula& f);

}  // namespace tplp

#endif
