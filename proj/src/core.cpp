#include "tplp/core.hpp"

#include <algorithm>
#include <sstream>

#include "tplp/errors.hpp"

namespace tplp {

std::string_view kind_name(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::Syntax: return "Syntax";
    case DiagnosticKind::EmptySolutionSet: return "EmptySolutionSet";
    case DiagnosticKind::LengthMismatch: return "LengthMismatch";
    case DiagnosticKind::SharpCardinality: return "SharpCardinality";
    case DiagnosticKind::LowerExceedsUpper: return "LowerExceedsUpper";
    case DiagnosticKind::ValueOutOfRange: return "ValueOutOfRange";
    case DiagnosticKind::NonNormalConstraint: return "NonNormalConstraint";
    case DiagnosticKind::PrincipalMismatch: return "PrincipalMismatch";
    case DiagnosticKind::ArityMismatch: return "ArityMismatch";
    case DiagnosticKind::TimeOutsideCalendar: return "TimeOutsideCalendar";
    case DiagnosticKind::InvalidCalendar: return "InvalidCalendar";
    case DiagnosticKind::NonGroundQuery: return "NonGroundQuery";
  }
  return "Unknown";
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  os << d.span.line << ':' << d.span.column << ": "
     << (d.severity == Severity::Error ? "error" : "warning") << " [" << kind_name(d.kind) << "] "
     << d.message;
  return os;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return count_severity(diags, Severity::Error) > 0;
}

std::size_t count_severity(const std::vector<Diagnostic>& diags, Severity severity) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.severity == severity; }));
}

std::ostream& operator<<(std::ostream& os, TimePoint t) { return os << t.value; }

// ---------------------------------------------------------------- Calendar

Calendar Calendar::range(std::int64_t first, std::int64_t last) {
  Calendar cal;
  for (std::int64_t t = first; t <= last; ++t) cal.points.emplace_back(t);
  return cal;
}

bool Calendar::contains(TimePoint t) const { return index_of(t).has_value(); }

std::optional<std::size_t> Calendar::index_of(TimePoint t) const {
  auto it = std::lower_bound(points.begin(), points.end(), t);
  if (it == points.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - points.begin());
}

bool Calendar::contiguous() const {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].value != points[i - 1].value + 1) return false;
  return true;
}

// ---------------------------------------------------------------- atoms

bool TAtom::is_ground() const {
  if (time.is_variable()) return false;
  return std::none_of(args.begin(), args.end(), [](const ObjectTerm& t) { return t.is_variable(); });
}

bool atom_less(const TAtom& a, const TAtom& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  if (a.args != b.args) return a.args < b.args;
  return a.time < b.time;
}

bool formula_less(const BasicFormula& a, const BasicFormula& b) {
  if (a.connective != b.connective) return a.connective < b.connective;
  return std::lexicographical_compare(a.atoms.begin(), a.atoms.end(), b.atoms.begin(), b.atoms.end(), atom_less);
}

std::set<std::string> PTProgram::constants() const {
  std::set<std::string> out(declared_constants.begin(), declared_constants.end());
  auto add = [&](const TAtom& a) {
    for (const auto& t : a.args)
      if (!t.is_variable()) out.insert(t.name);
  };
  for (const auto& c : clauses) {
    add(c.head);
    for (const auto& b : c.body)
      for (const auto& a : b.formula.atoms) add(a);
  }
  return out;
}

// ---------------------------------------------------------------- temporal terms

std::int64_t evaluate(const TimeExpr& e, const TimeBindings& env) {
  switch (e.op) {
    case TimeExpr::Op::Const: return e.value;
    case TimeExpr::Op::Var: {
      auto it = env.find(e.var);
      if (it == env.end()) throw NonNormalConstraint("unbound temporal variable " + e.var);
      return it->second;
    }
    case TimeExpr::Op::Add: return evaluate(e.args[0], env) + evaluate(e.args[1], env);
    case TimeExpr::Op::Sub: return evaluate(e.args[0], env) - evaluate(e.args[1], env);
    case TimeExpr::Op::Mul: return evaluate(e.args[0], env) * evaluate(e.args[1], env);
    case TimeExpr::Op::Neg: return -evaluate(e.args[0], env);
  }
  return 0;
}

void collect_variables(const TimeExpr& e, std::set<std::string>& out) {
  if (e.op == TimeExpr::Op::Var) out.insert(e.var);
  for (const auto& a : e.args) collect_variables(a, out);
}

TimeExpr substitute(const TimeExpr& e, const TimeBindings& env) {
  if (e.op == TimeExpr::Op::Var) {
    auto it = env.find(e.var);
    return it == env.end() ? e : TimeExpr::constant(it->second);
  }
  if (e.op == TimeExpr::Op::Const) return e;
  TimeExpr out = e;
  bool constant = true;
  for (auto& a : out.args) {
    a = substitute(a, env);
    constant = constant && a.op == TimeExpr::Op::Const;
  }
  if (constant) return TimeExpr::constant(evaluate(out, {}));
  return out;
}

// ---------------------------------------------------------------- constraints

ConstraintNode ConstraintNode::compare(CompareOp op, TimeExpr rhs) {
  ConstraintNode n;
  n.kind = Kind::Compare;
  n.op = op;
  n.bounds.push_back(std::move(rhs));
  return n;
}

ConstraintNode ConstraintNode::range(TimeExpr lo, TimeExpr hi) {
  ConstraintNode n;
  n.kind = Kind::Range;
  n.bounds.push_back(std::move(lo));
  n.bounds.push_back(std::move(hi));
  return n;
}

ConstraintNode ConstraintNode::conj(ConstraintNode l, ConstraintNode r) {
  ConstraintNode n;
  n.kind = Kind::And;
  n.children.push_back(std::move(l));
  n.children.push_back(std::move(r));
  return n;
}

ConstraintNode ConstraintNode::disj(ConstraintNode l, ConstraintNode r) {
  ConstraintNode n;
  n.kind = Kind::Or;
  n.children.push_back(std::move(l));
  n.children.push_back(std::move(r));
  return n;
}

ConstraintNode ConstraintNode::negation(ConstraintNode c) {
  ConstraintNode n;
  n.kind = Kind::Not;
  n.children.push_back(std::move(c));
  return n;
}

namespace {

void collect_node_variables(const ConstraintNode& n, std::set<std::string>& out) {
  for (const auto& b : n.bounds) collect_variables(b, out);
  for (const auto& c : n.children) collect_node_variables(c, out);
}

bool compare(CompareOp op, std::int64_t y, std::int64_t v) {
  switch (op) {
    case CompareOp::Le: return y <= v;
    case CompareOp::Lt: return y < v;
    case CompareOp::Eq: return y == v;
    case CompareOp::Ne: return y != v;
    case CompareOp::Gt: return y > v;
    case CompareOp::Ge: return y >= v;
  }
  return false;
}

bool node_holds(const ConstraintNode& n, std::int64_t y, const TimeBindings& env) {
  switch (n.kind) {
    case ConstraintNode::Kind::Compare: return compare(n.op, y, evaluate(n.bounds[0], env));
    case ConstraintNode::Kind::Range:
      return evaluate(n.bounds[0], env) <= y && y <= evaluate(n.bounds[1], env);
    case ConstraintNode::Kind::And: return node_holds(n.children[0], y, env) && node_holds(n.children[1], y, env);
    case ConstraintNode::Kind::Or: return node_holds(n.children[0], y, env) || node_holds(n.children[1], y, env);
    case ConstraintNode::Kind::Not: return !node_holds(n.children[0], y, env);
  }
  return false;
}

ConstraintNode substitute_node(const ConstraintNode& n, const TimeBindings& env) {
  ConstraintNode out = n;
  for (auto& b : out.bounds) b = substitute(b, env);
  for (auto& c : out.children) c = substitute_node(c, env);
  return out;
}

}  // namespace

std::set<std::string> TemporalConstraint::independent_variables() const {
  std::set<std::string> vars;
  collect_node_variables(root, vars);
  vars.erase(principal);
  return vars;
}

bool TemporalConstraint::holds(TimePoint t, const TimeBindings& env) const {
  TimeBindings full = env;
  full[principal] = t.value;
  return node_holds(root, t.value, full);
}

TemporalConstraint TemporalConstraint::substitute(const TimeBindings& env) const {
  TimeBindings without_principal = env;
  without_principal.erase(principal);
  return {principal, substitute_node(root, without_principal)};
}

std::vector<TimePoint> solve_constraint(const TemporalConstraint& c, const Calendar& cal) {
  if (auto vars = c.independent_variables(); !vars.empty())
    throw NonNormalConstraint("constraint on " + c.principal + " mentions unbound variable " + *vars.begin());
  std::vector<TimePoint> out;
  for (TimePoint t : cal.points)
    if (c.holds(t)) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------- weights

Rational weight_at(const WeightFunction& w, const std::vector<TimePoint>& solutions, TimePoint t) {
  auto it = std::lower_bound(solutions.begin(), solutions.end(), t);
  if (it == solutions.end() || *it != t) return 0;
  auto rank = static_cast<std::size_t>(it - solutions.begin());
  switch (w.kind) {
    case WeightFunction::Kind::List: return rank < w.values.size() ? w.values[rank] : Rational(0);
    case WeightFunction::Kind::Sharp: return 1;
    case WeightFunction::Kind::Uniform: return Rational(1, static_cast<long>(solutions.size()));
  }
  return 0;
}

Rational weight_at(const WeightFunction& w, const TemporalConstraint& c, const Calendar& cal, TimePoint t) {
  return weight_at(w, solve_constraint(c, cal), t);
}

ProbInterval interval_at(const TPAnnotation& a, const std::vector<TimePoint>& solutions, TimePoint t) {
  return {weight_at(a.lower, solutions, t), weight_at(a.upper, solutions, t)};
}

std::vector<Diagnostic> validate_annotation(const TPAnnotation& a, const Calendar& cal) {
  std::vector<Diagnostic> out;
  if (!a.constraint.is_normal()) return out;
  auto sol = solve_constraint(a.constraint, cal);
  if (sol.empty()) {
    out.push_back({Severity::Warning, DiagnosticKind::EmptySolutionSet,
                   "constraint has no solution in the calendar; the annotated formula holds vacuously", a.span});
    return out;
  }
  bool shaped = true;
  auto check_shape = [&](const WeightFunction& w, const char* which) {
    if (w.kind == WeightFunction::Kind::List) {
      if (w.values.size() != sol.size()) {
        out.push_back({Severity::Error, DiagnosticKind::LengthMismatch,
                       std::string(which) + " weights list " + std::to_string(w.values.size()) +
                           " values but the constraint has " + std::to_string(sol.size()) + " solutions",
                       a.span});
        shaped = false;
      }
      for (const auto& v : w.values) {
        if (v < 0 || v > 1) {
          out.push_back({Severity::Error, DiagnosticKind::ValueOutOfRange,
                         std::string(which) + " weight " + to_decimal_string(v) + " is outside [0,1]", a.span});
          shaped = false;
        }
      }
    } else if (w.kind == WeightFunction::Kind::Sharp && sol.size() != 1) {
      out.push_back({Severity::Error, DiagnosticKind::SharpCardinality,
                     std::string(which) + " weight '#' needs exactly one solution, constraint has " +
                         std::to_string(sol.size()),
                     a.span});
      shaped = false;
    }
  };
  check_shape(a.lower, "lower");
  check_shape(a.upper, "upper");
  if (!shaped) return out;
  for (TimePoint t : sol) {
    auto iv = interval_at(a, sol, t);
    if (iv.lo > iv.hi) {
      std::ostringstream msg;
      msg << "lower bound exceeds upper bound at time " << t << ": " << iv;
      out.push_back({Severity::Error, DiagnosticKind::LowerExceedsUpper, msg.str(), a.span});
    }
  }
  return out;
}

namespace {

void check_formula_principal(const BasicFormula& f, const TPAnnotation& a, std::vector<Diagnostic>& out) {
  for (const auto& atom : f.atoms) {
    if (atom.time.is_variable() && *atom.time.variable != a.constraint.principal) {
      out.push_back({Severity::Error, DiagnosticKind::PrincipalMismatch,
                     "atom " + to_string(atom) + " uses temporal variable " + *atom.time.variable +
                         " but its annotation constrains " + a.constraint.principal,
                     atom.span});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_program(const PTProgram& p) {
  std::vector<Diagnostic> out;
  if (p.calendar.points.empty()) {
    out.push_back({Severity::Error, DiagnosticKind::InvalidCalendar, "calendar is empty", {}});
    return out;
  }
  for (std::size_t i = 1; i < p.calendar.points.size(); ++i) {
    if (p.calendar.points[i] <= p.calendar.points[i - 1]) {
      out.push_back({Severity::Error, DiagnosticKind::InvalidCalendar, "calendar is not strictly increasing", {}});
      return out;
    }
  }
  std::map<std::string, std::size_t> arity;
  auto check_atom = [&](const TAtom& a) {
    auto [it, inserted] = arity.emplace(a.predicate, a.args.size());
    if (!inserted && it->second != a.args.size()) {
      out.push_back({Severity::Error, DiagnosticKind::ArityMismatch,
                     "predicate " + a.predicate + " used with " + std::to_string(a.args.size()) +
                         " arguments, previously " + std::to_string(it->second),
                     a.span});
    }
    if (!a.time.is_variable() && !p.calendar.contains(a.time.point)) {
      std::ostringstream msg;
      msg << "time point " << a.time.point << " of " << to_string(a) << " is not in the calendar";
      out.push_back({Severity::Error, DiagnosticKind::TimeOutsideCalendar, msg.str(), a.span});
    }
  };
  for (const auto& c : p.clauses) {
    check_atom(c.head);
    check_formula_principal(BasicFormula::single(c.head), c.head_annotation, out);
    auto d = validate_annotation(c.head_annotation, p.calendar);
    out.insert(out.end(), d.begin(), d.end());
    for (const auto& b : c.body) {
      for (const auto& a : b.formula.atoms) check_atom(a);
      check_formula_principal(b.formula, b.annotation, out);
      auto bd = validate_annotation(b.annotation, p.calendar);
      out.insert(out.end(), bd.begin(), bd.end());
    }
  }
  return out;
}

// ---------------------------------------------------------------- substitution

TAtom substitute_time(const TAtom& a, TimePoint t) {
  if (!a.time.is_variable()) return a;
  TAtom out = a;
  out.time = TimeTerm::at(t);
  return out;
}

BasicFormula substitute_time(const BasicFormula& f, TimePoint t) {
  BasicFormula out = f;
  for (auto& a : out.atoms) a = substitute_time(a, t);
  return out;
}

std::optional<std::string> principal_variable(const BasicFormula& f) {
  for (const auto& a : f.atoms)
    if (a.time.is_variable()) return a.time.variable;
  return std::nullopt;
}

std::string to_string(const TAtom& a) {
  std::string s = a.predicate;
  if (!a.args.empty()) {
    s += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ',';
      s += a.args[i].name;
    }
    s += ')';
  }
  s += '@';
  s += a.time.is_variable() ? *a.time.variable : std::to_string(a.time.point.value);
  return s;
}

std::string to_string(const BasicFormula& f) {
  std::string s;
  const char* sep = f.connective == Connective::Or ? " or " : " and ";
  for (std::size_t i = 0; i < f.atoms.size(); ++i) {
    if (i) s += sep;
    s += to_string(f.atoms[i]);
  }
  return s;
}

}  // namespace tplp
