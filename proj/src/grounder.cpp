#include "tplp/grounder.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "tplp/errors.hpp"

namespace tplp {

namespace {

using ObjectBinding = std::map<std::string, std::string>;

/// (predicate, ground object arguments): the time-free identity of an atom.
using Signature = std::pair<std::string, std::vector<std::string>>;

void collect_object_vars(const TAtom& a, std::set<std::string>& out) {
  for (const auto& t : a.args)
    if (t.is_variable()) out.insert(t.name);
}

std::set<std::string> clause_object_vars(const TPClause& c) {
  std::set<std::string> out;
  collect_object_vars(c.head, out);
  for (const auto& b : c.body)
    for (const auto& a : b.formula.atoms) collect_object_vars(a, out);
  return out;
}

std::set<std::string> clause_independent_vars(const TPClause& c) {
  std::set<std::string> out = c.head_annotation.constraint.independent_variables();
  for (const auto& b : c.body) {
    auto v = b.annotation.constraint.independent_variables();
    out.insert(v.begin(), v.end());
  }
  return out;
}

TAtom bind_objects(const TAtom& a, const ObjectBinding& b) {
  TAtom out = a;
  for (auto& t : out.args) {
    if (!t.is_variable()) continue;
    auto it = b.find(t.name);
    if (it != b.end()) t = ObjectTerm::constant(it->second);
  }
  return out;
}

TPAnnotation bind_time(const TPAnnotation& a, const TimeBindings& env) {
  TPAnnotation out = a;
  out.constraint = a.constraint.substitute(env);
  return out;
}

Signature signature(const TAtom& a) {
  Signature s{a.predicate, {}};
  for (const auto& t : a.args) s.second.push_back(t.name);
  return s;
}

void check_grounded(const TPAnnotation& a, const Calendar& cal, const TAtom& where) {
  auto diags = validate_annotation(a, cal);
  for (const auto& d : diags) {
    if (d.severity != Severity::Error) continue;
    std::ostringstream msg;
    msg << "grounded annotation of " << to_string(where) << " is ill-formed: " << d;
    throw GroundingError(msg.str());
  }
}

/// All instances of one clause for a fixed object binding: one per
/// assignment of its independent temporal variables.
void emit_time_instances(const TPClause& c, const ObjectBinding& ob, const Calendar& cal,
                         std::vector<TPClause>& out) {
  std::vector<std::string> tvars;
  for (const auto& v : clause_independent_vars(c)) tvars.push_back(v);
  TimeBindings env;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == tvars.size()) {
      TPClause g;
      g.span = c.span;
      g.head = bind_objects(c.head, ob);
      g.head_annotation = bind_time(c.head_annotation, env);
      check_grounded(g.head_annotation, cal, g.head);
      for (const auto& b : c.body) {
        AnnotatedFormula af;
        af.formula = b.formula;
        for (auto& a : af.formula.atoms) a = bind_objects(a, ob);
        af.annotation = bind_time(b.annotation, env);
        check_grounded(af.annotation, cal, af.formula.atoms.front());
        g.body.push_back(std::move(af));
      }
      out.push_back(std::move(g));
      return;
    }
    for (TimePoint t : cal.points) {
      env[tvars[i]] = t.value;
      rec(i + 1);
    }
    env.erase(tvars[i]);
  };
  rec(0);
}

/// Extends `partial` over `vars[i..]` with every constant.
void enumerate_universe(const std::vector<std::string>& vars, std::size_t i, const std::vector<std::string>& universe,
                        ObjectBinding& partial, const std::function<void(const ObjectBinding&)>& emit) {
  if (i == vars.size()) {
    emit(partial);
    return;
  }
  if (partial.count(vars[i])) {
    enumerate_universe(vars, i + 1, universe, partial, emit);
    return;
  }
  for (const auto& c : universe) {
    partial[vars[i]] = c;
    enumerate_universe(vars, i + 1, universe, partial, emit);
  }
  partial.erase(vars[i]);
}

/// Bindings of the body's object variables under which every body atom's
/// signature is in `produced`.
void match_body(const std::vector<const TAtom*>& atoms, std::size_t i, const std::set<Signature>& produced,
                ObjectBinding& binding, const std::function<void(const ObjectBinding&)>& emit) {
  if (i == atoms.size()) {
    emit(binding);
    return;
  }
  const TAtom& a = *atoms[i];
  auto lo = produced.lower_bound(Signature{a.predicate, {}});
  for (auto it = lo; it != produced.end() && it->first == a.predicate; ++it) {
    if (it->second.size() != a.args.size()) continue;
    ObjectBinding next = binding;
    bool ok = true;
    for (std::size_t k = 0; k < a.args.size() && ok; ++k) {
      const auto& term = a.args[k];
      const auto& value = it->second[k];
      if (!term.is_variable()) {
        ok = term.name == value;
      } else if (auto b = next.find(term.name); b != next.end()) {
        ok = b->second == value;
      } else {
        next[term.name] = value;
      }
    }
    if (ok) match_body(atoms, i + 1, produced, next, emit);
  }
}

}  // namespace

PTProgram ground_program(const PTProgram& p, GroundingMode mode) {
  auto constants_set = p.constants();
  std::vector<std::string> universe(constants_set.begin(), constants_set.end());

  std::vector<std::vector<std::string>> vars_of(p.clauses.size());
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    auto vs = clause_object_vars(p.clauses[i]);
    vars_of[i].assign(vs.begin(), vs.end());
    if (!vars_of[i].empty() && universe.empty())
      throw UniverseEmpty("clause for " + p.clauses[i].head.predicate + " has object variables but the program has no constants");
  }

  // Object bindings chosen per clause, kept sorted for a deterministic order.
  std::vector<std::set<ObjectBinding>> bindings(p.clauses.size());

  if (mode == GroundingMode::Full) {
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      ObjectBinding partial;
      enumerate_universe(vars_of[i], 0, universe, partial, [&](const ObjectBinding& b) { bindings[i].insert(b); });
    }
  } else {
    std::set<Signature> produced;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < p.clauses.size(); ++i) {
        const TPClause& c = p.clauses[i];
        auto accept = [&](const ObjectBinding& b) {
          if (bindings[i].insert(b).second) changed = true;
          if (produced.insert(signature(bind_objects(c.head, b))).second) changed = true;
        };
        if (vars_of[i].empty()) {
          accept({});
          continue;
        }
        std::vector<const TAtom*> body_atoms;
        for (const auto& b : c.body)
          for (const auto& a : b.formula.atoms) body_atoms.push_back(&a);
        ObjectBinding start;
        match_body(body_atoms, 0, produced, start, [&](const ObjectBinding& body_binding) {
          ObjectBinding partial = body_binding;
          enumerate_universe(vars_of[i], 0, universe, partial, accept);
        });
      }
    }
  }

  PTProgram out;
  out.calendar = p.calendar;
  out.declared_constants = p.declared_constants;
  for (std::size_t i = 0; i < p.clauses.size(); ++i)
    for (const auto& b : bindings[i]) emit_time_instances(p.clauses[i], b, p.calendar, out.clauses);
  return out;
}

// ---------------------------------------------------------------- Herbrand base

HerbrandBase::HerbrandBase(std::vector<TAtom> atoms) {
  for (auto& a : atoms) a.span = {};
  std::sort(atoms.begin(), atoms.end(), atom_less);
  atoms.erase(std::unique(atoms.begin(), atoms.end(),
                          [](const TAtom& x, const TAtom& y) { return !atom_less(x, y) && !atom_less(y, x); }),
              atoms.end());
  atoms_ = std::move(atoms);
  for (std::size_t i = 0; i < atoms_.size(); ++i) index_.emplace(atoms_[i], i);
}

std::optional<std::size_t> HerbrandBase::index_of(const TAtom& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

HerbrandBase HerbrandBase::extended(const std::vector<TAtom>& more) const {
  std::vector<TAtom> all = atoms_;
  all.insert(all.end(), more.begin(), more.end());
  return HerbrandBase(std::move(all));
}

// ---------------------------------------------------------------- unfolding

PProgram unfold(const PTProgram& ground, std::vector<Diagnostic>* warnings) {
  PProgram pp;
  const Calendar& cal = ground.calendar;
  for (const auto& c : ground.clauses) {
    auto head_sol = solve_constraint(c.head_annotation.constraint, cal);
    if (head_sol.empty()) {
      if (warnings)
        warnings->push_back({Severity::Warning, DiagnosticKind::EmptySolutionSet,
                             "clause for " + to_string(c.head) + " unfolds to no p-clauses", c.span});
      continue;
    }
    std::vector<PConjunct> body;
    for (const auto& b : c.body) {
      auto sol = solve_constraint(b.annotation.constraint, cal);
      for (TimePoint t : sol) body.push_back({substitute_time(b.formula, t), interval_at(b.annotation, sol, t)});
    }
    for (TimePoint t : head_sol) {
      PClause pc;
      pc.head = substitute_time(c.head, t);
      pc.head_interval = interval_at(c.head_annotation, head_sol, t);
      pc.body = body;
      pp.clauses.push_back(std::move(pc));
    }
  }
  pp.base = herbrand_base(pp);
  return pp;
}

HerbrandBase herbrand_base(const PProgram& pp, std::size_t cap) {
  std::vector<TAtom> atoms;
  for (const auto& c : pp.clauses) {
    atoms.push_back(c.head);
    for (const auto& b : c.body) atoms.insert(atoms.end(), b.formula.atoms.begin(), b.formula.atoms.end());
  }
  HerbrandBase base(std::move(atoms));
  if (base.size() > cap) throw BaseTooLarge(base.size(), cap);
  return base;
}

PTProgram to_pt_program(const PProgram& pp, const Calendar& calendar) {
  auto as_annotated = [](const BasicFormula& f, const ProbInterval& iv) {
    AnnotatedFormula af;
    TimePoint t = f.atoms.front().time.point;
    af.formula = f;
    for (auto& a : af.formula.atoms) {
      // Atoms at another time than the first stay explicit.
      if (a.time.point == t) a.time = TimeTerm::var("Y");
    }
    af.annotation.constraint.principal = "Y";
    af.annotation.constraint.root = ConstraintNode::compare(CompareOp::Eq, TimeExpr::constant(t.value));
    af.annotation.lower = WeightFunction::list({iv.lo});
    af.annotation.upper = WeightFunction::list({iv.hi});
    return af;
  };
  PTProgram out;
  out.calendar = calendar;
  for (const auto& c : pp.clauses) {
    TPClause tc;
    auto head = as_annotated(BasicFormula::single(c.head), c.head_interval);
    tc.head = head.formula.atoms.front();
    tc.head_annotation = head.annotation;
    for (const auto& b : c.body) tc.body.push_back(as_annotated(b.formula, b.interval));
    out.clauses.push_back(std::move(tc));
  }
  return out;
}

}  // namespace tplp
