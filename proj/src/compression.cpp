#include "tplp/compression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "tplp/errors.hpp"
#include "tplp/psat.hpp"

namespace tplp {

TAtom CompressedAtom::at(TimePoint t) const {
  TAtom a;
  a.predicate = predicate;
  for (const auto& arg : args) a.args.push_back(ObjectTerm::constant(arg));
  a.time = TimeTerm::at(t);
  return a;
}

CompressedAtom CompressedAtom::of(const TAtom& ground) {
  CompressedAtom c;
  c.predicate = ground.predicate;
  for (const auto& arg : ground.args) c.args.push_back(arg.name);
  return c;
}

std::string to_string(const CompressedAtom& a) {
  std::string s = a.predicate;
  if (!a.args.empty()) {
    s += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) s += (i ? "," : "") + a.args[i];
    s += ")";
  }
  return s;
}

CompressedBase::CompressedBase(std::vector<CompressedAtom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

CompressedBase CompressedBase::of(const HerbrandBase& base) {
  std::vector<CompressedAtom> atoms;
  for (const auto& a : base.atoms()) atoms.push_back(CompressedAtom::of(a));
  return CompressedBase(std::move(atoms));
}

std::optional<std::size_t> CompressedBase::index_of(const CompressedAtom& a) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
  if (it == atoms_.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - atoms_.begin());
}

HerbrandBase flattened_base(const CompressedBase& base, const Calendar& cal) {
  std::vector<TAtom> atoms;
  for (const auto& a : base.atoms())
    for (TimePoint t : cal.points) atoms.push_back(a.at(t));
  return HerbrandBase(std::move(atoms));
}

// ---------------------------------------------------------------- threads

Thread compress(const World& w, const HerbrandBase& base, const Calendar& cal) {
  Thread th;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const TAtom& a = base[i];
    if (a.time.is_variable() || !cal.contains(a.time.point))
      throw TimePointOutsideCalendar("atom " + to_string(a) + " has no time point in the calendar");
    auto& set = th.times[CompressedAtom::of(a)];
    if (w.test(i)) set.insert(a.time.point);
  }
  return th;
}

World flatten(const Thread& th, const Calendar& cal) {
  std::vector<CompressedAtom> domain;
  for (const auto& [a, ts] : th.times) domain.push_back(a);
  HerbrandBase base = flattened_base(CompressedBase(std::move(domain)), cal);
  World w(base.size());
  for (const auto& [a, ts] : th.times) {
    for (TimePoint t : ts) {
      if (!cal.contains(t))
        throw TimePointOutsideCalendar("thread of " + to_string(a) + " contains a time outside the calendar");
      w.set(*base.index_of(a.at(t)));
    }
  }
  return w;
}

ThreadDistribution compress(const WorldDistribution& ki, const HerbrandBase& base, const Calendar& cal) {
  ThreadDistribution kt;
  for (const auto& [w, p] : ki) kt[compress(w, base, cal)] += p;
  return kt;
}

Rational thread_prob(const ThreadDistribution& kt, const CompressedAtom& atom, TimePoint t) {
  Rational sum = 0;
  for (const auto& [th, p] : kt) {
    auto it = th.times.find(atom);
    if (it != th.times.end() && it->second.count(t)) sum += p;
  }
  return sum;
}

// ---------------------------------------------------------------- slices

std::string to_string(const FormulaId& id) {
  return std::to_string(id.clause + 1) + "." + std::to_string(id.position);
}

std::optional<FormulaId> parse_formula_id(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  std::size_t clause = 0, position = 0;
  auto a = text.substr(0, dot), b = text.substr(dot + 1);
  auto r1 = std::from_chars(a.data(), a.data() + a.size(), clause);
  auto r2 = std::from_chars(b.data(), b.data() + b.size(), position);
  if (r1.ec != std::errc{} || r1.ptr != a.data() + a.size() || r2.ec != std::errc{} ||
      r2.ptr != b.data() + b.size() || clause == 0)
    return std::nullopt;
  return FormulaId{clause - 1, position};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::optional<SliceTable> parse_slice_csv(std::string_view text, std::vector<Diagnostic>& diagnostics) {
  SliceTable table;
  std::size_t line_no = 0;
  bool failed = false;
  auto report = [&](std::string message) {
    SourceSpan span;
    span.line = line_no;
    span.column = 1;
    diagnostics.push_back({Severity::Error, DiagnosticKind::Syntax, std::move(message), span});
    failed = true;
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    auto line = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line, ',');
    if (cells.size() != 4) {
      report("expected 4 columns (formula_id,time,lo,hi), found " + std::to_string(cells.size()));
      continue;
    }
    auto id = parse_formula_id(cells[0]);
    if (!id) {
      if (cells[0] == "formula_id") continue;  // header
      report("bad formula id '" + std::string(cells[0]) + "'; expected clause.position");
      continue;
    }
    std::int64_t t = 0;
    auto tc = cells[1];
    bool neg = !tc.empty() && tc.front() == '-';
    auto digits = neg ? tc.substr(1) : tc;
    auto r = std::from_chars(digits.data(), digits.data() + digits.size(), t);
    if (digits.empty() || r.ec != std::errc{} || r.ptr != digits.data() + digits.size()) {
      report("bad time point '" + std::string(tc) + "'");
      continue;
    }
    if (neg) t = -t;
    auto lo = parse_rational(cells[2]), hi = parse_rational(cells[3]);
    if (!lo || !hi) {
      report("bad probability on row for " + std::string(cells[0]));
      continue;
    }
    if (*lo > *hi || *hi > 1) {
      report("interval [" + std::string(cells[2]) + ", " + std::string(cells[3]) + "] is not within [0, 1]");
      continue;
    }
    auto [it, inserted] = table[*id].try_emplace(TimePoint{t}, ProbInterval{*lo, *hi});
    if (!inserted) report("duplicate slice for " + std::string(cells[0]) + " at time " + std::to_string(t));
  }
  if (failed) return std::nullopt;
  return table;
}

namespace {

const ProbInterval& slice_at(const SliceTable& slices, FormulaId id, TimePoint t) {
  auto f = slices.find(id);
  if (f != slices.end()) {
    auto it = f->second.find(t);
    if (it != f->second.end()) return it->second;
  }
  std::ostringstream os;
  os << "no interval for formula " << to_string(id) << " at time " << t;
  throw MissingTimeSlice(os.str());
}

TPAnnotation evolution_annotation(const SliceTable& slices, FormulaId id, const std::vector<TimePoint>& delta) {
  TPAnnotation a;
  a.constraint.principal = "Y";
  if (delta.size() == 1) {
    a.constraint.root = ConstraintNode::compare(CompareOp::Eq, TimeExpr::constant(delta.front().value));
  } else {
    a.constraint.root =
        ConstraintNode::range(TimeExpr::constant(delta.front().value), TimeExpr::constant(delta.back().value));
  }
  std::vector<Rational> lo, hi;
  for (TimePoint t : delta) {
    const auto& iv = slice_at(slices, id, t);
    lo.push_back(iv.lo);
    hi.push_back(iv.hi);
  }
  a.lower = WeightFunction::list(std::move(lo));
  a.upper = WeightFunction::list(std::move(hi));
  return a;
}

}  // namespace

PTProgram build_evolution_program(const ProgramSkeleton& skeleton, const SliceTable& slices,
                                  const std::vector<TimePoint>& delta) {
  if (delta.empty()) throw Error("the evolution window is empty");
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!skeleton.calendar.contains(delta[i])) throw Error("evolution window leaves the calendar");
    if (i > 0 && delta[i].value != delta[i - 1].value + 1) throw Error("evolution window is not contiguous");
  }
  PTProgram p;
  p.calendar = skeleton.calendar;
  for (std::size_t c = 0; c < skeleton.clauses.size(); ++c) {
    const auto& sk = skeleton.clauses[c];
    TPClause clause;
    clause.head = sk.head;
    clause.head.time = TimeTerm::var("Y");
    clause.head_annotation = evolution_annotation(slices, {c, 0}, delta);
    for (std::size_t k = 0; k < sk.body.size(); ++k) {
      AnnotatedFormula af;
      af.formula = sk.body[k];
      for (auto& atom : af.formula.atoms) atom.time = TimeTerm::var("Y");
      af.annotation = evolution_annotation(slices, {c, k + 1}, delta);
      clause.body.push_back(std::move(af));
    }
    p.clauses.push_back(std::move(clause));
  }
  return p;
}

PProgram slice_program(const ProgramSkeleton& skeleton, const SliceTable& slices, TimePoint t) {
  PProgram pp;
  for (std::size_t c = 0; c < skeleton.clauses.size(); ++c) {
    const auto& sk = skeleton.clauses[c];
    PClause clause;
    clause.head = substitute_time(sk.head, t);
    clause.head_interval = slice_at(slices, {c, 0}, t);
    for (std::size_t k = 0; k < sk.body.size(); ++k)
      clause.body.push_back({substitute_time(sk.body[k], t), slice_at(slices, {c, k + 1}, t)});
    pp.clauses.push_back(std::move(clause));
  }
  pp.base = herbrand_base(pp);
  return pp;
}

// ---------------------------------------------------------------- evolution

std::map<TaggedWorld, Rational> tagged_distribution(const EvolutionProfile& pi, const Calendar& cal) {
  std::map<TaggedWorld, Rational> out;
  Rational n = static_cast<long>(cal.size());
  for (TimePoint t : pi.interval) {
    auto it = pi.dists.find(t);
    if (it == pi.dists.end()) continue;
    for (const auto& [j, p] : it->second) out[{t, j}] += p / n;
  }
  return out;
}

WorldDistribution evolution_distribution(const EvolutionProfile& pi, const Calendar& cal) {
  HerbrandBase base = flattened_base(pi.base, cal);
  WorldDistribution ki(base.size());
  for (const auto& [tw, p] : tagged_distribution(pi, cal)) {
    World w(base.size());
    for (std::size_t i = 0; i < pi.base.size(); ++i)
      if (tw.assignment.test(i)) w.set(*base.index_of(pi.base[i].at(tw.time)));
    ki.add(w, p);
  }
  return ki;
}

namespace {

bool tagged_satisfies(const TaggedWorld& tw, const BasicFormula& f, const CompressedBase& base) {
  auto truth = [&](const TAtom& a) {
    if (a.time.is_variable() || a.time.point != tw.time) return false;
    auto i = base.index_of(CompressedAtom::of(a));
    return i && tw.assignment.test(*i);
  };
  if (f.connective == Connective::Or) return std::any_of(f.atoms.begin(), f.atoms.end(), truth);
  return std::all_of(f.atoms.begin(), f.atoms.end(), truth);
}

bool is_ground(const PTProgram& p) {
  for (const auto& c : p.clauses) {
    for (const auto& arg : c.head.args)
      if (arg.is_variable()) return false;
    for (const auto& b : c.body)
      for (const auto& a : b.formula.atoms)
        for (const auto& arg : a.args)
          if (arg.is_variable()) return false;
  }
  return true;
}

}  // namespace

EvolutionReport verify_evolution(const EvolutionProfile& pi, const PTProgram& p_delta, VerifyMode mode) {
  const Calendar& cal = p_delta.calendar;
  PTProgram ground = is_ground(p_delta) ? p_delta : ground_program(p_delta, GroundingMode::Full);
  WorldDistribution ki = evolution_distribution(pi, cal);
  HerbrandBase base = flattened_base(pi.base, cal);
  auto tagged = tagged_distribution(pi, cal);
  Rational n = static_cast<long>(cal.size());

  EvolutionReport report;
  report.mode = mode;
  auto measure = [&](std::size_t clause, std::size_t position, const BasicFormula& f, const TPAnnotation& a) {
    auto sol = solve_constraint(a.constraint, cal);
    for (TimePoint t : sol) {
      SliceCheck check;
      check.clause = clause;
      check.position = position;
      check.formula = substitute_time(f, t);
      check.time = t;
      check.required = interval_at(a, sol, t);
      if (mode == VerifyMode::Literal) {
        check.mass = formula_mass(ki, check.formula, base);
      } else {
        Rational m = 0;
        for (const auto& [tw, p] : tagged)
          if (tw.time == t && tagged_satisfies(tw, check.formula, pi.base)) m += p;
        check.mass = n * m;
      }
      check.pass = check.required.contains(check.mass);
      report.all_pass = report.all_pass && check.pass;
      report.checks.push_back(std::move(check));
    }
  };
  for (std::size_t c = 0; c < ground.clauses.size(); ++c) {
    const auto& clause = ground.clauses[c];
    measure(c, 0, BasicFormula::single(clause.head), clause.head_annotation);
    for (std::size_t k = 0; k < clause.body.size(); ++k)
      measure(c, k + 1, clause.body[k].formula, clause.body[k].annotation);
  }
  if (mode == VerifyMode::Literal) {
    PProgram pp = unfold(ground);
    pp.base = base;
    report.program_satisfied = ki_satisfies(pp, ki);
  }
  return report;
}

}  // namespace tplp
