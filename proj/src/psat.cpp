#include "tplp/psat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

#include "tplp/errors.hpp"
#include "tplp/simplex.hpp"

namespace tplp {

namespace {

// Worlds are addressed by 32-bit indices.
constexpr std::size_t kHardAtomLimit = 30;

constexpr double kFloatResidual = 1e-6;

template <class Num>
Num convert(const Rational& r) {
  if constexpr (std::is_same_v<Num, double>) {
    return to_double(r);
  } else {
    return r;
  }
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "CONSISTENT";
    case Verdict::Inconsistent: return "INCONSISTENT";
    case Verdict::UnknownEps: return "UNKNOWN_EPS";
  }
  return "UNKNOWN";
}

bool BranchConstraints::tighten(std::size_t formula, const Rational& lo, const Rational& hi) {
  auto [it, inserted] = bounds.try_emplace(formula, lo, hi);
  if (!inserted) {
    it->second = join_k(it->second, ProbInterval{lo, hi});
  }
  return is_consistent(it->second);
}

// ---------------------------------------------------------------- engine setup

PsatEngine::PsatEngine(const PProgram& pp, SolveOptions opts, const std::vector<BasicFormula>& extra_formulas)
    : opts_(std::move(opts)) {
  std::vector<TAtom> extra_atoms;
  for (const auto& f : extra_formulas) extra_atoms.insert(extra_atoms.end(), f.atoms.begin(), f.atoms.end());
  base_ = extra_atoms.empty() ? pp.base : pp.base.extended(extra_atoms);
  if (base_.empty() && !pp.clauses.empty()) base_ = herbrand_base(pp);
  std::size_t cap = std::min(opts_.max_world_atoms, kHardAtomLimit);
  if (base_.size() > cap) throw BaseTooLarge(base_.size(), cap);

  for (const auto& c : pp.clauses) {
    ClauseRef ref;
    ref.head = intern(BasicFormula::single(c.head));
    ref.head_interval = c.head_interval;
    for (const auto& b : c.body) ref.body.emplace_back(intern(b.formula), b.interval);
    clauses_.push_back(std::move(ref));
  }
  for (const auto& f : extra_formulas) intern(f);
  compute_implied_bounds();
}

std::size_t PsatEngine::intern(const BasicFormula& f) {
  BasicFormula key = f;
  for (auto& a : key.atoms) a.span = {};
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  auto idx = atom_indices(key, base_);
  std::vector<std::uint32_t> worlds;
  const std::uint64_t n = world_count();
  for (std::uint64_t w = 0; w < n; ++w)
    if (index_satisfies(w, key.connective, idx)) worlds.push_back(static_cast<std::uint32_t>(w));
  std::size_t id = formulas_.size();
  formulas_.push_back(key);
  sat_.push_back(std::move(worlds));
  ids_.emplace(std::move(key), id);
  return id;
}

std::size_t PsatEngine::formula_id(const BasicFormula& f) const {
  BasicFormula key = f;
  for (auto& a : key.atoms) a.span = {};
  auto it = ids_.find(key);
  if (it == ids_.end()) throw AtomNotInBase("formula " + to_string(f) + " was not interned by the engine");
  return it->second;
}

void PsatEngine::compute_implied_bounds() {
  // Facts always commit to their head interval, so their intersection
  // bounds every model. Compound formulas get Frechet bounds from atoms.
  std::vector<ProbInterval> fact_bounds(formulas_.size());
  for (const auto& c : clauses_)
    if (c.body.empty()) fact_bounds[c.head] = join_k(fact_bounds[c.head], c.head_interval);
  implied_.assign(formulas_.size(), ProbInterval{});
  for (std::size_t id = 0; id < formulas_.size(); ++id) {
    const auto& f = formulas_[id];
    if (f.connective == Connective::Single) {
      implied_[id] = fact_bounds[id];
      continue;
    }
    std::optional<ProbInterval> acc;
    for (const auto& atom : f.atoms) {
      ProbInterval atom_bound;
      if (auto it = ids_.find(BasicFormula::single(atom)); it != ids_.end()) atom_bound = fact_bounds[it->second];
      if (!is_consistent(atom_bound)) atom_bound = ProbInterval{};
      if (!acc) {
        acc = atom_bound;
      } else {
        acc = f.connective == Connective::And ? and_ig(*acc, atom_bound) : or_ig(*acc, atom_bound);
      }
    }
    implied_[id] = acc.value_or(ProbInterval{});
  }
}

// ---------------------------------------------------------------- branching

std::vector<BranchChoice> PsatEngine::options_for(std::size_t clause, const Rational& epsilon) const {
  const auto& c = clauses_[clause];
  std::vector<BranchChoice> out;
  const ProbInterval& head_bound = implied_[c.head];
  bool head_possible = is_consistent(c.head_interval) &&
                       (!is_consistent(head_bound) || is_consistent(join_k(head_bound, c.head_interval)));
  if (head_possible) out.push_back({BranchChoice::Kind::HeadIn, 0});
  for (std::size_t k = 0; k < c.body.size(); ++k) {
    const auto& [f, iv] = c.body[k];
    const ProbInterval& bound = implied_[f];
    bool usable = is_consistent(bound);
    Rational below = iv.lo - epsilon;
    if (iv.lo > 0 && below >= 0 && (!usable || bound.lo <= below)) out.push_back({BranchChoice::Kind::BodyLow, k});
    Rational above = iv.hi + epsilon;
    if (iv.hi < 1 && above <= 1 && (!usable || bound.hi >= above)) out.push_back({BranchChoice::Kind::BodyHigh, k});
  }
  return out;
}

bool PsatEngine::apply(BranchConstraints& c, std::size_t clause, const BranchChoice& choice,
                       const Rational& epsilon) const {
  const auto& ref = clauses_[clause];
  switch (choice.kind) {
    case BranchChoice::Kind::HeadIn: return c.tighten(ref.head, ref.head_interval.lo, ref.head_interval.hi);
    case BranchChoice::Kind::BodyLow: {
      const auto& [f, iv] = ref.body[choice.conjunct];
      return c.tighten(f, 0, iv.lo - epsilon);
    }
    case BranchChoice::Kind::BodyHigh: {
      const auto& [f, iv] = ref.body[choice.conjunct];
      return c.tighten(f, iv.hi + epsilon, 1);
    }
  }
  return false;
}

template <class Visitor>
void PsatEngine::search(const Rational& epsilon, Visitor&& visit, std::size_t* solved) const {
  Branch branch(clauses_.size());
  bool stop = false;
  std::function<void(std::size_t, const BranchConstraints&)> rec = [&](std::size_t i, const BranchConstraints& c) {
    if (stop) return;
    if (i == clauses_.size()) {
      if (solved) ++*solved;
      auto witness = solve_feasible(c);
      if (witness && !visit(branch, c, *witness)) stop = true;
      return;
    }
    auto options = options_for(i, epsilon);
    for (const auto& choice : options) {
      if (stop) return;
      BranchConstraints next = c;
      if (!apply(next, i, choice, epsilon)) continue;
      // Prune at real decision points; leaves are checked in full anyway.
      if (options.size() > 1 && i + 1 < clauses_.size() && !lp_feasible(next)) continue;
      branch[i] = choice;
      rec(i + 1, next);
    }
  };
  rec(0, BranchConstraints{});
}

std::vector<PsatEngine::Leaf> PsatEngine::feasible_leaves(const Rational& epsilon, std::size_t* solved) const {
  std::vector<Leaf> leaves;
  search(
      epsilon,
      [&](const Branch& b, const BranchConstraints& c, const WorldDistribution&) {
        bool seen = std::any_of(leaves.begin(), leaves.end(), [&](const Leaf& l) { return l.constraints == c; });
        if (!seen) leaves.push_back({b, c});
        return true;
      },
      solved);
  return leaves;
}

// ---------------------------------------------------------------- LP encoding

namespace {

template <class Num>
lp::Problem<Num> encode(const BranchConstraints& c, const std::vector<std::vector<std::uint32_t>>& sat,
                        std::size_t worlds) {
  lp::Problem<Num> p;
  p.num_vars = worlds;
  lp::Row<Num> norm;
  norm.sense = lp::Sense::Eq;
  norm.rhs = Num(1);
  norm.coeffs.reserve(worlds);
  for (std::size_t w = 0; w < worlds; ++w) norm.coeffs.emplace_back(w, 1);
  p.rows.push_back(std::move(norm));
  for (const auto& [f, iv] : c.bounds) {
    auto make_row = [&](lp::Sense sense, const Rational& rhs) {
      lp::Row<Num> r;
      r.sense = sense;
      r.rhs = convert<Num>(rhs);
      r.coeffs.reserve(sat[f].size());
      for (auto w : sat[f]) r.coeffs.emplace_back(w, 1);
      p.rows.push_back(std::move(r));
    };
    if (iv.lo == iv.hi) {
      make_row(lp::Sense::Eq, iv.lo);
      continue;
    }
    if (iv.lo > 0) make_row(lp::Sense::Ge, iv.lo);
    if (iv.hi < 1) make_row(lp::Sense::Le, iv.hi);
  }
  return p;
}

template <class Num>
bool residual_ok(const lp::Problem<Num>& p, const std::vector<Num>& x) {
  for (const auto& r : p.rows) {
    Num lhs(0);
    for (const auto& [j, a] : r.coeffs) lhs += x[j] * Num(static_cast<long>(a));
    Num diff = lhs - r.rhs;
    switch (r.sense) {
      case lp::Sense::Eq:
        if (std::abs(static_cast<double>(diff)) > kFloatResidual) return false;
        break;
      case lp::Sense::Le:
        if (static_cast<double>(diff) > kFloatResidual) return false;
        break;
      case lp::Sense::Ge:
        if (static_cast<double>(diff) < -kFloatResidual) return false;
        break;
    }
  }
  return true;
}

template <class Num>
lp::Problem<Num> build(const BranchConstraints& c, const std::vector<std::vector<std::uint32_t>>& sat,
                       std::size_t worlds, const std::vector<std::uint32_t>* objective, bool maximize) {
  auto p = encode<Num>(c, sat, worlds);
  if (objective)
    for (auto w : *objective) p.objective.emplace_back(w, Num(maximize ? -1 : 1));
  return p;
}

struct LpOutcome {
  lp::Status status = lp::Status::Infeasible;
  Rational objective;
  std::vector<Rational> x;
};

// Exact mode solves in double first and hands the final basis to the
// rational simplex, which then only confirms or repairs it.
LpOutcome solve_lp(const BranchConstraints& c, const std::vector<std::vector<std::uint32_t>>& sat,
                   std::size_t worlds, const std::vector<std::uint32_t>* objective, bool maximize, LpMode mode) {
  auto pd = build<double>(c, sat, worlds, objective, maximize);
  auto sd = lp::solve(pd);
  LpOutcome out;
  if (mode == LpMode::Float) {
    if (sd.status == lp::Status::IterationLimit)
      throw LPNumericalFailure("floating-point simplex hit its iteration limit");
    if (sd.status == lp::Status::Optimal && !residual_ok(pd, sd.x))
      throw LPNumericalFailure("floating-point simplex solution violates its constraints");
    out.status = sd.status;
    out.objective = from_double(sd.objective);
    for (double v : sd.x) out.x.push_back(from_double(v));
    return out;
  }
  const std::vector<std::size_t>* warm = sd.basis.empty() ? nullptr : &sd.basis;
  auto se = lp::solve(build<Rational>(c, sat, worlds, objective, maximize), 5'000'000, warm);
  if (se.status == lp::Status::IterationLimit) throw Error("exact simplex hit its iteration limit");
  out.status = se.status;
  out.objective = se.objective;
  out.x = std::move(se.x);
  return out;
}

}  // namespace

WorldDistribution PsatEngine::to_distribution(const std::vector<Rational>& p) const {
  WorldDistribution d(base_.size());
  for (std::size_t w = 0; w < p.size(); ++w)
    if (p[w] != 0) d.set(World::from_index(w, base_.size()), p[w]);
  return d;
}

std::optional<WorldDistribution> PsatEngine::solve_feasible(const BranchConstraints& c) const {
  for (const auto& [f, iv] : c.bounds)
    if (!is_consistent(iv) || iv.lo > 1 || iv.hi < 0) return std::nullopt;
  auto r = solve_lp(c, sat_, world_count(), nullptr, false, opts_.lp_mode);
  if (r.status != lp::Status::Optimal) return std::nullopt;
  return to_distribution(r.x);
}

bool PsatEngine::lp_feasible(const BranchConstraints& c) const { return solve_feasible(c).has_value(); }

std::optional<Rational> PsatEngine::optimize(const BranchConstraints& c, std::size_t formula, bool maximize) const {
  for (const auto& [f, iv] : c.bounds)
    if (!is_consistent(iv) || iv.lo > 1 || iv.hi < 0) return std::nullopt;
  auto r = solve_lp(c, sat_, world_count(), &sat_[formula], maximize, opts_.lp_mode);
  if (r.status != lp::Status::Optimal) return std::nullopt;
  return maximize ? Rational(-r.objective) : r.objective;
}

// ---------------------------------------------------------------- queries

ConsistencyResult PsatEngine::check_consistency() const {
  ConsistencyResult out;
  search(
      opts_.epsilon,
      [&](const Branch& b, const BranchConstraints&, const WorldDistribution& w) {
        out.verdict = Verdict::Consistent;
        out.witness = w;
        out.branch = b;
        return false;
      },
      &out.branch_count);
  if (out.verdict == Verdict::Consistent) return out;
  // Nothing feasible with strict violations; see whether the closed
  // boundary would admit a model.
  bool boundary = false;
  search(
      Rational(0),
      [&](const Branch&, const BranchConstraints&, const WorldDistribution&) {
        boundary = true;
        return false;
      },
      nullptr);
  out.verdict = boundary ? Verdict::UnknownEps : Verdict::Inconsistent;
  return out;
}

namespace {

template <class F>
std::vector<ProbInterval> optimize_leaves(const PsatEngine& engine, const std::vector<PsatEngine::Leaf>& leaves,
                                          std::size_t formula, F&&) {
  std::vector<ProbInterval> out(leaves.size());
  auto work = [&](std::size_t i) {
    auto lo = engine.optimize(leaves[i].constraints, formula, false);
    auto hi = engine.optimize(leaves[i].constraints, formula, true);
    if (!lo || !hi) throw Error("feasible branch became infeasible during optimization");
    out[i] = {*lo, *hi};
  };
  unsigned threads = std::max(1U, engine.options().threads);
  if (threads == 1 || leaves.size() < 2) {
    for (std::size_t i = 0; i < leaves.size(); ++i) work(i);
    return out;
  }
  for (std::size_t start = 0; start < leaves.size(); start += threads) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(leaves.size(), start + threads); ++i)
      batch.push_back(std::async(std::launch::async, work, i));
    for (auto& f : batch) f.get();
  }
  return out;
}

}  // namespace

TightenResult PsatEngine::tighten(const BasicFormula& f) const {
  TightenResult out;
  std::size_t id = formula_id(f);
  auto leaves = feasible_leaves(opts_.epsilon, &out.branch_count);
  if (leaves.empty()) throw InconsistentProgram("program has no model; nothing to tighten");
  out.feasible_branches = leaves.size();
  auto per_leaf = optimize_leaves(*this, leaves, id, 0);
  out.interval = per_leaf.front();
  for (const auto& iv : per_leaf) out.interval = meet_k(out.interval, iv);
  return out;
}

bool ki_satisfies(const PClause& c, const WorldDistribution& ki, const HerbrandBase& base) {
  if (c.head_interval.contains(formula_mass(ki, BasicFormula::single(c.head), base))) return true;
  for (const auto& b : c.body)
    if (!b.interval.contains(formula_mass(ki, b.formula, base))) return true;
  return false;
}

bool ki_satisfies(const PProgram& pp, const WorldDistribution& ki) {
  return std::all_of(pp.clauses.begin(), pp.clauses.end(),
                     [&](const PClause& c) { return ki_satisfies(c, ki, pp.base); });
}

bool ki_satisfies(const PTProgram& ground, const WorldDistribution& ki, const HerbrandBase& base) {
  auto holds = [&](const BasicFormula& f, const TPAnnotation& a) {
    auto sol = solve_constraint(a.constraint, ground.calendar);
    for (TimePoint t : sol)
      if (!interval_at(a, sol, t).contains(formula_mass(ki, substitute_time(f, t), base))) return false;
    return true;
  };
  for (const auto& c : ground.clauses) {
    if (holds(BasicFormula::single(c.head), c.head_annotation)) continue;
    bool body_holds = std::all_of(c.body.begin(), c.body.end(),
                                  [&](const AnnotatedFormula& b) { return holds(b.formula, b.annotation); });
    if (body_holds) return false;
  }
  return true;
}

ConsistencyResult check_consistency(const PProgram& pp, const SolveOptions& opts) {
  return PsatEngine(pp, opts).check_consistency();
}

TightenResult tighten(const PProgram& pp, const BasicFormula& f, const SolveOptions& opts) {
  return PsatEngine(pp, opts, {f}).tighten(f);
}

bool outside_base(const BasicFormula& f, const HerbrandBase& base) {
  return std::none_of(f.atoms.begin(), f.atoms.end(), [&](const TAtom& a) { return base.index_of(a).has_value(); });
}

EntailmentResult entails(const PProgram& pp, const Query& q, const Calendar& cal, const SolveOptions& opts) {
  if (q.kind != Query::Kind::Entail || !q.annotation) throw Error("entails() needs an ENTAIL query");
  EntailmentResult out;
  auto sol = solve_constraint(q.annotation->constraint, cal);
  std::vector<BasicFormula> instances, solved;
  for (TimePoint t : sol) {
    instances.push_back(substitute_time(q.formula, t));
    if (!outside_base(instances.back(), pp.base)) solved.push_back(instances.back());
  }
  PsatEngine engine(pp, opts, solved);
  auto leaves = engine.feasible_leaves(opts.epsilon, &out.branch_count);
  if (leaves.empty()) throw InconsistentProgram("program has no model; entailment would hold vacuously");
  if (sol.empty())
    out.warnings.push_back({Severity::Warning, DiagnosticKind::EmptySolutionSet,
                            "query constraint has no solution; entailment holds vacuously", q.span});
  for (std::size_t i = 0; i < sol.size(); ++i) {
    EntailmentResult::AtTime at;
    at.time = sol[i];
    at.formula = instances[i];
    if (outside_base(instances[i], pp.base)) {
      at.entailed = ProbInterval(0, 1);
    } else {
      auto per_leaf = optimize_leaves(engine, leaves, engine.formula_id(instances[i]), 0);
      at.entailed = per_leaf.front();
      for (const auto& iv : per_leaf) at.entailed = meet_k(at.entailed, iv);
    }
    at.required = interval_at(*q.annotation, sol, sol[i]);
    at.holds = leq_k(at.required, at.entailed);
    out.entailed = out.entailed && at.holds;
    out.per_time.push_back(std::move(at));
  }
  return out;
}

}  // namespace tplp
