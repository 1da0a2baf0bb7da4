#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tplp/compression.hpp"
#include "tplp/errors.hpp"

using namespace tplp;
using support::atom;
using support::q;

namespace {

CompressedAtom ca(const std::string& p) { return {p, {}}; }

std::set<TimePoint> times(std::initializer_list<std::int64_t> ts) {
  std::set<TimePoint> out;
  for (auto t : ts) out.insert(TimePoint{t});
  return out;
}

World world_of(const HerbrandBase& b, std::initializer_list<std::pair<const char*, std::int64_t>> on) {
  World w(b.size());
  for (auto [p, t] : on) w.set(*b.index_of(atom(p, t)));
  return w;
}

// PI(1) = {∅: 0.7, {a}: 0.3}, PI(2) = {∅: 0.4, {a}: 0.6} over the compressed base {a}.
EvolutionProfile two_slices() {
  EvolutionProfile pi;
  pi.base = CompressedBase({ca("a")});
  pi.interval = {TimePoint{1}, TimePoint{2}};
  WorldDistribution d1(1), d2(1);
  d1.set(World(1), q(7, 10));
  d1.set(World(1).set(0), q(3, 10));
  d2.set(World(1), q(2, 5));
  d2.set(World(1).set(0), q(3, 5));
  pi.dists[TimePoint{1}] = d1;
  pi.dists[TimePoint{2}] = d2;
  return pi;
}

SliceTable table(std::initializer_list<std::tuple<std::size_t, std::size_t, std::int64_t, Rational, Rational>> rows) {
  SliceTable t;
  for (const auto& [c, p, time, lo, hi] : rows) t[FormulaId{c, p}][TimePoint{time}] = ProbInterval(lo, hi);
  return t;
}

ProgramSkeleton skeleton(const std::string& text) {
  auto r = parse_skeleton(text);
  REQUIRE(r.ok());
  return *r.value;
}

WorldDistribution random_distribution(std::mt19937& g, std::size_t atoms, int support) {
  WorldDistribution ki(atoms);
  std::vector<long> w(static_cast<std::size_t>(support));
  long total = 0;
  for (auto& v : w) total += v = 1 + static_cast<long>(g() % 20);
  long left = total;
  for (int i = 0; i < support; ++i) {
    World x = World::from_index(g() % (std::uint64_t{1} << atoms), atoms);
    ki.add(x, Rational(w[static_cast<std::size_t>(i)], total));
    left -= w[static_cast<std::size_t>(i)];
  }
  return ki;
}

}  // namespace

TEST_CASE("compress reads off the true times") {
  auto cal = Calendar::range(1, 2);
  HerbrandBase a12({atom("a", 1), atom("a", 2)});
  auto th = compress(world_of(a12, {{"a", 1}}), a12, cal);
  CHECK(th.times.at(ca("a")) == times({1}));
  CHECK(compress(World(2), a12, cal).times.at(ca("a")).empty());

  HerbrandBase ab({atom("a", 1), atom("a", 2), atom("b", 1), atom("b", 2)});
  auto th2 = compress(world_of(ab, {{"a", 1}, {"a", 2}, {"b", 2}}), ab, cal);
  CHECK(th2.times.at(ca("a")) == times({1, 2}));
  CHECK(th2.times.at(ca("b")) == times({2}));
}

TEST_CASE("flatten inverts compress") {
  auto cal = Calendar::range(1, 2);
  Thread th;
  th.times[ca("a")] = times({1});
  auto w = flatten(th, cal);
  auto b = flattened_base(CompressedBase({ca("a")}), cal);
  CHECK(w == world_of(b, {{"a", 1}}));
  th.times[ca("a")] = {};
  CHECK(flatten(th, cal).none());
  th.times[ca("a")] = times({5});
  CHECK_THROWS_AS(flatten(th, cal), TimePointOutsideCalendar);
}

TEST_CASE("bijection laws") {
  std::mt19937 g(81);
  auto cal = Calendar::range(1, 3);
  CompressedBase cb({ca("a"), ca("b"), {"r", {"x"}}});
  auto base = flattened_base(cb, cal);
  REQUIRE(base.size() == 9);
  for (int i = 0; i < 200; ++i) {
    auto w = World::from_index(g() % 512, 9);
    CHECK(flatten(compress(w, base, cal), cal) == w);
    Thread th;
    for (const auto& a : cb.atoms()) {
      auto& s = th.times[a];
      for (auto t : cal.points)
        if (g() % 2) s.insert(t);
    }
    CHECK(compress(flatten(th, cal), base, cal) == th);
  }
}

TEST_CASE("thread probabilities") {
  auto cal = Calendar::range(1, 2);
  Thread th;
  th.times[ca("a")] = times({1});
  ThreadDistribution point{{th, Rational(1)}};
  CHECK(thread_prob(point, ca("a"), TimePoint{1}) == 1);
  CHECK(thread_prob(point, ca("a"), TimePoint{2}) == 0);

  ThreadDistribution uniform;
  for (auto s : {times({}), times({1}), times({2}), times({1, 2})}) {
    Thread t;
    t.times[ca("a")] = s;
    uniform[t] = q(1, 4);
  }
  CHECK(thread_prob(uniform, ca("a"), TimePoint{1}) == q(1, 2));
}

TEST_CASE("thread probability equals atom mass") {
  std::mt19937 g(82);
  auto cal = Calendar::range(1, 4);
  CompressedBase cb({ca("a"), ca("b")});
  auto base = flattened_base(cb, cal);
  for (int i = 0; i < 100; ++i) {
    auto ki = random_distribution(g, base.size(), 1 + static_cast<int>(g() % 12));
    auto kt = compress(ki, base, cal);
    Rational total = 0;
    for (const auto& [t, p] : kt) total += p;
    CHECK(total == ki.total());
    for (const auto& a : cb.atoms())
      for (auto t : cal.points) CHECK(thread_prob(kt, a, t) == formula_mass(ki, BasicFormula::single(a.at(t)), base));
  }
}

TEST_CASE("evolution programs") {
  auto skel = skeleton("calendar 1..2.\na.");
  auto slices = table({{0, 0, 1, q(3, 10), q(3, 10)}, {0, 0, 2, q(3, 5), q(3, 5)}});
  auto p = build_evolution_program(skel, slices, {TimePoint{1}, TimePoint{2}});
  REQUIRE(p.clauses.size() == 1);
  CHECK(render(p.clauses[0]) == "a@Y : <Y : 1 ~ 2, [0.3, 0.6], [0.3, 0.6]>.");

  auto one = build_evolution_program(skel, slices, {TimePoint{2}});
  CHECK(render(one.clauses[0]) == "a@Y : <Y = 2, [0.6], [0.6]>.");

  SliceTable missing = table({{0, 0, 1, q(3, 10), q(3, 10)}});
  CHECK_THROWS_AS(build_evolution_program(skel, missing, {TimePoint{1}, TimePoint{2}}), MissingTimeSlice);
  CHECK_THROWS(build_evolution_program(skel, slices, {}));
}

TEST_CASE("rules share the temporal variable and keep their own lists") {
  auto skel = skeleton("calendar 1..2.\nb :- a.\na.");
  auto slices = table({{0, 0, 1, q(1, 10), q(2, 10)},
                       {0, 0, 2, q(3, 10), q(4, 10)},
                       {0, 1, 1, q(5, 10), q(6, 10)},
                       {0, 1, 2, q(7, 10), q(8, 10)},
                       {1, 0, 1, q(1, 2), q(1, 2)},
                       {1, 0, 2, q(1, 2), q(1, 2)}});
  auto p = build_evolution_program(skel, slices, {TimePoint{1}, TimePoint{2}});
  CHECK(render(p.clauses[0]) ==
        "b@Y : <Y : 1 ~ 2, [0.1, 0.3], [0.2, 0.4]>\n    :- a@Y : <Y : 1 ~ 2, [0.5, 0.7], [0.6, 0.8]>.");
  auto slice = slice_program(skel, slices, TimePoint{2});
  REQUIRE(slice.clauses.size() == 2);
  CHECK(to_string(slice.clauses[0].head) == "b@2");
  CHECK(slice.clauses[0].head_interval == ProbInterval(q(3, 10), q(4, 10)));
  CHECK(slice.clauses[0].body[0].interval == ProbInterval(q(7, 10), q(8, 10)));
}

TEST_CASE("slice tables from CSV") {
  std::vector<Diagnostic> diags;
  auto t = parse_slice_csv(support::slurp("evolve.csv"), diags);
  REQUIRE(t);
  CHECK(diags.empty());
  CHECK(t->at(FormulaId{0, 0}).at(TimePoint{2}) == ProbInterval(q(3, 5), q(3, 5)));

  CHECK_FALSE(parse_slice_csv("1.0,1,0.5\n", diags));
  CHECK_FALSE(diags.empty());
  CHECK(to_string(FormulaId{2, 1}) == "3.1");
  CHECK(*parse_formula_id("3.1") == FormulaId{2, 1});
  CHECK_FALSE(parse_formula_id("0.1"));
}

TEST_CASE("evolution distribution") {
  auto cal = Calendar::range(1, 2);
  auto ki = evolution_distribution(two_slices(), cal);
  auto base = flattened_base(CompressedBase({ca("a")}), cal);
  CHECK(ki.is_normalized());
  CHECK(ki.at(World(2)) == q(11, 20));
  CHECK(ki.at(world_of(base, {{"a", 1}})) == q(3, 20));
  CHECK(ki.at(world_of(base, {{"a", 2}})) == q(3, 10));
  CHECK(ki.support_size() == 3);

  auto tags = tagged_distribution(two_slices(), cal);
  CHECK(tags.size() == 4);
  CHECK(tags.at(TaggedWorld{TimePoint{2}, World(1)}) == q(1, 5));

  EvolutionProfile empty = two_slices();
  for (auto& [t, d] : empty.dists) {
    d = WorldDistribution(1);
    d.set(World(1), 1);
  }
  auto delta = evolution_distribution(empty, cal);
  CHECK(delta.support_size() == 1);
  CHECK(delta.at(World(2)) == 1);

  EvolutionProfile single = two_slices();
  single.interval = {TimePoint{1}};
  single.dists.erase(TimePoint{2});
  auto one = evolution_distribution(single, Calendar::range(1, 1));
  CHECK(one.at(World(1)) == q(7, 10));
  CHECK(one.at(World(1).set(0)) == q(3, 10));
}

TEST_CASE("verification readings") {
  auto skel = skeleton("calendar 1..2.\na.");
  auto slices = table({{0, 0, 1, q(3, 10), q(3, 10)}, {0, 0, 2, q(3, 5), q(3, 5)}});
  auto p = build_evolution_program(skel, slices, {TimePoint{1}, TimePoint{2}});

  auto cond = verify_evolution(two_slices(), p, VerifyMode::Conditional);
  CHECK(cond.all_pass);
  REQUIRE(cond.checks.size() == 2);
  CHECK(cond.checks[0].mass == q(3, 10));
  CHECK(cond.checks[1].mass == q(3, 5));

  auto lit = verify_evolution(two_slices(), p, VerifyMode::Literal);
  CHECK_FALSE(lit.all_pass);
  REQUIRE(lit.checks.size() == 2);
  CHECK(lit.checks[0].mass == q(3, 20));
  CHECK_FALSE(lit.checks[0].pass);
  REQUIRE(lit.program_satisfied);
  CHECK_FALSE(*lit.program_satisfied);

  // With one time point the readings coincide.
  auto skel1 = skeleton("calendar 1..1.\na.");
  auto s1 = table({{0, 0, 1, q(3, 10), q(3, 10)}});
  auto p1 = build_evolution_program(skel1, s1, {TimePoint{1}});
  EvolutionProfile pi = two_slices();
  pi.interval = {TimePoint{1}};
  pi.dists.erase(TimePoint{2});
  p1.calendar = Calendar::range(1, 1);
  CHECK(verify_evolution(pi, p1, VerifyMode::Literal).all_pass);
  CHECK(verify_evolution(pi, p1, VerifyMode::Conditional).all_pass);
}

TEST_CASE("evolution distributions are normalized and conditional checks pass on slice models") {
  std::mt19937 g(83);
  auto skel = skeleton("calendar 1..3.\nb :- (a or c).\na.");
  auto cal = Calendar::range(1, 3);
  CompressedBase cb({ca("a"), ca("b"), ca("c")});
  for (int i = 0; i < 100; ++i) {
    EvolutionProfile pi;
    pi.base = cb;
    pi.interval = cal.points;
    SliceTable slices;
    for (auto t : cal.points) {
      auto d = random_distribution(g, 3, 1 + static_cast<int>(g() % 6));
      pi.dists[t] = d;
      auto mass = [&](const BasicFormula& f) { return formula_mass(d, f, HerbrandBase({atom("a", 0), atom("b", 0), atom("c", 0)})); };
      auto b = mass(BasicFormula::single(atom("b", 0)));
      auto ac = mass(BasicFormula{Connective::Or, {atom("a", 0), atom("c", 0)}});
      auto a = mass(BasicFormula::single(atom("a", 0)));
      // Widen by random amounts; the slice stays a model of PI(t).
      auto widen = [&](const Rational& m) {
        Rational lo = m - q(static_cast<long>(g() % 3), 10), hi = m + q(static_cast<long>(g() % 3), 10);
        return ProbInterval(lo < 0 ? Rational(0) : lo, hi > 1 ? Rational(1) : hi);
      };
      slices[FormulaId{0, 0}][t] = widen(b);
      slices[FormulaId{0, 1}][t] = widen(ac);
      slices[FormulaId{1, 0}][t] = widen(a);
    }
    CHECK(evolution_distribution(pi, cal).is_normalized());
    auto p = build_evolution_program(skel, slices, cal.points);
    CHECK(verify_evolution(pi, p, VerifyMode::Conditional).all_pass);
  }
}
