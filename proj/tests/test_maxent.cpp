#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "support.hpp"
#include "tplp/errors.hpp"
#include "tplp/maxent.hpp"

using namespace tplp;
using support::atom;
using support::q;
using support::single;

namespace {

double h2(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

PProgram parsed(const std::string& text) { return unfold(support::program(text)); }

}  // namespace

TEST_CASE("a single interval fact") {
  auto r = max_entropy_model(unfold(support::load("mx.tpl")));
  CHECK(r.distribution.is_normalized());
  CHECK(formula_mass(r.distribution, single("a", 1), HerbrandBase({atom("a", 1)})) == q(1, 2));
  CHECK(r.entropy == doctest::Approx(std::log(2.0)));
}

TEST_CASE("a point fact pins the entropy") {
  auto r = max_entropy_model(parsed("calendar 1..1. a@Y : <Y = 1, [0.9], [0.9]>."));
  CHECK(r.entropy == doctest::Approx(h2(0.9)).epsilon(1e-9));
  CHECK(r.exact_projection);
}

TEST_CASE("an unconstrained atom is uniform") {
  auto r = max_entropy_model(parsed("calendar 1..1. a@Y : <Y = 1, [0], [1]>."));
  for (const auto& [w, p] : r.distribution) CHECK(p == q(1, 2));
  CHECK(r.distribution.support_size() == 2);
}

TEST_CASE("independent facts give the product distribution") {
  auto pp = parsed("calendar 1..1. a@Y : <Y = 1, [0.3], [0.3]>. b@Y : <Y = 1, [0.8], [0.8]>. c@Y : <Y = 1, [0], [1]>.");
  auto r = max_entropy_model(pp);
  CHECK(ki_satisfies(pp, r.distribution));
  CHECK(r.entropy == doctest::Approx(h2(0.3) + h2(0.8) + std::log(2.0)).epsilon(1e-7));
}

TEST_CASE("results satisfy the program exactly") {
  auto p0 = unfold(support::load("p0.tpl"));
  auto r = max_entropy_model(p0);
  CHECK(r.distribution.is_normalized());
  CHECK(ki_satisfies(p0, r.distribution));
  CHECK(r.entropy == doctest::Approx(entropy(r.distribution)));
}

TEST_CASE("inconsistent programs have no model") {
  CHECK_THROWS_AS(max_entropy_model(unfold(support::load("p1.tpl"))), InconsistentProgram);
}

TEST_CASE("the sweep cap is enforced") {
  SolveOptions opts;
  opts.max_entropy_iterations = 1;
  auto pp = parsed("calendar 1..1. a@Y : <Y = 1, [0.3], [0.35]>. b@Y : <Y = 1, [0.8], [0.9]> :- a@Y : <Y = 1, [0.3], [0.4]>.");
  CHECK_THROWS_AS(max_entropy_model(pp, opts), NonConvergence);
}

TEST_CASE("no grid model has more entropy") {
  std::mt19937 g(71);
  auto iv = [&] {
    int a = static_cast<int>(g() % 11), b = static_cast<int>(g() % 11);
    return ProbInterval(q(std::min(a, b), 10), q(std::max(a, b), 10));
  };
  int checked = 0;
  for (int i = 0; i < 30; ++i) {
    PProgram pp;
    pp.clauses.push_back({atom("a", 1), iv(), {}});
    pp.clauses.push_back({atom("b", 1), iv(), {{single("a", 1), iv()}}});
    pp.base = herbrand_base(pp);
    if (check_consistency(pp).verdict != Verdict::Consistent) continue;
    auto r = max_entropy_model(pp);
    CHECK(ki_satisfies(pp, r.distribution));
    // Masses in steps of 1/10 over the four worlds.
    for (int w0 = 0; w0 <= 10; ++w0)
      for (int w1 = 0; w0 + w1 <= 10; ++w1)
        for (int w2 = 0; w0 + w1 + w2 <= 10; ++w2) {
          WorldDistribution ki(2);
          int units[] = {w0, w1, w2, 10 - w0 - w1 - w2};
          for (std::uint64_t w = 0; w < 4; ++w)
            if (units[w]) ki.set(World::from_index(w, 2), q(units[w], 10));
          if (!ki_satisfies(pp, ki)) continue;
          ++checked;
          CHECK(entropy(ki) <= r.entropy + 1e-9);
        }
  }
  CHECK(checked > 0);
}
