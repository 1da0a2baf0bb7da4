#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tplp/interval.hpp"

using namespace tplp;
using support::q;

namespace {

ProbInterval iv(long a, long b, long d = 10) { return {q(a, d), q(b, d)}; }

// Random ends on a grid of tenths; lo > hi allowed.
ProbInterval any(std::mt19937& rng) {
  std::uniform_int_distribution<long> g(0, 10);
  return iv(g(rng), g(rng));
}

ProbInterval consistent(std::mt19937& rng) {
  std::uniform_int_distribution<long> g(0, 10);
  long a = g(rng), b = g(rng);
  return iv(std::min(a, b), std::max(a, b));
}

}  // namespace

TEST_CASE("belief ordering") {
  CHECK(leq_b(iv(0, 0), iv(10, 10)));
  CHECK_FALSE(leq_b(iv(3, 5), iv(2, 9)));
  CHECK(leq_b(iv(3, 5), iv(3, 5)));
}

TEST_CASE("knowledge ordering") {
  CHECK(leq_k(iv(0, 10), iv(3, 5)));
  CHECK_FALSE(leq_k(iv(3, 5), iv(0, 10)));
  CHECK(leq_k(iv(3, 5), iv(3, 5)));
}

TEST_CASE("knowledge meet") {
  CHECK(meet_k(iv(3, 5), iv(4, 9)) == iv(3, 9));
  CHECK(meet_k(iv(0, 10), iv(3, 5)) == iv(0, 10));
  CHECK(meet_k(iv(3, 5), iv(3, 5)) == iv(3, 5));
}

TEST_CASE("knowledge join") {
  auto j = join_k(iv(0, 3), iv(7, 10));
  CHECK(j == iv(7, 3));
  CHECK_FALSE(is_consistent(j));
  CHECK(join_k(iv(2, 8), iv(4, 9)) == iv(4, 8));
  CHECK(join_k(iv(3, 5), iv(0, 10)) == iv(3, 5));
}

TEST_CASE("ignorance operators") {
  CHECK(and_ig(iv(10, 10), iv(10, 10)) == iv(10, 10));
  CHECK(and_ig(iv(0, 10), iv(0, 10)) == iv(0, 10));
  CHECK(and_ig(iv(3, 6), iv(5, 8)) == iv(0, 6));
  CHECK(or_ig(iv(0, 0), iv(0, 0)) == iv(0, 0));
  CHECK(or_ig(iv(3, 6), iv(5, 8)) == iv(5, 10));
  CHECK(or_ig(iv(0, 10), iv(0, 10)) == iv(0, 10));
}

TEST_CASE("consistency predicate") {
  CHECK_FALSE(is_consistent(iv(7, 3)));
  CHECK(is_consistent(iv(0, 10)));
  CHECK(is_consistent(iv(5, 5)));
}

TEST_CASE("text form") { CHECK(to_string(iv(3, 4)) == "[0.3, 0.4]"); }

TEST_CASE("meet and join form a lattice under the knowledge order") {
  std::mt19937 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto a = any(rng), b = any(rng), c = any(rng);
    CHECK(meet_k(a, a) == a);
    CHECK(join_k(a, a) == a);
    CHECK(meet_k(a, b) == meet_k(b, a));
    CHECK(join_k(a, b) == join_k(b, a));
    CHECK(meet_k(meet_k(a, b), c) == meet_k(a, meet_k(b, c)));
    CHECK(join_k(join_k(a, b), c) == join_k(a, join_k(b, c)));
    CHECK(meet_k(a, join_k(a, b)) == a);
    CHECK(join_k(a, meet_k(a, b)) == a);
    // meet is the greatest lower bound, join the least upper bound
    CHECK(leq_k(meet_k(a, b), a));
    CHECK(leq_k(a, join_k(a, b)));
    CHECK(leq_k(a, b) == (meet_k(a, b) == a));
  }
}

TEST_CASE("join of consistent intervals is inconsistent exactly when they are disjoint") {
  std::mt19937 rng(12);
  for (int i = 0; i < 2000; ++i) {
    auto a = consistent(rng), b = consistent(rng);
    bool disjoint = a.hi < b.lo || b.hi < a.lo;
    CHECK(is_consistent(join_k(a, b)) == !disjoint);
  }
}

TEST_CASE("ignorance operators stay in the unit square and follow the Frechet bounds") {
  std::mt19937 rng(13);
  for (int i = 0; i < 2000; ++i) {
    auto a = consistent(rng), b = consistent(rng);
    auto c = and_ig(a, b), d = or_ig(a, b);
    CHECK(c.lo == std::max(Rational(0), Rational(a.lo + b.lo - 1)));
    for (const auto& x : {c.lo, c.hi, d.lo, d.hi}) {
      CHECK(x >= 0);
      CHECK(x <= 1);
    }
    CHECK(c == and_ig(b, a));
    CHECK(d == or_ig(b, a));
  }
}

TEST_CASE("ignorance operators are not lattice operations") {
  // Search for an absorption failure; one is expected quickly.
  std::mt19937 rng(14);
  bool found = false;
  for (int i = 0; i < 10000 && !found; ++i) {
    auto a = consistent(rng), b = consistent(rng);
    found = and_ig(a, or_ig(a, b)) != a || or_ig(a, and_ig(a, b)) != a;
  }
  CHECK(found);
}
