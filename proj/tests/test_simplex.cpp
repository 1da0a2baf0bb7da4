#include <doctest.h>

#include <random>

#include "oracle/oracle.hpp"
#include "support.hpp"
#include "tplp/simplex.hpp"

using namespace tplp;
using support::q;

namespace {

struct Random {
  lp::Problem<Rational> exact;
  lp::Problem<double> approx;
  oracle::DenseLp dense;
};

// Bounded by a row sum(x) <= 10, so no LP is unbounded.
Random random_lp(std::mt19937& g) {
  Random r;
  std::size_t n = 2 + g() % 6, m = 1 + g() % 5;
  r.exact.num_vars = r.approx.num_vars = n;
  auto add = [&](std::vector<std::int64_t> coeffs, lp::Sense s, long rhs) {
    lp::Row<Rational> re;
    lp::Row<double> ra;
    std::vector<double> dense(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (coeffs[j] != 0) {
        re.coeffs.emplace_back(j, coeffs[j]);
        ra.coeffs.emplace_back(j, coeffs[j]);
        dense[j] = static_cast<double>(coeffs[j]);
      }
    re.sense = ra.sense = s;
    re.rhs = Rational(rhs);
    ra.rhs = static_cast<double>(rhs);
    r.exact.rows.push_back(re);
    r.approx.rows.push_back(ra);
    r.dense.a.push_back(dense);
    r.dense.sense.push_back(s == lp::Sense::Le ? -1 : s == lp::Sense::Ge ? 1 : 0);
    r.dense.b.push_back(static_cast<double>(rhs));
  };
  add(std::vector<std::int64_t>(n, 1), lp::Sense::Le, 10);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::int64_t> c(n);
    for (auto& v : c) v = static_cast<std::int64_t>(g() % 4) - 1;
    add(c, static_cast<lp::Sense>(g() % 3), static_cast<long>(g() % 7) - 1);
  }
  r.dense.c.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    long c = static_cast<long>(g() % 7) - 3;
    r.exact.objective.emplace_back(j, Rational(c));
    r.approx.objective.emplace_back(j, static_cast<double>(c));
    r.dense.c[j] = static_cast<double>(c);
  }
  return r;
}

template <class Num>
bool satisfies(const lp::Problem<Num>& p, const std::vector<Num>& x, Num tol) {
  for (const auto& v : x)
    if (v < -tol) return false;
  for (const auto& row : p.rows) {
    Num s(0);
    for (auto [j, c] : row.coeffs) s += Num(c) * x[j];
    if (row.sense == lp::Sense::Le && s > row.rhs + tol) return false;
    if (row.sense == lp::Sense::Ge && s < row.rhs - tol) return false;
    if (row.sense == lp::Sense::Eq && (s > row.rhs + tol || s < row.rhs - tol)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("a small textbook problem") {
  // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
  lp::Problem<Rational> p;
  p.num_vars = 2;
  p.rows.push_back({{{0, 1}, {1, 2}}, lp::Sense::Le, Rational(4)});
  p.rows.push_back({{{0, 3}, {1, 1}}, lp::Sense::Le, Rational(6)});
  p.objective = {{0, Rational(-1)}, {1, Rational(-1)}};
  auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == q(-14, 5));
  CHECK(s.x[0] == q(8, 5));
  CHECK(s.x[1] == q(6, 5));
}

TEST_CASE("infeasibility is detected exactly") {
  lp::Problem<Rational> p;
  p.num_vars = 1;
  p.rows.push_back({{{0, 1}}, lp::Sense::Ge, q(1, 2)});
  p.rows.push_back({{{0, 1}}, lp::Sense::Le, q(1, 2) - q(1, 1000000)});
  CHECK(lp::solve(p).status == lp::Status::Infeasible);
}

TEST_CASE("exact, floating and reference solvers agree on random problems") {
  std::mt19937 g(51);
  int feasible = 0;
  for (int i = 0; i < 400; ++i) {
    auto r = random_lp(g);
    auto e = lp::solve(r.exact);
    auto a = lp::solve(r.approx);
    auto o = oracle::tableau_minimize(r.dense);
    REQUIRE(e.status != lp::Status::IterationLimit);
    CHECK((e.status == lp::Status::Optimal) == o.feasible);
    CHECK((a.status == lp::Status::Optimal) == o.feasible);
    if (!o.feasible) continue;
    ++feasible;
    CHECK(satisfies(r.exact, e.x, Rational(0)));
    CHECK(satisfies(r.approx, a.x, 1e-7));
    CHECK(to_double(e.objective) == doctest::Approx(o.value).epsilon(1e-7));
    CHECK(a.objective == doctest::Approx(o.value).epsilon(1e-7));
  }
  CHECK(feasible > 50);
}

TEST_CASE("a floating basis warm-starts the exact solver") {
  std::mt19937 g(52);
  for (int i = 0; i < 300; ++i) {
    auto r = random_lp(g);
    auto cold = lp::solve(r.exact);
    auto a = lp::solve(r.approx);
    auto warm = lp::solve(r.exact, 5'000'000, &a.basis);
    CHECK(warm.status == cold.status);
    if (cold.status != lp::Status::Optimal) continue;
    CHECK(warm.objective == cold.objective);
    CHECK(satisfies(r.exact, warm.x, Rational(0)));
    // Starting from the optimal basis there is nothing left to do.
    auto again = lp::solve(r.exact, 5'000'000, &cold.basis);
    CHECK(again.objective == cold.objective);
    CHECK(again.iterations <= cold.iterations);
  }
}

TEST_CASE("unusable warm starts are ignored") {
  std::mt19937 g(53);
  auto r = random_lp(g);
  auto cold = lp::solve(r.exact);
  std::vector<std::size_t> bogus(r.exact.rows.size(), 0);  // repeated column
  auto s = lp::solve(r.exact, 5'000'000, &bogus);
  CHECK(s.status == cold.status);
  if (cold.status == lp::Status::Optimal) CHECK(s.objective == cold.objective);
  std::vector<std::size_t> short_basis;
  CHECK(lp::solve(r.exact, 5'000'000, &short_basis).status == cold.status);
}
