#include "tplp/maxent.hpp"

#include <algorithm>
#include <cmath>

#include "tplp/errors.hpp"

namespace tplp {

namespace {

constexpr double kEntropyTolerance = 1e-8;
constexpr double kViolationTolerance = 1e-9;
constexpr double kActiveTolerance = 1e-7;
// Doubles are snapped to this grid before the exact correction.
constexpr long long kSnapScale = 1'000'000'000'000LL;

struct RowSpec {
  const std::vector<std::uint32_t>* worlds;
  Rational lo, hi;
  double lo_d, hi_d;
};

// Forced-zero worlds: any world inside a row with upper bound 0, or outside
// a row with lower bound 1. Removing them up front keeps the dual finite.
std::vector<char> live_worlds(const std::vector<RowSpec>& rows, std::size_t n) {
  std::vector<char> live(n, 1);
  std::vector<char> mark(n);
  for (const auto& r : rows) {
    if (r.hi == 0) {
      for (auto w : *r.worlds) live[w] = 0;
    } else if (r.lo == 1) {
      std::fill(mark.begin(), mark.end(), 0);
      for (auto w : *r.worlds) mark[w] = 1;
      for (std::size_t w = 0; w < n; ++w)
        if (!mark[w]) live[w] = 0;
    }
  }
  return live;
}

double entropy_of(const std::vector<double>& p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log(x);
  return h;
}

double row_mass(const std::vector<double>& p, const RowSpec& r) {
  double m = 0;
  for (auto w : *r.worlds) m += p[w];
  return m;
}

// Coordinate ascent on the dual: each row is an exact I-projection of the
// distribution with that row's own multiplier removed, clamped to [lo, hi].
std::vector<double> ascend(const std::vector<RowSpec>& rows, const std::vector<char>& live, std::size_t cap,
                           std::size_t& sweeps) {
  const std::size_t n = live.size();
  std::size_t alive = std::count(live.begin(), live.end(), 1);
  std::vector<double> p(n, 0.0);
  for (std::size_t w = 0; w < n; ++w)
    if (live[w]) p[w] = 1.0 / static_cast<double>(alive);
  std::vector<double> mu(rows.size(), 0.0);
  std::vector<char> in_row(n);
  double h = entropy_of(p);
  for (sweeps = 1; sweeps <= cap; ++sweeps) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.lo == row.hi && (row.hi == 0 || row.lo == 1)) continue;
      double m = row_mass(p, row);
      if (m <= 0 || m >= 1) continue;
      double odds0 = m / (1 - m) * std::exp(-mu[r]);
      double m0 = odds0 / (1 + odds0);
      double target = std::clamp(m0, row.lo_d, row.hi_d);
      if (target <= 0 || target >= 1) continue;
      mu[r] = std::log(target / (1 - target)) - std::log(odds0);
      double in_scale = target / m, out_scale = (1 - target) / (1 - m);
      std::fill(in_row.begin(), in_row.end(), 0);
      for (auto w : *row.worlds) in_row[w] = 1;
      for (std::size_t w = 0; w < n; ++w) p[w] *= in_row[w] ? in_scale : out_scale;
    }
    double violation = 0;
    for (const auto& row : rows) {
      double m = row_mass(p, row);
      violation = std::max({violation, row.lo_d - m, m - row.hi_d});
    }
    double next = entropy_of(p);
    bool settled = std::abs(next - h) < kEntropyTolerance && violation < kViolationTolerance;
    h = next;
    if (settled) return p;
  }
  throw NonConvergence("maximum-entropy iteration did not converge within " + std::to_string(cap) + " sweeps");
}

// Solves the square system M c = rhs exactly; dependent rows are dropped
// when consistent. Returns nullopt for an inconsistent system.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const std::size_t k = rhs.size();
  std::vector<std::size_t> pivot_col(k, k);
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < k; ++col) {
    std::size_t sel = row;
    while (sel < k && m[sel][col] == 0) ++sel;
    if (sel == k) continue;
    std::swap(m[sel], m[row]);
    std::swap(rhs[sel], rhs[row]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[row][col];
      for (std::size_t c = col; c < k; ++c) m[r][c] -= f * m[row][c];
      rhs[r] -= f * rhs[row];
    }
    pivot_col[row] = col;
    ++row;
  }
  for (std::size_t r = row; r < k; ++r)
    if (rhs[r] != 0) return std::nullopt;
  std::vector<Rational> c(k, Rational(0));
  for (std::size_t r = 0; r < row; ++r) c[pivot_col[r]] = rhs[r] / m[r][pivot_col[r]];
  return c;
}

bool satisfies_all(const std::vector<Rational>& q, const std::vector<RowSpec>& rows) {
  Rational total = 0;
  for (const auto& x : q) {
    if (x < 0) return false;
    total += x;
  }
  if (total != 1) return false;
  for (const auto& r : rows) {
    Rational m = 0;
    for (auto w : *r.worlds) m += q[w];
    if (m < r.lo || m > r.hi) return false;
  }
  return true;
}

// Moves the snapped point onto every row active at the optimum with a
// multiplicative linear correction q_w = p_w (1 + sum_r c_r A_rw).
std::vector<Rational> exact_correction(const std::vector<Rational>& p, const std::vector<double>& pd,
                                       const std::vector<RowSpec>& rows) {
  const std::size_t n = p.size();
  std::vector<std::vector<char>> active;  // indicator rows, first is normalization
  std::vector<Rational> target;
  active.emplace_back(n, 1);
  target.emplace_back(1);
  for (const auto& r : rows) {
    double m = row_mass(pd, r);
    std::optional<Rational> t;
    if (r.lo == r.hi || std::abs(m - r.lo_d) < kActiveTolerance) {
      t = r.lo;
    } else if (std::abs(m - r.hi_d) < kActiveTolerance) {
      t = r.hi;
    }
    if (!t) continue;
    std::vector<char> ind(n, 0);
    for (auto w : *r.worlds) ind[w] = 1;
    active.push_back(std::move(ind));
    target.push_back(*t);
  }
  const std::size_t k = active.size();
  std::vector<std::vector<Rational>> gram(k, std::vector<Rational>(k, Rational(0)));
  std::vector<Rational> rhs(k);
  for (std::size_t a = 0; a < k; ++a) {
    Rational mass = 0;
    for (std::size_t w = 0; w < n; ++w)
      if (active[a][w]) mass += p[w];
    rhs[a] = target[a] - mass;
    for (std::size_t b = a; b < k; ++b) {
      Rational s = 0;
      for (std::size_t w = 0; w < n; ++w)
        if (active[a][w] && active[b][w]) s += p[w];
      gram[a][b] = gram[b][a] = s;
    }
  }
  auto c = solve_exact(std::move(gram), std::move(rhs));
  if (!c) return p;
  std::vector<Rational> q = p;
  for (std::size_t w = 0; w < n; ++w) {
    if (p[w] == 0) continue;
    Rational factor = 1;
    for (std::size_t a = 0; a < k; ++a)
      if (active[a][w]) factor += (*c)[a];
    q[w] = p[w] * factor;
  }
  return q;
}

// Smallest blend (1-l) q + l v that satisfies every constraint, given a
// feasible v. Constraints tight at both points are unaffected.
std::vector<Rational> blend_toward(const std::vector<Rational>& q, const std::vector<Rational>& v,
                                   const std::vector<RowSpec>& rows) {
  Rational lambda = 0;
  auto need = [&](const Rational& gq, const Rational& gv) {
    if (gq >= 0) return;
    Rational l = gv > gq ? Rational(-gq / (gv - gq)) : Rational(1);
    lambda = std::max(lambda, std::min(l, Rational(1)));
  };
  for (std::size_t w = 0; w < q.size(); ++w) need(q[w], v[w]);
  for (const auto& r : rows) {
    Rational mq = 0, mv = 0;
    for (auto w : *r.worlds) {
      mq += q[w];
      mv += v[w];
    }
    need(mq - r.lo, mv - r.lo);
    need(r.hi - mq, r.hi - mv);
  }
  Rational tq = 0;
  for (const auto& x : q) tq += x;
  if (tq != 1) lambda = 1;  // normalization is an equality; only v keeps it
  std::vector<Rational> out(q.size());
  for (std::size_t w = 0; w < q.size(); ++w) out[w] = (1 - lambda) * q[w] + lambda * v[w];
  return out;
}

}  // namespace

std::optional<MaxEntResult> max_entropy_on(const PsatEngine& engine, const BranchConstraints& c) {
  auto vertex = engine.solve_feasible(c);
  if (!vertex) return std::nullopt;
  const std::size_t n = engine.world_count();

  std::vector<RowSpec> rows;
  for (const auto& [f, iv] : c.bounds) {
    Rational lo = std::max(iv.lo, Rational(0)), hi = std::min(iv.hi, Rational(1));
    if (lo == 0 && hi == 1) continue;
    rows.push_back({&engine.satisfying_worlds(f), lo, hi, to_double(lo), to_double(hi)});
  }

  MaxEntResult out;
  auto live = live_worlds(rows, n);
  auto pd = ascend(rows, live, engine.options().max_entropy_iterations, out.sweeps);

  std::vector<Rational> p(n, Rational(0));
  for (std::size_t w = 0; w < n; ++w)
    if (live[w]) p[w] = Rational(std::llround(pd[w] * static_cast<double>(kSnapScale)), kSnapScale);

  std::vector<Rational> q = exact_correction(p, pd, rows);
  if (!satisfies_all(q, rows)) {
    std::vector<Rational> v(n, Rational(0));
    for (const auto& [w, mass] : *vertex) v[w.to_index()] = mass;
    q = blend_toward(q, v, rows);
    out.exact_projection = false;
  }
  out.distribution = engine.to_distribution(q);
  out.entropy = entropy(out.distribution);
  return out;
}

MaxEntResult max_entropy_model(const PProgram& pp, const SolveOptions& opts) {
  PsatEngine engine(pp, opts);
  auto leaves = engine.feasible_leaves(opts.epsilon);
  if (leaves.empty()) throw InconsistentProgram("program has no model; maximum entropy is undefined");
  std::optional<MaxEntResult> best;
  for (const auto& leaf : leaves) {
    auto r = max_entropy_on(engine, leaf.constraints);
    if (!r) continue;
    r->branch = leaf.branch;
    if (!best || r->entropy > best->entropy + 1e-12) best = std::move(r);
  }
  if (!best) throw InconsistentProgram("program has no model; maximum entropy is undefined");
  return *best;
}

}  // namespace tplp
