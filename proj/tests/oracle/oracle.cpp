#include "oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace oracle {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
  // rows 0..m-1 constraints, row m objective; last column is the rhs.
  std::vector<std::vector<double>> t;
  std::vector<std::size_t> basis;
  std::size_t m = 0, cols = 0;

  double& rhs(std::size_t r) { return t[r][cols]; }

  void pivot(std::size_t r, std::size_t c) {
    double p = t[r][c];
    for (auto& v : t[r]) v /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r || t[i][c] == 0) continue;
      double f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // Minimizes the objective row; columns >= limit never enter.
  void run(std::size_t limit) {
    for (int guard = 0; guard < 100000; ++guard) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < limit; ++j)
        if (t[m][j] < -kTol) {
          enter = j;
          break;
        }
      if (enter == cols) return;
      std::size_t leave = m;
      double best = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= kTol) continue;
        double ratio = t[i][cols] / t[i][enter];
        if (leave == m || ratio < best - kTol || (std::abs(ratio - best) <= kTol && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return;  // unbounded; cannot happen on the simplex
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult tableau_minimize(const DenseLp& lp) {
  const std::size_t m = lp.a.size();
  const std::size_t n = lp.c.size();
  std::size_t slacks = 0;
  for (int s : lp.sense)
    if (s != 0) ++slacks;
  Tableau tab;
  tab.m = m;
  tab.cols = n + slacks + m;
  tab.t.assign(m + 1, std::vector<double>(tab.cols + 1, 0.0));
  tab.basis.assign(m, 0);
  std::size_t slack = n;
  for (std::size_t i = 0; i < m; ++i) {
    double sign = lp.b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = sign * lp.a[i][j];
    if (lp.sense[i] != 0) tab.t[i][slack++] = sign * (lp.sense[i] < 0 ? 1.0 : -1.0);
    tab.t[i][n + slacks + i] = 1.0;
    tab.rhs(i) = sign * lp.b[i];
    tab.basis[i] = n + slacks + i;
  }
  // Phase I objective: sum of artificials, expressed in non-basic terms.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= tab.cols; ++j)
      if (j < n + slacks || j == tab.cols) tab.t[m][j] -= tab.t[i][j];
  tab.run(tab.cols);
  LpResult out;
  if (-tab.t[m][tab.cols] > 1e-7) return out;
  // Pivot zero-level artificials out where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n + slacks) continue;
    for (std::size_t j = 0; j < n + slacks; ++j)
      if (std::abs(tab.t[i][j]) > kTol) {
        tab.pivot(i, j);
        break;
      }
  }
  // Phase II.
  std::fill(tab.t[m].begin(), tab.t[m].end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) tab.t[m][j] = lp.c[j];
  for (std::size_t i = 0; i < m; ++i) {
    double cb = tab.basis[i] < n ? lp.c[tab.basis[i]] : 0.0;
    if (cb == 0) continue;
    for (std::size_t j = 0; j <= tab.cols; ++j) tab.t[m][j] -= cb * tab.t[i][j];
  }
  tab.run(n + slacks);
  out.feasible = true;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < n) out.x[tab.basis[i]] = tab.rhs(i);
  out.value = 0;
  for (std::size_t j = 0; j < n; ++j) out.value += lp.c[j] * out.x[j];
  return out;
}

Formula from_formula(const tplp::BasicFormula& f) {
  Formula out;
  out.disjunction = f.connective == tplp::Connective::Or;
  for (const auto& a : f.atoms) out.atoms.push_back(tplp::to_string(a));
  return out;
}

Program from_pprogram(const tplp::PProgram& pp) {
  Program p;
  auto iv = [](const tplp::ProbInterval& i) { return Interval{tplp::to_double(i.lo), tplp::to_double(i.hi)}; };
  for (const auto& c : pp.clauses) {
    Clause cl;
    cl.head = tplp::to_string(c.head);
    cl.head_iv = iv(c.head_interval);
    for (const auto& b : c.body) cl.body.emplace_back(from_formula(b.formula), iv(b.interval));
    p.clauses.push_back(std::move(cl));
  }
  return p;
}

TightenOutcome brute_force_tighten(const Program& p, const Formula& query, double eps) {
  std::map<std::string, std::size_t> bit;
  auto note = [&](const std::string& a) { bit.emplace(a, 0); };
  for (const auto& c : p.clauses) {
    note(c.head);
    for (const auto& [f, iv] : c.body)
      for (const auto& a : f.atoms) note(a);
  }
  for (const auto& a : query.atoms) note(a);
  std::size_t k = 0;
  for (auto& [name, b] : bit) b = k++;
  const std::size_t worlds = std::size_t{1} << k;

  auto row_of = [&](const Formula& f) {
    std::vector<double> row(worlds, 0.0);
    for (std::size_t w = 0; w < worlds; ++w) {
      bool v = !f.disjunction;
      for (const auto& a : f.atoms) {
        bool t = (w >> bit.at(a)) & 1U;
        v = f.disjunction ? (v || t) : (v && t);
      }
      row[w] = v ? 1.0 : 0.0;
    }
    return row;
  };

  // Option lists per clause: 0 head in, 2k+1 conjunct k low, 2k+2 conjunct k high.
  std::vector<std::size_t> choice(p.clauses.size(), 0);
  TightenOutcome out;
  auto query_row = row_of(query);
  for (;;) {
    DenseLp lp;
    lp.a.push_back(std::vector<double>(worlds, 1.0));
    lp.sense.push_back(0);
    lp.b.push_back(1.0);
    bool possible = true;
    for (std::size_t i = 0; i < p.clauses.size() && possible; ++i) {
      const auto& c = p.clauses[i];
      auto add = [&](std::vector<double> row, int sense, double rhs) {
        lp.a.push_back(std::move(row));
        lp.sense.push_back(sense);
        lp.b.push_back(rhs);
      };
      if (choice[i] == 0) {
        auto row = row_of(Formula{{c.head}, false});
        add(row, 1, c.head_iv.lo);
        add(row, -1, c.head_iv.hi);
      } else {
        std::size_t kk = (choice[i] - 1) / 2;
        bool low = (choice[i] - 1) % 2 == 0;
        const auto& [f, iv] = c.body[kk];
        double bound = low ? iv.lo - eps : iv.hi + eps;
        if (bound < 0 || bound > 1) possible = false;
        add(row_of(f), low ? -1 : 1, bound);
      }
    }
    ++out.branches;
    if (possible) {
      lp.c = query_row;
      auto lo = tableau_minimize(lp);
      if (lo.feasible) {
        ++out.feasible;
        for (auto& v : lp.c) v = -v;
        auto hi = tableau_minimize(lp);
        double a = lo.value, b = -hi.value;
        if (!out.bounds) {
          out.bounds = std::make_pair(a, b);
        } else {
          out.bounds->first = std::min(out.bounds->first, a);
          out.bounds->second = std::max(out.bounds->second, b);
        }
      }
    }
    // Next branch in mixed radix.
    std::size_t i = 0;
    for (; i < p.clauses.size(); ++i) {
      if (++choice[i] < 1 + 2 * p.clauses[i].body.size()) break;
      choice[i] = 0;
    }
    if (i == p.clauses.size()) break;
  }
  return out;
}

}  // namespace oracle
