#ifndef TPLP_SIMPLEX_HPP
#define TPLP_SIMPLEX_HPP

// Two-phase revised simplex with Bland's rule, generic over the number type.
// Instantiated with Rational (exact, zero tolerance) and double (tolerance
// 1e-9, periodic reinversion of the basis).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

namespace tplp::lp {

enum class Sense { Le, Ge, Eq };

/// One constraint row: sum(coeff * x[var]) (sense) rhs. Coefficients are
/// small integers, which covers every row the PSAT encoding produces.
template <class Num>
struct Row {
  std::vector<std::pair<std::size_t, std::int64_t>> coeffs;
  Sense sense = Sense::Eq;
  Num rhs{};
};

/// minimize objective . x  subject to rows, x >= 0.
template <class Num>
struct Problem {
  std::size_t num_vars = 0;
  std::vector<Row<Num>> rows;
  /// Sparse objective; empty means pure feasibility.
  std::vector<std::pair<std::size_t, Num>> objective;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

template <class Num>
struct Solution {
  Status status = Status::Infeasible;
  Num objective{};
  std::vector<Num> x;
  std::size_t iterations = 0;
  /// Final basis (column indices, slacks and artificials included); usable
  /// as a warm start for the same problem in another number type.
  std::vector<std::size_t> basis;
};

template <class Num>
struct Tolerance {
  static Num value() { return Num(0); }
};

template <>
struct Tolerance<double> {
  static double value() { return 1e-9; }
};

template <class Num>
class RevisedSimplex {
public:
  explicit RevisedSimplex(const Problem<Num>& p, std::size_t max_iterations = 5'000'000)
      : problem_(p), max_iterations_(max_iterations), tol_(Tolerance<Num>::value()) {}

  /// `warm` is a basis to start from; it is ignored unless it is
  /// nonsingular and primal feasible for phase I.
  Solution<Num> solve(const std::vector<std::size_t>* warm = nullptr) {
    build();
    if (warm) warm_start(*warm);
    Solution<Num> out;
    // Phase I: drive the artificial variables to zero.
    std::vector<Num> phase1(columns_.size(), Num(0));
    for (std::size_t j = first_artificial_; j < columns_.size(); ++j) phase1[j] = Num(1);
    Status s = iterate(phase1, /*allow_artificial=*/true);
    out.iterations = iterations_;
    out.basis = basis_;
    if (s == Status::IterationLimit) {
      out.status = s;
      return out;
    }
    Num infeasibility = current_objective(phase1);
    if (infeasibility > tol_ * Num(static_cast<long>(m_ + 1))) {
      out.status = Status::Infeasible;
      return out;
    }
    drive_out_artificials();
    // Phase II.
    std::vector<Num> cost(columns_.size(), Num(0));
    for (const auto& [j, c] : problem_.objective) cost[j] = c;
    s = iterate(cost, /*allow_artificial=*/false);
    out.iterations = iterations_;
    out.basis = basis_;
    if (s != Status::Optimal) {
      out.status = s;
      return out;
    }
    out.status = Status::Optimal;
    out.x.assign(problem_.num_vars, Num(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < problem_.num_vars) out.x[basis_[i]] = clamp_nonneg(x_b_[i]);
    out.objective = Num(0);
    for (const auto& [j, c] : problem_.objective) out.objective += c * out.x[j];
    return out;
  }

private:
  using Column = std::vector<std::pair<std::size_t, std::int64_t>>;

  static Num abs_value(const Num& v) { return v < Num(0) ? Num(-v) : v; }

  Num clamp_nonneg(const Num& v) const { return v < Num(0) ? Num(0) : v; }

  void build() {
    m_ = problem_.rows.size();
    columns_.assign(problem_.num_vars, {});
    std::vector<Num> rhs(m_);
    std::vector<int> sign(m_, 1);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = problem_.rows[i];
      if (r.rhs < Num(0)) sign[i] = -1;
      rhs[i] = sign[i] < 0 ? Num(-r.rhs) : r.rhs;
      for (const auto& [j, a] : r.coeffs)
        if (a != 0) columns_[j].emplace_back(i, a * sign[i]);
    }
    basis_.assign(m_, 0);
    std::vector<bool> has_basic(m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = problem_.rows[i];
      if (r.sense == Sense::Eq) continue;
      std::int64_t coeff = (r.sense == Sense::Le ? 1 : -1) * sign[i];
      columns_.push_back({{i, coeff}});
      if (coeff == 1) {
        basis_[i] = columns_.size() - 1;
        has_basic[i] = true;
      }
    }
    first_artificial_ = columns_.size();
    for (std::size_t i = 0; i < m_; ++i) {
      if (has_basic[i]) continue;
      columns_.push_back({{i, 1}});
      basis_[i] = columns_.size() - 1;
    }
    in_basis_.assign(columns_.size(), false);
    for (auto j : basis_) in_basis_[j] = true;
    binv_.assign(m_, std::vector<Num>(m_, Num(0)));
    for (std::size_t i = 0; i < m_; ++i) binv_[i][i] = Num(1);
    x_b_ = rhs;
    rhs_ = std::move(rhs);
  }

  Num current_objective(const std::vector<Num>& cost) const {
    Num v(0);
    for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * x_b_[i];
    return v;
  }

  std::vector<Num> duals(const std::vector<Num>& cost) const {
    std::vector<Num> y(m_, Num(0));
    for (std::size_t i = 0; i < m_; ++i) {
      const Num& cb = cost[basis_[i]];
      if (cb == Num(0)) continue;
      for (std::size_t k = 0; k < m_; ++k)
        if (binv_[i][k] != Num(0)) y[k] += cb * binv_[i][k];
    }
    return y;
  }

  Num reduced_cost(std::size_t j, const std::vector<Num>& cost, const std::vector<Num>& y) const {
    Num d = cost[j];
    for (const auto& [i, a] : columns_[j]) {
      if (a == 1) {
        d -= y[i];
      } else if (a == -1) {
        d += y[i];
      } else {
        d -= y[i] * Num(static_cast<long>(a));
      }
    }
    return d;
  }

  std::vector<Num> ftran(std::size_t j) const {
    std::vector<Num> u(m_, Num(0));
    for (const auto& [r, a] : columns_[j]) {
      for (std::size_t i = 0; i < m_; ++i) {
        if (binv_[i][r] == Num(0)) continue;
        if (a == 1) {
          u[i] += binv_[i][r];
        } else {
          u[i] += binv_[i][r] * Num(static_cast<long>(a));
        }
      }
    }
    return u;
  }

  void pivot(std::size_t leave_row, std::size_t enter, const std::vector<Num>& u) {
    Num piv = u[leave_row];
    for (auto& v : binv_[leave_row]) v /= piv;
    x_b_[leave_row] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave_row || u[i] == Num(0)) continue;
      Num f = u[i];
      for (std::size_t k = 0; k < m_; ++k)
        if (binv_[leave_row][k] != Num(0)) binv_[i][k] -= f * binv_[leave_row][k];
      x_b_[i] -= f * x_b_[leave_row];
    }
    in_basis_[basis_[leave_row]] = false;
    basis_[leave_row] = enter;
    in_basis_[enter] = true;
    ++iterations_;
    if constexpr (std::is_floating_point_v<Num>) {
      if (iterations_ % 64 == 0) reinvert();
    }
  }

  // Inverse of the basis matrix of `basis`; false when singular.
  bool invert(const std::vector<std::size_t>& basis, std::vector<std::vector<Num>>& inv) const {
    std::vector<std::vector<Num>> b(m_, std::vector<Num>(m_, Num(0)));
    for (std::size_t k = 0; k < m_; ++k)
      for (const auto& [r, a] : columns_[basis[k]]) b[r][k] = Num(static_cast<long>(a));
    inv.assign(m_, std::vector<Num>(m_, Num(0)));
    for (std::size_t i = 0; i < m_; ++i) inv[i][i] = Num(1);
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t best = c;
      for (std::size_t r = c + 1; r < m_; ++r)
        if (abs_value(b[r][c]) > abs_value(b[best][c])) best = r;
      if (abs_value(b[best][c]) <= tol_ * Num(1000)) return false;
      std::swap(b[best], b[c]);
      std::swap(inv[best], inv[c]);
      Num p = b[c][c];
      for (std::size_t k = 0; k < m_; ++k) {
        b[c][k] /= p;
        inv[c][k] /= p;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c || b[r][c] == Num(0)) continue;
        Num f = b[r][c];
        for (std::size_t k = 0; k < m_; ++k) {
          if (b[c][k] != Num(0)) b[r][k] -= f * b[c][k];
          if (inv[c][k] != Num(0)) inv[r][k] -= f * inv[c][k];
        }
      }
    }
    // Row k of inv now yields the value of basis position k.
    return true;
  }

  std::vector<Num> basic_values(const std::vector<std::vector<Num>>& inv) const {
    std::vector<Num> x(m_, Num(0));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k)
        if (inv[i][k] != Num(0)) x[i] += inv[i][k] * rhs_[k];
    return x;
  }

  // Recomputes the basis inverse and basic values from scratch (floating point only).
  void reinvert() {
    std::vector<std::vector<Num>> inv;
    if (!invert(basis_, inv)) return;  // keep the product-form inverse
    binv_ = std::move(inv);
    x_b_ = basic_values(binv_);
  }

  void warm_start(const std::vector<std::size_t>& basis) {
    if (basis.size() != m_) return;
    std::vector<bool> seen(columns_.size(), false);
    for (auto j : basis) {
      if (j >= columns_.size() || seen[j]) return;
      seen[j] = true;
    }
    std::vector<std::vector<Num>> inv;
    if (!invert(basis, inv)) return;
    auto x = basic_values(inv);
    for (const auto& v : x)
      if (v < -tol_) return;
    basis_ = basis;
    in_basis_ = std::move(seen);
    binv_ = std::move(inv);
    x_b_ = std::move(x);
  }

  Status iterate(const std::vector<Num>& cost, bool allow_artificial) {
    const std::size_t limit = allow_artificial ? columns_.size() : first_artificial_;
    for (;;) {
      if (iterations_ >= max_iterations_) return Status::IterationLimit;
      auto y = duals(cost);
      // Bland: lowest-index improving column.
      std::size_t enter = columns_.size();
      for (std::size_t j = 0; j < limit; ++j) {
        if (in_basis_[j]) continue;
        if (reduced_cost(j, cost, y) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter == columns_.size()) return Status::Optimal;
      auto u = ftran(enter);
      std::size_t leave = m_;
      Num best{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (u[i] <= tol_) continue;
        Num ratio = clamp_nonneg(x_b_[i]) / u[i];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return Status::Unbounded;
      pivot(leave, enter, u);
    }
  }

  // After phase I, replace zero-level artificial basics by structural or
  // slack columns where possible. Rows where that is impossible are
  // redundant; their artificial stays basic at zero.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (in_basis_[j]) continue;
        Num entry(0);
        for (const auto& [r, a] : columns_[j]) entry += binv_[i][r] * Num(static_cast<long>(a));
        if (abs_value(entry) > tol_) {
          pivot(i, j, ftran(j));
          break;
        }
      }
    }
  }

  const Problem<Num>& problem_;
  std::size_t max_iterations_;
  Num tol_;
  std::size_t m_ = 0;
  std::vector<Column> columns_;
  std::size_t first_artificial_ = 0;
  std::vector<std::size_t> basis_;
  std::vector<bool> in_basis_;
  std::vector<std::vector<Num>> binv_;
  std::vector<Num> x_b_;
  std::vector<Num> rhs_;
  std::size_t iterations_ = 0;
};

template <class Num>
Solution<Num> solve(const Problem<Num>& p, std::size_t max_iterations = 5'000'000,
                    const std::vector<std::size_t>* warm = nullptr) {
  return RevisedSimplex<Num>(p, max_iterations).solve(warm);
}

}  // namespace tplp::lp

#endif
