#pragma once

#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

#include "anglers/rational.hpp"

namespace anglers {

// Exact-rational primal simplex (dense tableau, two phases, Bland's rule).
// Solves  max c^T x  s.t.  rows of (A x rel b),  x >= 0.
// Small-instance workhorse behind the angle-structure LP; every number it
// touches is a Rational, so feasibility decisions are exact.

struct LinearProgram {
  enum class Rel { le, eq, ge };
  struct Row {
    std::vector<Rational> a;
    Rel rel = Rel::le;
    Rational b;
  };
  int n = 0;  // structural variables, all constrained >= 0
  std::vector<Rational> c;
  std::vector<Row> rows;
};

struct SimplexResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::optimal;
  std::vector<Rational> x;     // structural solution
  Rational objective;          // c^T x
  std::vector<Rational> y;     // simplex multiplier per original row
  int pivots = 0;
};

class SimplexError : public std::runtime_error {
 public:
  explicit SimplexError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

class Tableau {
 public:
  Tableau(const LinearProgram& lp) : n_(lp.n), m_(static_cast<int>(lp.rows.size())) {
    // Normalize rhs signs, attach slack/surplus and artificial columns.
    flip_.assign(m_, false);
    std::vector<LinearProgram::Row> rows = lp.rows;
    for (int i = 0; i < m_; ++i) {
      if (rows[i].b < 0) {
        flip_[i] = true;
        rows[i].b = -rows[i].b;
        for (auto& v : rows[i].a) v = -v;
        if (rows[i].rel == LinearProgram::Rel::le)
          rows[i].rel = LinearProgram::Rel::ge;
        else if (rows[i].rel == LinearProgram::Rel::ge)
          rows[i].rel = LinearProgram::Rel::le;
      }
    }
    slack_col_.assign(m_, -1);
    art_col_.assign(m_, -1);
    int extra = 0;
    for (int i = 0; i < m_; ++i) {
      if (rows[i].rel != LinearProgram::Rel::eq) ++extra;
      if (rows[i].rel != LinearProgram::Rel::le) ++extra;
    }
    cols_ = n_ + extra;
    t_.assign(m_, std::vector<Rational>(cols_ + 1));
    basis_.assign(m_, -1);
    is_artificial_.assign(cols_, false);

    int col = n_;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) t_[i][j] = rows[i].a[j];
      t_[i][cols_] = rows[i].b;
      switch (rows[i].rel) {
        case LinearProgram::Rel::le:
          slack_col_[i] = col;
          t_[i][col] = 1;
          basis_[i] = col++;
          break;
        case LinearProgram::Rel::ge:
          slack_col_[i] = col;
          t_[i][col] = -1;
          ++col;
          art_col_[i] = col;
          is_artificial_[col] = true;
          t_[i][col] = 1;
          basis_[i] = col++;
          break;
        case LinearProgram::Rel::eq:
          art_col_[i] = col;
          is_artificial_[col] = true;
          t_[i][col] = 1;
          basis_[i] = col++;
          break;
      }
    }
  }

  // maximize obj (full-length cost vector over tableau columns)
  bool run(const std::vector<Rational>& cost, int* pivots) {
    std::vector<Rational> z(cols_ + 1);
    auto recompute_z = [&] {
      for (int j = 0; j <= cols_; ++j) {
        Rational acc = 0;
        for (int i = 0; i < m_; ++i)
          if (!is_zero(t_[i][j])) acc += cost[basis_[i]] * t_[i][j];
        z[j] = acc - (j < cols_ ? cost[j] : Rational(0));
      }
    };
    recompute_z();
    while (true) {
      int enter = -1;  // Bland: smallest improving column
      for (int j = 0; j < cols_; ++j) {
        if (is_artificial_[j] && !allow_artificial_) continue;
        if (z[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;  // optimal
      int leave = -1;
      Rational best_ratio;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][enter] > 0) {
          Rational ratio = t_[i][cols_] / t_[i][enter];
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter, z);
      ++*pivots;
    }
  }

  void pivot(int r, int c, std::vector<Rational>& z) {
    Rational piv = t_[r][c];
    for (int j = 0; j <= cols_; ++j) t_[r][j] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || is_zero(t_[i][c])) continue;
      Rational f = t_[i][c];
      for (int j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[r][j];
    }
    Rational zf = z[c];
    if (!is_zero(zf))
      for (int j = 0; j <= cols_; ++j) z[j] -= zf * t_[r][j];
    basis_[r] = c;
  }

  static bool is_zero(const Rational& v) { return v.is_zero(); }

  int n_, m_, cols_ = 0;
  std::vector<std::vector<Rational>> t_;
  std::vector<int> basis_, slack_col_, art_col_;
  std::vector<bool> flip_, is_artificial_;
  bool allow_artificial_ = true;
};

}  // namespace detail

inline SimplexResult simplex_solve(const LinearProgram& lp) {
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.a.size()) != lp.n)
      throw SimplexError("row width mismatch");
  if (static_cast<int>(lp.c.size()) != lp.n) throw SimplexError("objective width mismatch");

  detail::Tableau tab(lp);
  SimplexResult res;

  // Phase 1: maximize -sum(artificials).
  bool any_artificial = false;
  std::vector<Rational> cost1(tab.cols_ + 1, Rational(0));
  for (int j = 0; j < tab.cols_; ++j)
    if (tab.is_artificial_[j]) {
      cost1[j] = -1;
      any_artificial = true;
    }
  if (any_artificial) {
    tab.allow_artificial_ = true;
    if (!tab.run(cost1, &res.pivots)) throw SimplexError("phase 1 unbounded (impossible)");
    Rational art_sum = 0;
    for (int i = 0; i < tab.m_; ++i)
      if (tab.is_artificial_[tab.basis_[i]]) art_sum += tab.t_[i][tab.cols_];
    if (!art_sum.is_zero()) {
      res.status = SimplexResult::Status::infeasible;
      // Farkas-style multipliers from the phase-1 optimum
      res.y.assign(tab.m_, Rational(0));
      for (int i = 0; i < tab.m_; ++i) {
        int col = tab.art_col_[i] >= 0 ? tab.art_col_[i] : tab.slack_col_[i];
        Rational zj = 0;
        for (int r = 0; r < tab.m_; ++r) zj += cost1[tab.basis_[r]] * tab.t_[r][col];
        res.y[i] = tab.flip_[i] ? -zj : zj;
      }
      return res;
    }
    // Drive basic artificials out; drop redundant rows.
    for (int i = 0; i < tab.m_; ++i) {
      if (!tab.is_artificial_[tab.basis_[i]]) continue;
      int enter = -1;
      for (int j = 0; j < tab.cols_ && enter < 0; ++j)
        if (!tab.is_artificial_[j] && !tab.t_[i][j].is_zero()) enter = j;
      if (enter >= 0) {
        std::vector<Rational> zdummy(tab.cols_ + 1, Rational(0));
        tab.pivot(i, enter, zdummy);
        ++res.pivots;
      }
      // else: redundant zero row; its artificial stays basic at value zero and
      // is barred from re-entering in phase 2.
    }
  }

  // Phase 2: real objective.
  tab.allow_artificial_ = false;
  std::vector<Rational> cost2(tab.cols_ + 1, Rational(0));
  for (int j = 0; j < lp.n; ++j) cost2[j] = lp.c[j];
  if (!tab.run(cost2, &res.pivots)) {
    res.status = SimplexResult::Status::unbounded;
    return res;
  }

  res.status = SimplexResult::Status::optimal;
  res.x.assign(lp.n, Rational(0));
  for (int i = 0; i < tab.m_; ++i)
    if (tab.basis_[i] < lp.n) res.x[tab.basis_[i]] = tab.t_[i][tab.cols_];
  res.objective = 0;
  for (int j = 0; j < lp.n; ++j) res.objective += lp.c[j] * res.x[j];

  // Simplex multipliers y_i = c_B B^-1 e_i, read under each row's unit column
  // (artificial if present, else slack), flipped back to the input row sign.
  res.y.assign(tab.m_, Rational(0));
  for (int i = 0; i < tab.m_; ++i) {
    int col = tab.art_col_[i] >= 0 ? tab.art_col_[i] : tab.slack_col_[i];
    Rational zj = 0;
    for (int r = 0; r < tab.m_; ++r) zj += cost2[tab.basis_[r]] * tab.t_[r][col];
    res.y[i] = tab.flip_[i] ? -zj : zj;
  }
  return res;
}

}  // namespace anglers
