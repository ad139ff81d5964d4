#include "integer_program.hpp"

#include <boost/multiprecision/gmp.hpp>

namespace c1p::detail {

namespace {

struct Tableau {
  int cols = 0;                           // excluding the right-hand side
  std::vector<std::vector<Rational>> a;  // each row has cols + 1 entries
  std::vector<Rational> d;               // reduced costs, d[cols] = -objective
  std::vector<int> basis;

  void pivot(int r, int c) {
    Rational p = a[r][c];
    std::vector<int> nz;
    for (int j = 0; j <= cols; ++j) {
      if (!a[r][j].is_zero()) {
        a[r][j] /= p;
        nz.push_back(j);
      }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (static_cast<int>(i) == r || a[i][c].is_zero()) continue;
      Rational f = a[i][c];
      for (int j : nz) a[i][j] -= f * a[r][j];
    }
    if (!d[c].is_zero()) {
      Rational f = d[c];
      for (int j : nz) d[j] -= f * a[r][j];
    }
    basis[r] = c;
  }

  // Dantzig's rule, falling back to Bland's after a run of degenerate pivots.
  bool optimize() {
    int degenerate = 0;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (d[j].sign() >= 0) continue;
        if (degenerate >= 50) {
          enter = j;
          break;
        }
        if (enter < 0 || d[j] < d[enter]) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i][enter].sign() <= 0) continue;
        Rational ratio = a[i][cols] / a[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = static_cast<int>(i);
          best = ratio;
        }
      }
      if (leave < 0) return false;
      degenerate = best.is_zero() ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }
};

}  // namespace

std::optional<std::vector<Rational>> solve_lp(int num_vars, const std::vector<Row>& rows) {
  const int m = static_cast<int>(rows.size());
  int slacks = 0, artificials = 0;
  for (const auto& r : rows) {
    bool flip = r.rhs < 0;
    RowKind k = r.kind;
    if (flip && k != RowKind::Eq) k = k == RowKind::Le ? RowKind::Ge : RowKind::Le;
    if (k != RowKind::Eq) ++slacks;
    if (k != RowKind::Le) ++artificials;
  }
  const int first_art = num_vars + slacks;
  Tableau t;
  t.cols = first_art + artificials;
  t.a.assign(m, std::vector<Rational>(t.cols + 1));
  t.basis.assign(m, -1);
  t.d.assign(t.cols + 1, Rational(0));

  int slack = num_vars, art = first_art;
  for (int i = 0; i < m; ++i) {
    const Row& r = rows[i];
    bool flip = r.rhs < 0;
    RowKind k = r.kind;
    if (flip && k != RowKind::Eq) k = k == RowKind::Le ? RowKind::Ge : RowKind::Le;
    auto& row = t.a[i];
    for (const auto& [col, c] : r.coeffs) row[col] += flip ? Rational(-c) : Rational(c);
    row[t.cols] = flip ? Rational(-r.rhs) : Rational(r.rhs);
    if (k == RowKind::Le) {
      row[slack] = 1;
      t.basis[i] = slack++;
    } else {
      if (k == RowKind::Ge) row[slack++] = -1;
      row[art] = 1;
      t.basis[i] = art++;
      for (int j = 0; j <= t.cols; ++j) {
        if (j < first_art || j == t.cols) t.d[j] -= row[j];
      }
    }
  }

  // Phase one.
  if (artificials > 0) {
    t.optimize();
    if (!t.d[t.cols].is_zero()) return std::nullopt;
    std::vector<bool> drop(m, false);
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < first_art) continue;
      int j = 0;
      while (j < first_art && t.a[i][j].is_zero()) ++j;
      if (j < first_art) {
        t.pivot(i, j);
      } else {
        drop[i] = true;
      }
    }
    std::vector<std::vector<Rational>> kept;
    std::vector<int> kept_basis;
    for (int i = 0; i < m; ++i) {
      if (drop[i]) continue;
      auto& row = t.a[i];
      Rational rhs = row[t.cols];
      row.resize(first_art);
      row.push_back(rhs);
      kept.push_back(std::move(row));
      kept_basis.push_back(t.basis[i]);
    }
    t.a = std::move(kept);
    t.basis = std::move(kept_basis);
    t.cols = first_art;
  }

  // Phase two: minimize the sum of the original variables.
  t.d.assign(t.cols + 1, Rational(0));
  for (int j = 0; j < num_vars; ++j) t.d[j] = 1;
  for (std::size_t i = 0; i < t.a.size(); ++i) {
    if (t.basis[i] >= num_vars) continue;
    for (int j = 0; j <= t.cols; ++j) {
      if (!t.a[i][j].is_zero()) t.d[j] -= t.a[i][j];
    }
  }
  t.optimize();

  std::vector<Rational> x(num_vars, Rational(0));
  for (std::size_t i = 0; i < t.a.size(); ++i) {
    if (t.basis[i] < num_vars) x[t.basis[i]] = t.a[i][t.cols];
  }
  return x;
}

BigInt small_solution_bound(int num_vars, const std::vector<Row>& rows) {
  BigInt a = 1;
  std::size_t columns = static_cast<std::size_t>(num_vars);
  for (const auto& r : rows) {
    if (r.kind != RowKind::Eq) ++columns;
    a = std::max(a, BigInt(abs(r.rhs)));
    for (const auto& [col, c] : r.coeffs) a = std::max(a, BigInt(abs(c)));
  }
  const auto m = static_cast<unsigned>(rows.size());
  return BigInt(columns) * boost::multiprecision::pow(BigInt(m) * a, 2 * m + 1);
}

std::optional<std::vector<BigInt>> solve_integer(int num_vars, const std::vector<Row>& rows,
                                                 NodeCounter& counter) {
  const BigInt bound = small_solution_bound(num_vars, rows);
  std::vector<std::vector<Row>> stack{{}};
  std::vector<Row> all;
  while (!stack.empty()) {
    std::vector<Row> extra = std::move(stack.back());
    stack.pop_back();
    counter.tick();
    all = rows;
    all.insert(all.end(), extra.begin(), extra.end());
    auto lp = solve_lp(num_vars, all);
    if (!lp) continue;
    int frac = -1;
    for (int j = 0; j < num_vars; ++j) {
      if (denominator((*lp)[j]) != 1) {
        frac = j;
        break;
      }
    }
    if (frac < 0) {
      std::vector<BigInt> out(num_vars);
      for (int j = 0; j < num_vars; ++j) out[j] = numerator((*lp)[j]);
      return out;
    }
    BigInt fl = floor_of((*lp)[frac]);
    if (fl + 1 <= bound) {
      auto up = extra;
      up.push_back({{{frac, 1}}, RowKind::Ge, fl + 1});
      stack.push_back(std::move(up));
    }
    extra.push_back({{{frac, 1}}, RowKind::Le, fl});
    stack.push_back(std::move(extra));
  }
  return std::nullopt;
}

}  // namespace c1p::detail
