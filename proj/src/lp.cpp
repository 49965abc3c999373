#include "sandwich/lp.hpp"

#include <stdexcept>

namespace sandwich {

namespace {

Rational dot_row(const std::vector<Rational>& row, const std::vector<Rational>& q) {
  Rational s = 0;
  for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * q[i];
  return s;
}

void check_width(const std::vector<Rational>& row, std::size_t n) {
  if (row.size() != n) throw std::invalid_argument("constraint row has the wrong number of variables");
}

// Solution set of the equalities as q0 + N w. Returns false if inconsistent.
bool eliminate(const LinearSystem& sys, std::vector<Rational>& q0, std::vector<std::vector<Rational>>& basis) {
  const std::size_t n = sys.vars;
  std::vector<std::vector<Rational>> m;
  for (std::size_t r = 0; r < sys.eq_rows.size(); ++r) {
    auto row = sys.eq_rows[r];
    row.push_back(sys.eq_rhs[r]);
    m.push_back(std::move(row));
  }
  std::vector<long> pivot_of_col(n, -1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    Rational inv = 1 / m[rank][c];
    for (auto& v : m[rank]) v *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t k = c; k <= n; ++k) m[i][k] -= f * m[rank][k];
    }
    pivot_of_col[c] = static_cast<long>(rank++);
  }
  for (std::size_t i = rank; i < m.size(); ++i)
    if (m[i][n] != 0) return false;

  q0.assign(n, Rational(0));
  for (std::size_t c = 0; c < n; ++c)
    if (pivot_of_col[c] >= 0) q0[c] = m[static_cast<std::size_t>(pivot_of_col[c])][n];
  basis.clear();
  for (std::size_t f = 0; f < n; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<Rational> v(n, Rational(0));
    v[f] = 1;
    for (std::size_t c = 0; c < n; ++c)
      if (pivot_of_col[c] >= 0) v[c] = -m[static_cast<std::size_t>(pivot_of_col[c])][f];
    basis.push_back(std::move(v));
  }
  return true;
}

}  // namespace

void LinearSystem::add_eq(std::vector<Rational> row, Rational rhs) {
  check_width(row, vars);
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(std::move(rhs));
}

void LinearSystem::add_le(std::vector<Rational> row, Rational rhs) {
  check_width(row, vars);
  le_rows.push_back(std::move(row));
  le_rhs.push_back(std::move(rhs));
}

void LinearSystem::add_ge(std::vector<Rational> row, Rational rhs) {
  for (auto& v : row) v = -v;
  add_le(std::move(row), -rhs);
}

bool LinearSystem::satisfied_by(const std::vector<Rational>& q) const {
  if (q.size() != vars) return false;
  for (std::size_t r = 0; r < eq_rows.size(); ++r)
    if (dot_row(eq_rows[r], q) != eq_rhs[r]) return false;
  for (std::size_t r = 0; r < le_rows.size(); ++r)
    if (dot_row(le_rows[r], q) > le_rhs[r]) return false;
  return true;
}

LpResult find_feasible_point(const LinearSystem& sys, std::size_t max_pivots) {
  LpResult result;
  std::vector<Rational> q0;
  std::vector<std::vector<Rational>> basis;
  if (!eliminate(sys, q0, basis)) return result;

  const std::size_t k = basis.size();
  const std::size_t m = sys.le_rows.size();
  // M w ≤ c with M = A N, c = b − A q0.
  std::vector<std::vector<Rational>> M(m, std::vector<Rational>(k));
  std::vector<Rational> c(m);
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = sys.le_rhs[i] - dot_row(sys.le_rows[i], q0);
    for (std::size_t j = 0; j < k; ++j) M[i][j] = dot_row(sys.le_rows[i], basis[j]);
  }

  // Columns: w+ (k), w− (k), slack (m), artificial (m). Rows normalized to rhs ≥ 0.
  const std::size_t cols = 2 * k + 2 * m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1, Rational(0)));
  std::vector<std::size_t> basic(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rational sign = c[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < k; ++j) {
      t[i][j] = sign * M[i][j];
      t[i][k + j] = -sign * M[i][j];
    }
    t[i][2 * k + i] = sign;
    t[i][2 * k + m + i] = 1;
    t[i][cols] = sign * c[i];
    basic[i] = 2 * k + m + i;
  }
  // Reduced costs of the phase-one objective (sum of artificials).
  std::vector<Rational> z(cols + 1, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= cols; ++j)
      if (j < 2 * k + m || j == cols) z[j] -= t[i][j];

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (z[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][cols] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basic[i] < basic[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen for a phase-one objective bounded by 0
    if (++result.pivots > max_pivots) {
      result.status = LpStatus::PivotLimit;
      return result;
    }
    Rational inv = 1 / t[leave][enter];
    for (auto& v : t[leave]) v *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    if (z[enter] != 0) {
      Rational f = z[enter];
      for (std::size_t j = 0; j <= cols; ++j) z[j] -= f * t[leave][j];
    }
    basic[leave] = enter;
  }

  if (z[cols] != 0) return result;  // artificials cannot all vanish

  std::vector<Rational> w(k, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] < k) w[basic[i]] += t[i][cols];
    else if (basic[i] < 2 * k) w[basic[i] - k] -= t[i][cols];
  }
  result.solution = q0;
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t v = 0; v < sys.vars; ++v) result.solution[v] += w[j] * basis[j][v];
  if (!sys.satisfied_by(result.solution)) throw std::logic_error("simplex returned a point violating the system");
  result.status = LpStatus::Feasible;
  return result;
}

}  // namespace sandwich
