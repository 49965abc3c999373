#pragma once

#include <vector>

#include "sandwich/rational.hpp"

namespace sandwich {

/// Feasibility problem over free rational variables:
/// eq_rows · q = eq_rhs and le_rows · q ≤ le_rhs.
struct LinearSystem {
  std::size_t vars = 0;
  std::vector<std::vector<Rational>> eq_rows;
  std::vector<Rational> eq_rhs;
  std::vector<std::vector<Rational>> le_rows;
  std::vector<Rational> le_rhs;

  explicit LinearSystem(std::size_t n = 0) : vars(n) {}
  void add_eq(std::vector<Rational> row, Rational rhs);
  void add_le(std::vector<Rational> row, Rational rhs);
  void add_ge(std::vector<Rational> row, Rational rhs);
  bool satisfied_by(const std::vector<Rational>& q) const;
};

enum class LpStatus { Feasible, Infeasible, PivotLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> solution;  // set when feasible
  std::size_t pivots = 0;
  bool feasible() const { return status == LpStatus::Feasible; }
};

/// Exact phase-one simplex (Bland's rule) after eliminating the equalities.
LpResult find_feasible_point(const LinearSystem& system, std::size_t max_pivots = 200000);

}  // namespace sandwich
