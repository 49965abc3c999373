#include "sandwich/relation.hpp"

#include <array>
#include <stdexcept>

namespace sandwich {

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Full: return "full";
    case RelationKind::RayD: return "ray";
    case RelationKind::StrictComonotone: return "strict-comonotone";
    case RelationKind::EquivalentMeasures: return "equivalent-measures";
    case RelationKind::Affinity: return "affinity";
    case RelationKind::Corr: return "corr";
    case RelationKind::Phi: return "phi";
    case RelationKind::Extensional: return "extensional";
  }
  return "?";
}

RelationKind relation_kind_from_string(const std::string& name) {
  for (auto k : {RelationKind::Full, RelationKind::RayD, RelationKind::StrictComonotone,
                 RelationKind::EquivalentMeasures, RelationKind::Affinity, RelationKind::Corr, RelationKind::Phi,
                 RelationKind::Extensional})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown relation kind '" + name + "'");
}

bool same_open_ray(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch in relation");
  if (x.is_zero() || y.is_zero()) return false;
  // x = λ y with λ > 0: compare after L1 normalization.
  return normalize_l1(x) == normalize_l1(y);
}

bool is_comonotonic(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch in comonotonicity test");
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if ((x[i] - x[j]) * (y[i] - y[j]) < 0) return false;
  return true;
}

bool increments_strictly_cosigned(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch in comonotonicity test");
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if ((x[i] - x[j]) * (y[i] - y[j]) <= 0) return false;
  return true;
}

namespace {

// Does x = α y + β e have a solution with α ≠ 0?
bool affine_solvable(const Point& x, const Point& y, const Point& e) {
  const std::size_t n = x.size();
  std::vector<std::array<Rational, 3>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = {y[i], e[i], x[i]};
  std::array<int, 2> pivot_row = {-1, -1};
  std::size_t r = 0;
  for (int c = 0; c < 2 && r < n; ++c) {
    std::size_t p = r;
    while (p < n && rows[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(rows[p], rows[r]);
    Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (int k = 0; k < 3; ++k) rows[i][k] -= f * rows[r][k];
    }
    pivot_row[c] = static_cast<int>(r);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (rows[i][2] != 0) return false;  // inconsistent
  if (pivot_row[0] < 0) return true;    // α free
  const auto& row = rows[static_cast<std::size_t>(pivot_row[0])];
  // α = rhs - coef·β; if β is free we can steer α away from 0.
  if (pivot_row[1] < 0 && row[1] != 0) return true;
  return row[2] != 0;
}

void require_nonnegative(const Point& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < 0)
      throw std::invalid_argument("equivalent-measures relation needs nonnegative vectors, got " + to_string(x));
}

}  // namespace

bool RelationSpec::relates(const Point& x, const Point& y) const {
  if (x.size() != dimension || y.size() != dimension)
    throw std::invalid_argument("relation on R^" + std::to_string(dimension) + " applied to points of dimension " +
                                std::to_string(x.size()) + "/" + std::to_string(y.size()));
  switch (kind) {
    case RelationKind::Full: return true;
    case RelationKind::RayD:
      if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
      return same_open_ray(x, y);
    case RelationKind::StrictComonotone:
      if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
      return same_open_ray(x, y) || increments_strictly_cosigned(x.coords(), y.coords());
    case RelationKind::EquivalentMeasures:
      require_nonnegative(x);
      require_nonnegative(y);
      for (std::size_t i = 0; i < dimension; ++i)
        if ((x[i] == 0) != (y[i] == 0)) return false;
      return true;
    case RelationKind::Affinity:
      if (!affinity_e) throw std::invalid_argument("affinity relation requires a declared direction e");
      return affine_solvable(x, y, *affinity_e);
    case RelationKind::Corr: {
      Rational s = 0;
      for (std::size_t i = 0; i < dimension; ++i) {
        Rational w = corr_weights.empty() ? Rational(1, dimension) : corr_weights[i];
        s += w * x[i] * y[i];
      }
      return s >= 0;
    }
    case RelationKind::Phi: return x.is_zero() == y.is_zero();
    case RelationKind::Extensional:
      if (!classes.empty()) {
        auto find_class = [&](const Point& p) -> long {
          for (std::size_t c = 0; c < classes.size(); ++c)
            for (const auto& q : classes[c])
              if (q == p) return static_cast<long>(c);
          return -1;
        };
        long cx = find_class(x);
        return cx >= 0 && cx == find_class(y);
      }
      return pairs.count({x, y}) > 0;
  }
  return false;
}

std::string RelationSpec::describe() const {
  std::string out = to_string(kind) + " on R^" + std::to_string(dimension);
  if (kind == RelationKind::Affinity && affinity_e) out += " with e = " + to_string(*affinity_e);
  return out;
}

RelationSpec RelationSpec::corr(std::size_t n, std::vector<Rational> weights) {
  if (!weights.empty() && weights.size() != n) throw std::invalid_argument("corr weights have wrong length");
  for (const auto& w : weights)
    if (w <= 0) throw std::invalid_argument("corr weights must be positive");
  RelationSpec r{RelationKind::Corr, n};
  r.corr_weights = std::move(weights);
  return r;
}

RelationSpec RelationSpec::affinity(Point e) {
  RelationSpec r{RelationKind::Affinity, e.size()};
  r.affinity_e = std::move(e);
  return r;
}

RelationSpec RelationSpec::extensional_classes(std::size_t n, std::vector<std::vector<Point>> classes) {
  RelationSpec r{RelationKind::Extensional, n};
  for (const auto& c : classes)
    for (const auto& p : c)
      if (p.size() != n) throw std::invalid_argument("class member has wrong dimension: " + to_string(p));
  r.classes = std::move(classes);
  return r;
}

RelationSpec RelationSpec::extensional_pairs(std::size_t n, const std::vector<std::pair<Point, Point>>& pairs,
                                             bool symmetric) {
  RelationSpec r{RelationKind::Extensional, n};
  for (const auto& [a, b] : pairs) {
    if (a.size() != n || b.size() != n) throw std::invalid_argument("pair member has wrong dimension");
    r.pairs.insert({a, b});
    if (symmetric) r.pairs.insert({b, a});
  }
  return r;
}

}  // namespace sandwich
