#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sandwich/point.hpp"

namespace sandwich {

enum class RelationKind {
  Full,               // every pair related
  RayD,               // x = λ y, λ > 0
  StrictComonotone,   // x ∈ C_y, or (x_i - x_j)(y_i - y_j) > 0 for all i ≠ j
  EquivalentMeasures, // nonnegative vectors with the same zero set
  Affinity,           // x = α y + β e, α ≠ 0
  Corr,               // weighted inner product ≥ 0
  Phi,                // both zero or both nonzero
  Extensional,        // finite list of classes or pairs
};

std::string to_string(RelationKind kind);
RelationKind relation_kind_from_string(const std::string& name);

/// A binary relation on Q^n, decided exactly.
struct RelationSpec {
  RelationKind kind = RelationKind::Full;
  std::size_t dimension = 0;

  std::optional<Point> affinity_e;         // Affinity: the fixed direction e
  std::vector<Rational> corr_weights;      // Corr: cell weights, empty = uniform

  // Extensional: either an equivalence partition or explicit pairs.
  std::vector<std::vector<Point>> classes;
  std::set<std::pair<Point, Point>> pairs;

  bool relates(const Point& x, const Point& y) const;
  std::string describe() const;

  static RelationSpec full(std::size_t n) { return {RelationKind::Full, n}; }
  static RelationSpec ray_d(std::size_t n) { return {RelationKind::RayD, n}; }
  static RelationSpec strict_comonotone(std::size_t n) { return {RelationKind::StrictComonotone, n}; }
  static RelationSpec equivalent_measures(std::size_t n) { return {RelationKind::EquivalentMeasures, n}; }
  static RelationSpec phi(std::size_t n) { return {RelationKind::Phi, n}; }
  static RelationSpec corr(std::size_t n, std::vector<Rational> weights = {});
  static RelationSpec affinity(Point e);
  static RelationSpec extensional_classes(std::size_t n, std::vector<std::vector<Point>> classes);
  /// With symmetric = true each pair is also added reversed.
  static RelationSpec extensional_pairs(std::size_t n, const std::vector<std::pair<Point, Point>>& pairs,
                                        bool symmetric);
};

/// True iff (x_i - x_j)(y_i - y_j) ≥ 0 for all i, j.
bool is_comonotonic(const std::vector<Rational>& x, const std::vector<Rational>& y);

/// (x_i - x_j)(y_i - y_j) > 0 for all i ≠ j. Vacuously true for n = 1.
bool increments_strictly_cosigned(const std::vector<Rational>& x, const std::vector<Rational>& y);

/// True iff x = λ y for some λ > 0 (both nonzero).
bool same_open_ray(const Point& x, const Point& y);

}  // namespace sandwich
