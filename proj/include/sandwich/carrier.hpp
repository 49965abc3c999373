#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "sandwich/point.hpp"
#include "sandwich/relation.hpp"

namespace sandwich {

/// Raised when closing a carrier would exceed its ray cap.
class CarrierCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite discretization of the ambient space: the points s·r for r in
/// `rays` and s in `scales`, plus the origin when `include_origin` is set.
/// Rays are L1-normalized, distinct and kept in lexicographic order.
struct Carrier {
  std::size_t dimension = 0;
  std::vector<Point> rays;
  std::vector<Rational> scales;  // positive, ascending, distinct
  int closure_depth = 2;
  int closed_rounds = 0;         // rounds of closure already applied
  std::size_t ray_cap = 4096;
  bool include_origin = false;

  std::optional<std::size_t> find_ray(const Point& unit_ray) const;
  std::size_t point_count() const { return rays.size() * scales.size() + (include_origin ? 1 : 0); }
};

/// Validates and canonicalizes: normalizes and dedups rays, sorts scales.
/// Scale 1 is always added.
Carrier make_carrier(std::size_t dimension, const std::vector<Point>& rays, std::vector<Rational> scales,
                     int closure_depth = 2, std::size_t ray_cap = 4096, bool include_origin = false);

/// Adds normalize(r_i + r_j) for related ray pairs, round by round, until
/// closure_depth rounds have been applied in total. Deterministic, and a
/// no-op on an already closed carrier.
Carrier close_carrier(const Carrier& carrier, const RelationSpec& relation);

}  // namespace sandwich
