#include "sandwich/carrier.hpp"

#include <algorithm>
#include <set>

namespace sandwich {

std::optional<std::size_t> Carrier::find_ray(const Point& unit_ray) const {
  auto it = std::lower_bound(rays.begin(), rays.end(), unit_ray);
  if (it == rays.end() || !(*it == unit_ray)) return std::nullopt;
  return static_cast<std::size_t>(it - rays.begin());
}

Carrier make_carrier(std::size_t dimension, const std::vector<Point>& rays, std::vector<Rational> scales,
                     int closure_depth, std::size_t ray_cap, bool include_origin) {
  if (dimension == 0) throw std::invalid_argument("carrier dimension must be positive");
  if (closure_depth < 0) throw std::invalid_argument("closure depth must be nonnegative");
  Carrier c;
  c.dimension = dimension;
  c.closure_depth = closure_depth;
  c.ray_cap = ray_cap;
  c.include_origin = include_origin;

  std::set<Point> unique;
  for (const auto& r : rays) {
    if (r.size() != dimension)
      throw std::invalid_argument("carrier ray " + to_string(r) + " has dimension " + std::to_string(r.size()) +
                                  ", expected " + std::to_string(dimension));
    if (r.is_zero()) throw std::invalid_argument("carrier rays must be nonzero");
    unique.insert(normalize_l1(r));
  }
  if (unique.size() > ray_cap)
    throw CarrierCapExceeded("carrier has " + std::to_string(unique.size()) + " rays, cap is " +
                             std::to_string(ray_cap));
  c.rays.assign(unique.begin(), unique.end());

  scales.push_back(Rational(1));  // the engine sweeps g over unit points
  for (auto& s : scales) {
    s.canonicalize();
    if (s <= 0) throw std::invalid_argument("carrier scales must be positive, got " + to_string(s));
  }
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  c.scales = std::move(scales);
  return c;
}

Carrier close_carrier(const Carrier& carrier, const RelationSpec& relation) {
  if (relation.dimension != carrier.dimension)
    throw std::invalid_argument("relation and carrier dimensions differ");
  Carrier out = carrier;
  while (out.closed_rounds < out.closure_depth) {
    std::set<Point> next(out.rays.begin(), out.rays.end());
    const auto& rays = out.rays;
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t j = i; j < rays.size(); ++j) {
        if (!relation.relates(rays[i], rays[j]) && !relation.relates(rays[j], rays[i])) continue;
        Point sum = rays[i] + rays[j];
        if (sum.is_zero()) continue;
        next.insert(normalize_l1(sum));
        if (next.size() > out.ray_cap)
          throw CarrierCapExceeded("carrier closure exceeded the ray cap of " + std::to_string(out.ray_cap) +
                                   " in round " + std::to_string(out.closed_rounds + 1));
      }
    out.rays.assign(next.begin(), next.end());
    ++out.closed_rounds;
  }
  return out;
}

}  // namespace sandwich
