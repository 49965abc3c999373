#include "sandwich/functional.hpp"

namespace sandwich {

// ---- cones -----------------------------------------------------------------

ConeSpec ConeSpec::ray(const Point& x) {
  if (x.is_zero()) throw std::invalid_argument("a ray cone needs a nonzero direction");
  return {Kind::Ray, normalize_l1(x), x.size()};
}

bool ConeSpec::contains(const Point& x) const {
  if (x.size() != dimension) throw std::invalid_argument("cone membership: dimension mismatch");
  switch (kind) {
    case Kind::Whole: return true;
    case Kind::Orthant:
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0) return false;
      return true;
    case Kind::Ray: return !x.is_zero() && normalize_l1(x) == direction;
  }
  return false;
}

std::string ConeSpec::describe() const {
  switch (kind) {
    case Kind::Whole: return "whole space";
    case Kind::Orthant: return "nonnegative orthant";
    case Kind::Ray: return "ray of " + to_string(direction);
  }
  return "?";
}

// ---- construction ----------------------------------------------------------

Functional::Functional(std::size_t n, Form form) : dimension_(n), form_(std::make_shared<const Form>(std::move(form))) {}

Functional Functional::linear(Point weights) {
  if (weights.size() == 0) throw std::invalid_argument("linear functional needs at least one weight");
  std::size_t n = weights.size();
  return Functional(n, Linear{std::move(weights)});
}

namespace {
std::size_t common_dimension(const std::vector<Functional>& parts, const char* what) {
  if (parts.empty()) throw std::invalid_argument(std::string(what) + " needs at least one part");
  for (const auto& p : parts)
    if (p.dimension() != parts.front().dimension())
      throw std::invalid_argument(std::string(what) + " parts have different dimensions");
  return parts.front().dimension();
}

std::vector<Functional> linears(const std::vector<Point>& rows) {
  std::vector<Functional> parts;
  for (const auto& r : rows) parts.push_back(Functional::linear(r));
  return parts;
}
}  // namespace

Functional Functional::max_of(std::vector<Functional> parts) {
  std::size_t n = common_dimension(parts, "max");
  return Functional(n, Max{std::move(parts)});
}

Functional Functional::min_of(std::vector<Functional> parts) {
  std::size_t n = common_dimension(parts, "min");
  return Functional(n, Min{std::move(parts)});
}

Functional Functional::max_of_rows(const std::vector<Point>& rows) { return max_of(linears(rows)); }
Functional Functional::min_of_rows(const std::vector<Point>& rows) { return min_of(linears(rows)); }

Functional Functional::choquet(Capacity capacity) {
  std::size_t n = capacity.size();
  if (n == 0) throw std::invalid_argument("Choquet functional needs a nonempty capacity");
  return Functional(n, Choquet{std::move(capacity)});
}

Functional Functional::ray_table(std::size_t n, const std::vector<std::pair<Point, ExtReal>>& values, ExtReal origin,
                                 const std::vector<std::pair<Point, ExtReal>>& overrides) {
  RayTable t;
  t.origin = origin;
  for (const auto& [p, v] : values) {
    if (p.size() != n) throw std::invalid_argument("ray table key " + to_string(p) + " has the wrong dimension");
    Rational norm = p.l1_norm();
    if (norm == 0) throw std::invalid_argument("ray table keys must be nonzero; use the origin value");
    Point unit = normalize_l1(p);
    ExtReal unit_value = scale(Rational(1 / norm), v);
    auto [it, inserted] = t.values.emplace(unit, unit_value);
    if (!inserted && !(it->second == unit_value))
      throw std::invalid_argument("ray table has conflicting values on the ray of " + to_string(unit));
  }
  for (const auto& [p, v] : overrides) {
    if (p.size() != n) throw std::invalid_argument("ray table override has the wrong dimension");
    t.overrides[p] = v;
  }
  return Functional(n, std::move(t));
}

Functional Functional::minus_inf_extension(Functional inner, ConeSpec domain) {
  if (inner.dimension() != domain.dimension) throw std::invalid_argument("extension domain dimension mismatch");
  std::size_t n = inner.dimension();
  return Functional(n, MinusInfExtension{{std::move(inner)}, std::move(domain)});
}

Functional Functional::scaled(Rational factor, Functional inner) {
  if (factor <= 0) throw std::invalid_argument("scale factor must be positive");
  std::size_t n = inner.dimension();
  return Functional(n, Scale{std::move(factor), {std::move(inner)}});
}

std::string Functional::kind_name() const {
  static const char* names[] = {"linear", "max", "min", "choquet", "ray-table", "minus-inf-extension", "scale"};
  return names[form_->index()];
}

// ---- evaluation ------------------------------------------------------------

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

ExtReal Functional::operator()(const Point& x) const {
  if (!form_) throw std::logic_error("evaluating an empty functional");
  if (x.size() != dimension_)
    throw std::invalid_argument("functional on R^" + std::to_string(dimension_) + " evaluated at " + to_string(x));
  return std::visit(
      Overloaded{
          [&](const Linear& f) -> ExtReal { return ExtReal(dot(f.weights, x)); },
          [&](const Max& f) -> ExtReal {
            ExtReal best = f.parts.front()(x);
            for (std::size_t i = 1; i < f.parts.size(); ++i) best = ext_max(best, f.parts[i](x));
            return best;
          },
          [&](const Min& f) -> ExtReal {
            ExtReal best = f.parts.front()(x);
            for (std::size_t i = 1; i < f.parts.size(); ++i) best = ext_min(best, f.parts[i](x));
            return best;
          },
          [&](const Choquet& f) -> ExtReal { return ExtReal(choquet_integral(x, f.capacity)); },
          [&](const RayTable& f) -> ExtReal {
            if (auto it = f.overrides.find(x); it != f.overrides.end()) return it->second;
            if (x.is_zero()) return f.origin;
            Rational norm = x.l1_norm();
            auto it = f.values.find(Rational(1 / norm) * x);
            if (it == f.values.end()) throw RayNotInCarrier("ray not in carrier: " + to_string(x));
            return scale(norm, it->second);
          },
          [&](const MinusInfExtension& f) -> ExtReal {
            return f.domain.contains(x) ? f.inner.front()(x) : ExtReal::neg_inf();
          },
          [&](const Scale& f) -> ExtReal { return scale(f.factor, f.inner.front()(x)); },
      },
      *form_);
}

// ---- property checks -------------------------------------------------------

std::vector<Point> carrier_points(const Carrier& carrier) {
  std::vector<Point> pts;
  for (const auto& r : carrier.rays)
    for (const auto& s : carrier.scales) pts.push_back(s * r);
  if (carrier.include_origin) pts.emplace_back(carrier.dimension);
  return pts;
}

std::vector<std::pair<Point, Point>> related_pairs(const RelationSpec& relation, std::span<const Point> points) {
  std::vector<std::pair<Point, Point>> out;
  for (const auto& x : points)
    for (const auto& y : points)
      if (relation.relates(x, y)) out.emplace_back(x, y);
  return out;
}

namespace {
void record(FunctionalReport& rep, std::vector<Point> witness, const ExtReal& lhs, const ExtReal& rhs,
            std::optional<Rational> lambda = std::nullopt) {
  if (rep.pass) {
    rep.pass = false;
    rep.witness = std::move(witness);
    rep.scale = std::move(lambda);
  }
  ++rep.failures;
  if (lhs.is_finite() && rhs.is_finite()) {
    Rational gap = rabs(lhs.value() - rhs.value());
    if (gap > rep.residual) rep.residual = gap;
  } else {
    rep.infinite_residual = true;
  }
}
}  // namespace

FunctionalReport check_pos_homogeneous(const Functional& f, const Carrier& carrier) {
  FunctionalReport rep{"positive homogeneity"};
  for (const auto& r : carrier.rays) {
    ExtReal base = f(r);
    for (const auto& s : carrier.scales) {
      ++rep.checked;
      ExtReal lhs = f(s * r);
      ExtReal rhs = scale(s, base);
      if (!(lhs == rhs)) record(rep, {r}, lhs, rhs, s);
    }
  }
  return rep;
}

std::string to_string(AdditivityMode mode) {
  switch (mode) {
    case AdditivityMode::Sub: return "sub";
    case AdditivityMode::Super: return "super";
    case AdditivityMode::Exact: return "exact";
  }
  return "?";
}

FunctionalReport check_relation_additivity(const Functional& f, const RelationSpec& relation,
                                           std::span<const std::pair<Point, Point>> pairs, AdditivityMode mode) {
  FunctionalReport rep{"relation-" + to_string(mode) + "additivity"};
  for (const auto& [x, y] : pairs) {
    if (!relation.relates(x, y)) continue;
    ++rep.checked;
    ExtReal whole = f(x + y);
    ExtReal parts = f(x) + f(y);
    bool ok = mode == AdditivityMode::Sub     ? whole <= parts
              : mode == AdditivityMode::Super ? whole >= parts
                                              : whole == parts;
    if (!ok) record(rep, {x, y}, whole, parts);
  }
  return rep;
}

FunctionalReport check_monotone(const Functional& f, const Carrier& carrier, const OrderSpec& order) {
  FunctionalReport rep{"monotonicity"};
  const auto pts = carrier_points(carrier);
  std::vector<ExtReal> vals;
  vals.reserve(pts.size());
  for (const auto& p : pts) vals.push_back(f(p));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j || !order.leq(pts[i], pts[j])) continue;
      ++rep.checked;
      if (vals[i] > vals[j]) record(rep, {pts[i], pts[j]}, vals[i], vals[j]);
    }
  return rep;
}

Functional extend_minus_infinity(const Functional& ell, const ConeSpec& domain) {
  return Functional::minus_inf_extension(ell, domain);
}

Functional ray_functional(const Point& x, const Functional& h) {
  if (x.is_zero()) throw std::invalid_argument("ray functional needs a nonzero point");
  ExtReal hx = h(x);
  if (hx.is_neg_inf()) throw std::invalid_argument("ray functional undefined: H(" + to_string(x) + ") = -inf");
  return Functional::ray_table(x.size(), {{x, hx}}, ExtReal(0));
}

}  // namespace sandwich
