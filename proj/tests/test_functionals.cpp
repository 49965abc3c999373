#include <doctest.h>

#include "sandwich/functional.hpp"

using namespace sandwich;

namespace {
Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}
const ExtReal kNegInf = ExtReal::neg_inf();

Functional coord_max2() { return Functional::max_of_rows({Point{1, 0}, Point{0, 1}}); }
Functional coord_min2() { return Functional::min_of_rows({Point{1, 0}, Point{0, 1}}); }

Carrier orthant_carrier() {
  return make_carrier(2, {Point{1, 0}, Point{0, 1}, Point{1, 1}, Point{1, 2}, Point{3, 1}}, {q(1, 2), q(1), q(2)}, 0,
                      4096, true);
}
}  // namespace

TEST_CASE("eval: spec examples") {
  CHECK(coord_max2()(Point{1, 3}) == ExtReal(3));
  auto ell = Functional::linear(Point{1, 0});
  auto p = extend_minus_infinity(ell, ConeSpec::ray(Point{1, 1}));
  CHECK(p(Point{1, 2}).is_neg_inf());
  CHECK(p(Point{2, 2}) == ExtReal(2));
  auto nu = Capacity::from_table(3, {{1, q(1, 5)}, {2, q(1, 3)}, {3, q(1, 2)}, {4, 0}, {5, q(1, 2)}, {6, q(2, 3)}, {7, 1}});
  CHECK(Functional::choquet(nu)(Point{q(7, 3), q(7, 3), q(7, 3)}) == ExtReal(q(7, 3)));
  CHECK_THROWS(coord_max2()(Point{1, 2, 3}));
}

TEST_CASE("Choquet layer-cake values") {
  // nu({0}) = 1/10, nu({1}) = 1/2, nu(Ω) = 1
  auto nu = Capacity::from_table(2, {{1, q(1, 10)}, {2, q(1, 2)}, {3, 1}});
  CHECK(nu.is_monotone());
  CHECK(nu.is_normalized());
  // x = (4, 1): (4 - 1)·nu({0}) + 1·nu(Ω) = 3/10 + 1
  CHECK(choquet_integral(Point{4, 1}, nu) == q(13, 10));
  // x = (1, 4): (4 - 1)·nu({1}) + 1 = 5/2
  CHECK(choquet_integral(Point{1, 4}, nu) == q(5, 2));
  // signed inputs: x = (-2, 1): (1 - (-2))·nu({1}) + (-2)·1 = -1/2
  CHECK(choquet_integral(Point{-2, 1}, nu) == q(-1, 2));
  // additive capacity reproduces the linear functional
  auto add = Capacity::additive({q(1, 3), q(2, 3)});
  CHECK(choquet_integral(Point{5, -1}, add) == q(5, 3) - q(2, 3));
  CHECK_THROWS(Capacity::from_table(2, {{1, 0}, {3, 1}}));  // missing mask 2
  auto bad = Capacity::from_table(2, {{1, 1}, {2, 0}, {3, q(1, 2)}});
  CHECK(!bad.is_monotone());
}

TEST_CASE("ray tables: homogeneous extension, origin, off-ray error") {
  auto t = Functional::ray_table(2, {{Point{2, 0}, ExtReal(6)}, {Point{0, 1}, kNegInf}});
  CHECK(t(Point{1, 0}) == ExtReal(3));
  CHECK(t(Point{5, 0}) == ExtReal(15));
  CHECK(t(Point{0, 7}).is_neg_inf());
  CHECK(t(Point{0, 0}) == ExtReal(0));
  CHECK_THROWS_AS(t(Point{1, 1}), RayNotInCarrier);
  try {
    t(Point{1, 1});
  } catch (const RayNotInCarrier& e) {
    CHECK(std::string(e.what()).find("ray not in carrier") != std::string::npos);
  }
  CHECK_THROWS(Functional::ray_table(2, {{Point{1, 0}, ExtReal(1)}, {Point{2, 0}, ExtReal(3)}}));
}

TEST_CASE("check_pos_homogeneous") {
  Carrier c = orthant_carrier();
  CHECK(check_pos_homogeneous(coord_max2(), c).pass);
  CHECK(check_pos_homogeneous(extend_minus_infinity(Functional::linear(Point{1, 1}), ConeSpec::ray(Point{1, 1})), c).pass);
  auto nu = Capacity::from_table(2, {{1, q(1, 10)}, {2, q(1, 2)}, {3, 1}});
  CHECK(check_pos_homogeneous(Functional::choquet(nu), c).pass);
  CHECK(check_pos_homogeneous(Functional::scaled(q(3, 2), coord_min2()), c).pass);

  // adversarial: Q(2x) overridden away from 2 Q(x)
  std::vector<std::pair<Point, ExtReal>> vals;
  for (const auto& r : c.rays) vals.emplace_back(r, ExtReal(1));
  auto adv = Functional::ray_table(2, vals, ExtReal(0), {{Point{2, 0}, ExtReal(5)}});
  auto rep = check_pos_homogeneous(adv, c);
  CHECK(!rep.pass);
  REQUIRE(rep.witness.size() == 1);
  CHECK(rep.witness[0] == Point{1, 0});
  CHECK(*rep.scale == 2);
  CHECK(!(adv(*rep.scale * rep.witness[0]) == scale(*rep.scale, adv(rep.witness[0]))));
}

TEST_CASE("check_relation_additivity") {
  Carrier c = orthant_carrier();
  auto pts = carrier_points(c);
  auto full = RelationSpec::full(2);
  auto pairs = related_pairs(full, pts);

  CHECK(check_relation_additivity(coord_max2(), full, pairs, AdditivityMode::Sub).pass);
  CHECK(check_relation_additivity(Functional::linear(Point{2, -1}), full, pairs, AdditivityMode::Exact).pass);

  std::vector<std::pair<Point, Point>> one = {{Point{1, 0}, Point{0, 1}}};
  auto rep = check_relation_additivity(coord_min2(), full, one, AdditivityMode::Sub);
  CHECK(!rep.pass);
  CHECK(rep.witness == std::vector<Point>{Point{1, 0}, Point{0, 1}});
  CHECK(rep.residual == 1);

  // Choquet is additive on strictly comonotone pairs of R^2 (both sort orders).
  auto nu = Capacity::from_table(2, {{1, q(1, 10)}, {2, q(1, 2)}, {3, 1}});
  auto sc = RelationSpec::strict_comonotone(2);
  std::vector<Point> grid;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b) grid.push_back(Point{a, b});
  auto sc_pairs = related_pairs(sc, grid);
  auto crep = check_relation_additivity(Functional::choquet(nu), sc, sc_pairs, AdditivityMode::Exact);
  CHECK(crep.pass);
  CHECK(crep.checked > 50);

  // -inf extension is superadditive on the full relation (absorption).
  auto p = extend_minus_infinity(Functional::linear(Point{1, 2}), ConeSpec::ray(Point{1, 1}));
  CHECK(check_relation_additivity(p, full, pairs, AdditivityMode::Super).pass);
}

TEST_CASE("check_monotone") {
  Carrier c = orthant_carrier();
  CHECK(check_monotone(coord_max2(), c).pass);
  auto nu = Capacity::from_table(2, {{1, q(1, 10)}, {2, q(1, 2)}, {3, 1}});
  CHECK(check_monotone(Functional::choquet(nu), c).pass);

  auto neg = Functional::linear(Point{1, -1});
  auto rep = check_monotone(neg, c);
  CHECK(!rep.pass);
  REQUIRE(rep.witness.size() == 2);
  CHECK(leq_order(rep.witness[0], rep.witness[1]));
  CHECK(neg(rep.witness[0]) > neg(rep.witness[1]));

  auto ext = extend_minus_infinity(Functional::linear(Point{1, 1}), ConeSpec::ray(Point{1, 1}));
  auto erep = check_monotone(ext, c);
  CHECK(!erep.pass);  // -inf above a finite value
  CHECK(erep.failures > 0);
}

TEST_CASE("extend_minus_infinity agrees with ell on Y and is -inf elsewhere") {
  auto ell = ray_functional(Point{1, 1}, Functional::linear(Point{q(1, 2), q(1, 2)}));
  auto p = extend_minus_infinity(ell, ConeSpec::ray(Point{1, 1}));
  CHECK(p(Point{2, 2}) == ExtReal(2));
  CHECK(p(Point{1, 2}).is_neg_inf());
  CHECK(p(Point{0, 0}).is_neg_inf());
  for (const auto& x : carrier_points(orthant_carrier())) {
    if (ConeSpec::ray(Point{1, 1}).contains(x))
      CHECK(p(x) == ell(x));
    else
      CHECK(p(x).is_neg_inf());
  }
}

TEST_CASE("ray_functional") {
  auto h = coord_max2();
  auto ell = ray_functional(Point{1, 3}, h);
  CHECK(ell(Point{2, 6}) == ExtReal(6));
  CHECK(ell(Point{1, 3}) == h(Point{1, 3}));
  auto d = RelationSpec::ray_d(2);
  std::vector<std::pair<Point, Point>> pairs;
  for (const auto& a : {q(1, 2), q(1), q(3)})
    for (const auto& b : {q(1, 4), q(2)}) pairs.emplace_back(a * Point{1, 3}, b * Point{1, 3});
  CHECK(check_relation_additivity(ell, d, pairs, AdditivityMode::Exact).pass);
  auto minus = extend_minus_infinity(h, ConeSpec::ray(Point{1, 0}));
  CHECK_THROWS(ray_functional(Point{0, 1}, minus));
}
