#include <doctest.h>

#include <functional>
#include <random>

#include "sandwich/axioms.hpp"
#include "sandwich/comonotone.hpp"

using namespace sandwich;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

GridFunction sample(std::size_t n, const std::function<Rational(const Rational&)>& f) {
  GridFunction g;
  g.values.assign(n + 1, Rational(0));
  for (std::size_t i = 0; i <= n; ++i) g.values[i] = f(g.node(i));
  return g;
}

Rational indicator_from(const Rational& t, const Rational& a) { return t >= a ? Rational(1) : Rational(0); }

bool strictly_increasing(const std::vector<Rational>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i] < v[i + 1])) return false;
  return true;
}

}  // namespace

TEST_CASE("comonotonic predicates") {
  CHECK(is_comonotonic(Point{q(1), q(2)}, Point{q(3), q(5)}));
  CHECK(is_comonotonic(Point{q(2), q(2), q(2)}, Point{q(5), q(-1), q(3)}));
  CHECK_FALSE(is_comonotonic(Point{q(1), q(0)}, Point{q(0), q(1)}));

  Point y{q(1), q(3), q(2)};
  CHECK(is_strictly_comonotonic(2 * y, y));
  CHECK(is_strictly_comonotonic(Point{q(1), q(2), q(3)}, Point{q(0), q(1), q(5)}));
  CHECK_FALSE(is_strictly_comonotonic(Point{q(1), q(1)}, Point{q(0), q(1)}));
  CHECK_THROWS_AS(is_strictly_comonotonic(Point{q(1)}, Point{q(1), q(2)}), std::invalid_argument);
}

TEST_CASE("strict implies weak on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 500; ++t) {
    Point x{q(d(rng)), q(d(rng)), q(d(rng))}, y{q(d(rng)), q(d(rng)), q(d(rng))};
    if (is_strictly_comonotonic(x, y)) CHECK(is_comonotonic(x, y));
  }
}

TEST_CASE("strict comonotonicity passes the ccsp axioms on a sample") {
  std::vector<Point> pts = {{q(1), q(2), q(3)}, {q(0), q(1), q(5)}, {q(2), q(4), q(6)},
                            {q(3), q(1), q(2)}, {q(-1), q(0), q(4)}, {q(5), q(2), q(3)}};
  std::vector<Rational> scales{q(1, 2), q(2)};
  auto rep = check_ccsp_axioms(RelationSpec::strict_comonotone(3), pts, scales);
  CHECK(rep.all_pass());
}

TEST_CASE("decomposition") {
  SUBCASE("small worked example") {
    auto d = comonotone_decompose(Point{q(1), q(3)}, Point{q(2), q(4)});
    CHECK(d.z == Point{q(3), q(7)});
    CHECK(d.h(q(3)) == 1);
    CHECK(d.h(q(7)) == 3);
    CHECK(d.g(q(3)) == 2);
    CHECK(d.g(q(7)) == 4);
    CHECK(d.h(q(5)) == 2);  // slope 1/2
  }
  SUBCASE("x = y halves the identity") {
    Point x{q(1), q(4), q(2)};
    auto d = comonotone_decompose(x, x);
    for (std::size_t i = 0; i < d.h.knots.size(); ++i) {
      CHECK(d.h.values[i] == d.h.knots[i] / 2);
      CHECK(d.g.values[i] == d.g.knots[i] / 2);
    }
  }
  SUBCASE("constant y") {
    auto d = comonotone_decompose(Point{q(1), q(5), q(2)}, Point{q(3), q(3), q(3)});
    for (std::size_t i = 0; i < d.g.knots.size(); ++i) {
      CHECK(d.g.values[i] == 3);
      CHECK(d.h.values[i] == d.h.knots[i] - 3);
    }
  }
  SUBCASE("reconstruction and slopes on random comonotone pairs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-4, 4);
    int tested = 0;
    for (int t = 0; t < 400; ++t) {
      Point x{q(d(rng)), q(d(rng)), q(d(rng)), q(d(rng))}, y{q(d(rng)), q(d(rng)), q(d(rng)), q(d(rng))};
      if (!is_comonotonic(x, y)) continue;
      ++tested;
      auto dec = comonotone_decompose(x, y);
      for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(dec.h(dec.z[i]) == x[i]);
        CHECK(dec.g(dec.z[i]) == y[i]);
      }
      CHECK_FALSE(dec.h.monotone_lipschitz_violation(false));
      CHECK_FALSE(dec.g.monotone_lipschitz_violation(false));
      for (std::size_t k = 0; k < dec.h.knots.size(); ++k)
        CHECK(dec.h.values[k] + dec.g.values[k] == dec.h.knots[k]);
    }
    CHECK(tested > 20);
  }
  CHECK_THROWS_AS(comonotone_decompose(Point{q(1), q(0)}, Point{q(0), q(1)}), std::invalid_argument);
}

TEST_CASE("strict characterization") {
  auto a = check_strict_characterization(Point{q(1), q(2), q(3)}, Point{q(0), q(1), q(5)});
  CHECK(a.predicate);
  CHECK(a.characterization);
  CHECK(a.agree);

  auto b = check_strict_characterization(Point{q(1), q(1), q(2)}, Point{q(0), q(0), q(3)});
  CHECK_FALSE(b.predicate);
  CHECK_FALSE(b.z_injective);
  CHECK_FALSE(b.characterization);
  CHECK(b.agree);

  Point y{q(1), q(3), q(2)};
  auto c = check_strict_characterization(2 * y, y);
  CHECK(c.proportional);
  CHECK(c.predicate);
  CHECK(c.characterization);
  CHECK(c.z_injective);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int t = 0; t < 300; ++t) {
    Point x{q(d(rng)), q(d(rng)), q(d(rng))}, z{q(d(rng)), q(d(rng)), q(d(rng))};
    CHECK(check_strict_characterization(x, z).agree);
  }
}

TEST_CASE("injective step perturbation") {
  SUBCASE("two levels") {
    StepFunction s{{q(0), q(1, 2), q(1)}, {q(0), q(1)}};
    auto r = injective_step_perturbation(s, q(1, 10), 10);
    CHECK(r.injective);
    CHECK(r.eps_used == q(1, 10));
    CHECK(r.sup_distance == q(1, 10));
    CHECK(r.values.values.front() == q(-1, 10));
    CHECK(r.values.values.back() == q(11, 10));
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(r.values.values[i] >= q(-1, 10));
      CHECK(r.values.values[i] < q(1, 10));
    }
  }
  SUBCASE("single piece is a line") {
    StepFunction s{{q(0), q(1)}, {q(3)}};
    auto r = injective_step_perturbation(s, q(1, 4), 4);
    CHECK(r.values.values == std::vector<Rational>{q(11, 4), q(23, 8), q(3), q(25, 8), q(13, 4)});
  }
  SUBCASE("eps shrinks below the gap") {
    StepFunction s{{q(0), q(1, 3), q(2, 3), q(1)}, {q(0), q(0), q(1, 10)}};
    auto r = injective_step_perturbation(s, q(1), 12);
    CHECK(r.pieces == 2);
    CHECK(r.eps_used == q(1, 40));
    CHECK(r.injective);
    CHECK(r.sup_distance <= q(1));
  }
  SUBCASE("shared non-adjacent levels") {
    StepFunction s{{q(0), q(1, 4), q(1, 2), q(3, 4), q(1)}, {q(1), q(2), q(1), q(2)}};
    auto r = injective_step_perturbation(s, q(1, 5), 16);
    CHECK(r.injective);
    CHECK(r.sup_distance <= q(1, 5));
    PerturbationOptions strict;
    strict.share_levels = false;
    CHECK_THROWS_AS(injective_step_perturbation(s, q(1, 5), 16, strict), std::invalid_argument);
  }
  SUBCASE("merging disabled with one shared value") {
    StepFunction s{{q(0), q(1, 2), q(1)}, {q(2), q(2)}};
    PerturbationOptions off{false, false};
    CHECK_THROWS_AS(injective_step_perturbation(s, q(1, 5), 8, off), std::invalid_argument);
    CHECK(injective_step_perturbation(s, q(1, 5), 8, {false, true}).injective);
  }
  CHECK_THROWS_AS(injective_step_perturbation(StepFunction{{q(0), q(1)}, {q(0)}}, q(0), 4), std::invalid_argument);
}

TEST_CASE("strictly increasing approximation") {
  SUBCASE("flat then identity") {
    auto f = sample(20, [](const Rational& t) -> Rational { return t <= q(1, 2) ? Rational(0) : Rational(t - q(1, 2)); });
    auto r = strictly_increasing_approx(f, q(1, 5));
    CHECK(strictly_increasing(r.values.values));
    CHECK_FALSE(r.detail.function.monotone_lipschitz_violation(true));
    CHECK(r.detail.sup_distance < q(1, 5));
    CHECK(r.grid_distance < q(1, 5));
    CHECK(r.detail.runs_collapsed >= 1);
  }
  SUBCASE("identity") {
    auto f = sample(8, [](const Rational& t) -> Rational { return t; });
    for (auto eps : {q(1), q(1, 3), q(1, 16)}) {
      auto r = strictly_increasing_approx(f, eps);
      CHECK(r.detail.sup_distance < eps);
      CHECK(r.detail.runs_collapsed == 0);
    }
  }
  SUBCASE("constant") {
    auto f = sample(8, [](const Rational&) -> Rational { return q(2); });
    auto r = strictly_increasing_approx(f, q(1, 4));
    CHECK(strictly_increasing(r.values.values));
    CHECK(r.detail.sup_distance <= q(1, 8));
  }
  SUBCASE("flat in the middle") {
    PiecewiseLinear f{{q(0), q(1, 4), q(3, 4), q(1)}, {q(0), q(1, 4), q(1, 4), q(1, 2)}};
    auto r = strictly_increasing_approx(f, q(0), q(1), q(1, 10));
    CHECK_FALSE(r.function.monotone_lipschitz_violation(true));
    CHECK(r.sup_distance < q(1, 10));
  }
  SUBCASE("bad input") {
    GridFunction dec{{q(1), q(0)}};
    CHECK_THROWS_WITH_AS(strictly_increasing_approx(dec, q(1, 4)), doctest::Contains("not increasing"),
                         std::invalid_argument);
    GridFunction steep{{q(0), q(3)}};
    CHECK_THROWS_WITH_AS(strictly_increasing_approx(steep, q(1, 4)), doctest::Contains("1-Lipschitz"),
                         std::invalid_argument);
  }
}

TEST_CASE("strict pair pipeline") {
  SUBCASE("indicator pair ladder") {
    auto x = sample(16, [](const Rational& t) -> Rational { return indicator_from(t, q(1, 2)); });
    auto y = sample(16, [](const Rational& t) -> Rational { return indicator_from(t, q(3, 4)); });
    CHECK(is_comonotonic(x.as_point(), y.as_point()));
    CHECK_FALSE(is_strictly_comonotonic(x.as_point(), y.as_point()));
    auto ladder = strict_pair_ladder(x, y, {q(1, 4), q(1, 8), q(1, 16)});
    CHECK(ladder.all_strict);
    CHECK(ladder.distance_non_increasing);
    for (const auto& r : ladder.rungs) {
      CHECK_FALSE(r.short_circuit);
      CHECK(r.distance <= r.eps);
      CHECK(r.distance <= r.bound);
    }
    CHECK(ladder.rungs.back().distance < ladder.rungs.front().distance);
  }
  SUBCASE("proportional short circuit") {
    auto y = sample(8, [](const Rational& t) -> Rational { return t * t + 1; });
    auto x = sample(8, [](const Rational& t) -> Rational { return (t * t + 1) / 2; });
    auto r = approximate_strict_pair(x, y, q(1, 8));
    CHECK(r.short_circuit);
    CHECK(r.x == x);
    CHECK(r.y == y);
  }
  SUBCASE("constant x") {
    auto x = sample(8, [](const Rational&) -> Rational { return q(1); });
    auto y = sample(8, [](const Rational& t) -> Rational { return t <= q(1, 2) ? Rational(0) : Rational(2 * t - 1); });
    auto ladder = strict_pair_ladder(x, y, {q(1, 4), q(1, 8), q(1, 16), q(1, 32)});
    CHECK(ladder.all_strict);
    CHECK(ladder.distance_non_increasing);
    for (const auto& r : ladder.rungs) CHECK(r.distance <= r.eps);
  }
  SUBCASE("stage labels") {
    GridFunction x{{q(0), q(1)}}, y{{q(1), q(0)}};
    try {
      approximate_strict_pair(x, y, q(1, 4));
      FAIL("expected an error");
    } catch (const ComonotoneError& e) {
      CHECK(e.stage() == "decompose");
    }
  }
}

TEST_CASE("Choquet comonotone additivity") {
  Capacity nu = Capacity::from_table(2, {{0b01, q(3, 10)}, {0b10, q(1, 2)}, {0b11, q(1)}});
  CHECK(choquet_integral(Point{q(4), q(1)}, nu) == q(19, 10));
  CHECK(choquet_integral(Point{q(5), q(5)}, nu) == 5);
  Point x{q(4), q(1)}, y{q(2), q(0)};
  CHECK(choquet_integral(x + y, nu) == choquet_integral(x, nu) + choquet_integral(y, nu));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-3, 5);
  Capacity nu3 = Capacity::from_table(3, {{1, q(1, 5)}, {2, q(1, 3)}, {3, q(1, 2)}, {4, q(1, 4)}, {5, q(3, 5)},
                                          {6, q(2, 3)}, {7, q(1)}});
  for (int t = 0; t < 300; ++t) {
    Point a{q(d(rng)), q(d(rng)), q(d(rng))}, b{q(d(rng)), q(d(rng)), q(d(rng))};
    CHECK(choquet_integral(q(7, 3) * a, nu3) == q(7, 3) * choquet_integral(a, nu3));
    if (is_comonotonic(a, b)) CHECK(choquet_integral(a + b, nu3) == choquet_integral(a, nu3) + choquet_integral(b, nu3));
  }
}

TEST_CASE("comonotone subadditivity") {
  Capacity n1 = Capacity::from_table(2, {{1, q(1, 10)}, {2, q(1, 2)}, {3, q(1)}});
  Capacity n2 = Capacity::from_table(2, {{1, q(3, 5)}, {2, q(1, 5)}, {3, q(1)}});
  std::vector<std::pair<Point, Point>> pairs;
  for (int a = -2; a <= 3; ++a)
    for (int b = -2; b <= 3; ++b)
      for (int c = -2; c <= 3; ++c)
        for (int e = -2; e <= 3; ++e) pairs.push_back({Point{q(a), q(b)}, Point{q(c), q(e)}});

  auto mx = check_comono_subadditive(
      Functional::max_of({Functional::choquet(n1), Functional::choquet(n2)}), pairs);
  CHECK(mx.pass());
  CHECK(mx.checked > 0);

  auto single = check_comono_subadditive(Functional::choquet(n1), pairs);
  CHECK(single.pass());
  CHECK(single.equality_everywhere);

  auto mn = check_comono_subadditive(Functional::min_of_rows({Point{q(1), q(0)}, Point{q(0), q(2)}}),
                                     {{Point{q(1), q(9, 10)}, Point{q(3), q(1)}}});
  CHECK_FALSE(mn.pass());
  CHECK(mn.witness.size() == 2);
  CHECK(mn.worst == q(4, 5));
}

TEST_CASE("comonotone envelope") {
  Capacity n1 = Capacity::from_table(2, {{1, q(1, 10)}, {2, q(1, 2)}, {3, q(1)}});
  Capacity n2 = Capacity::from_table(2, {{1, q(3, 5)}, {2, q(1, 5)}, {3, q(1)}});
  Capacity low = Capacity::from_table(2, {{1, q(0)}, {2, q(0)}, {3, q(1)}});  // the minimum, dominated
  std::vector<Point> pts;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      if (a != b) pts.push_back(Point{q(a), q(b)});

  auto two = comono_envelope_check({n1, n2}, pts);
  CHECK(two.envelope_exact);
  CHECK(two.never_attaining.empty());
  for (const auto& m : two.members) CHECK(m.comonotone_additive);

  auto one = comono_envelope_check({n1}, pts);
  CHECK(one.members[0].attained == pts.size());

  auto three = comono_envelope_check({n1, n2, low}, pts);
  CHECK(three.envelope_exact);
  REQUIRE(three.never_attaining.size() == 1);
  CHECK(three.never_attaining[0] == 2);
}
