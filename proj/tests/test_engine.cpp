#include <doctest.h>

#include <random>

#include "sandwich/engine.hpp"

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

SandwichInstance three_ray_instance() {
  SandwichInstance inst;
  inst.carrier = make_carrier(2, {Point{1, 0}, Point{0, 1}, Point{1, 1}}, {}, 0);
  inst.relation = RelationSpec::full(2);
  inst.lower = coord_min2();
  inst.upper = coord_max2();
  inst.lambda_grid = {0, 1};
  return inst;
}

SandwichInstance min_max_instance() {
  SandwichInstance inst;
  inst.carrier = make_carrier(2, {Point{1, 0}, Point{0, 1}, Point{1, 1}, Point{1, 2}, Point{2, 1}},
                              {q(1, 8), q(1, 2), q(1), q(2)}, 0, 4096, true);
  inst.relation = RelationSpec::full(2);
  inst.lower = coord_min2();
  inst.upper = coord_max2();
  inst.tol = q(1, 1000);
  return inst;
}

// Independent oracle: a linear q = (t, 1 - t) with Min <= q <= Max exists on
// the nonnegative orthant for every t in [0, 1]; scan a grid of t.
bool linear_sandwich_exists(const std::vector<Point>& pts) {
  for (long k = 0; k <= 16; ++k) {
    Rational t(k, 16);
    bool ok = true;
    for (const auto& x : pts) {
      Rational v = t * x[0] + (1 - t) * x[1];
      Rational lo = std::min(x[0], x[1]), hi = std::max(x[0], x[1]);
      if (v < lo || v > hi) ok = false;
    }
    if (ok) return true;
  }
  return false;
}
}  // namespace

TEST_CASE("a_transform: three-term minimum") {
  auto inst = three_ray_instance();
  AValue a = a_transform(inst, coord_min2(), Point{1, 0});
  REQUIRE(!is_unconstrained(a));
  CHECK(std::get<ExtReal>(a) == ExtReal(1));
  // y = x is eligible, so A_Q(x) <= H(2x) - Q(x)
  AValue a2 = a_transform(inst, coord_min2(), Point{1, 1});
  CHECK(std::get<ExtReal>(a2) <= coord_max2()(Point{2, 2}) - 1);
  CHECK_THROWS(a_transform(inst, coord_min2(), Point{1, 3}));
}

TEST_CASE("a_transform: empty eligible set is unconstrained") {
  SandwichInstance inst;
  inst.carrier = make_carrier(2, {Point{1, 0}, Point{0, 1}}, {}, 0);
  inst.relation = RelationSpec::ray_d(2);
  inst.upper = coord_max2();
  inst.lower = extend_minus_infinity(Functional::linear(Point{0, 1}), ConeSpec::ray(Point{0, 1}));
  CHECK(is_unconstrained(a_transform(inst, inst.lower, Point{1, 0})));
  CHECK(!is_unconstrained(a_transform(inst, inst.lower, Point{0, 1})));
}

TEST_CASE("t_transform: spec example and lower bound") {
  auto inst = three_ray_instance();
  CHECK(t_transform(inst, Point{0, 1}, coord_min2(), Point{1, 1}) == ExtReal(1));
  inst.feasibility = Feasibility::Exploratory;
  CHECK(t_transform(inst, Point{0, 1}, coord_min2(), Point{1, 1}) == ExtReal(1));
  for (const auto& g : {Point{1, 0}, Point{0, 1}, Point{1, 1}})
    for (const auto& x : {Point{1, 0}, Point{0, 1}, Point{1, 1}})
      CHECK(t_transform(inst, g, coord_min2(), x) >= coord_min2()(x));
}

TEST_CASE("t_transform: singleton feasible set gives Q(x)") {
  SandwichInstance inst;
  inst.carrier = make_carrier(2, {Point{1, 0}, Point{0, 1}}, {}, 0);
  inst.relation = RelationSpec::ray_d(2);
  inst.upper = coord_max2();
  inst.lower = Functional::linear(Point{q(1, 2), q(1, 3)});
  inst.lambda_grid = {0, 1};
  // g = (0,1) cannot be added below x = (1,0); only h = x is related and below x.
  CHECK(t_transform(inst, Point{0, 1}, inst.lower, Point{1, 0}) == ExtReal(q(1, 2)));
}

TEST_CASE("fast transforms agree with the literal ones") {
  std::mt19937_64 rng(5);
  for (auto feas : {Feasibility::Certified, Feasibility::Exploratory}) {
    auto inst = min_max_instance();
    inst.feasibility = feas;
    SandwichProblem pb(inst);
    // a Q between P and H: the linear functional (1/4, 3/4)
    Functional qf = Functional::linear(Point{q(1, 4), q(3, 4)});
    QTable table = pb.table_from(qf);
    for (int trial = 0; trial < 30; ++trial) {
      std::size_t x = rng() % (pb.point_count() - 1);
      std::size_t g = pb.unit_point(rng() % pb.ray_count());
      AValue a_fast = pb.a_at(table, x);
      AValue a_lit = a_transform(inst, qf, pb.point(x));
      CHECK(to_string(a_fast) == to_string(a_lit));
      CHECK(pb.t_at(g, table, pb.a_at(table, g), x) == t_transform(inst, pb.point(g), qf, pb.point(x)));
    }
  }
}

TEST_CASE("validation rejects broken hypotheses with witnesses") {
  auto inst = min_max_instance();
  std::swap(inst.lower, inst.upper);  // P = Max > H = Min
  auto rep = validate_instance(inst);
  CHECK(!rep.ok());
  bool saw = false;
  for (const auto& f : rep.failures)
    if (f.check == "P <= H") {
      saw = true;
      CHECK(!f.witness.empty());
    }
  CHECK(saw);
  CHECK_THROWS_AS(iterate_sandwich(inst), ValidationError);

  auto nonmono = min_max_instance();
  nonmono.upper = Functional::max_of_rows({Point{1, -1}, Point{0, 1}});
  nonmono.lower = Functional::linear(Point{0, 0});
  auto r2 = validate_instance(nonmono);
  bool mono_failed = false;
  for (const auto& f : r2.failures) mono_failed |= f.check == "H monotone";
  CHECK(mono_failed);
  CHECK(validate_instance(min_max_instance()).ok());
}

TEST_CASE("iterate: Min/Max/Full sandwich") {
  auto inst = min_max_instance();
  int steps = 0;
  IterateOptions opt;
  SandwichProblem pb(inst);
  opt.observer = [&](const StepRecord& s) {
    ++steps;
    for (std::size_t r = 0; r < pb.ray_count(); ++r) CHECK(s.before->rays[r] <= s.after->rays[r]);
    for (std::size_t i = 0; i < pb.point_count(); ++i) {
      CHECK(pb.lower_at(i) <= pb.q_at(*s.after, i));
      CHECK(pb.q_at(*s.after, i) <= pb.upper_at(i));
    }
  };
  auto res = iterate_sandwich(pb, opt);
  CHECK(res.sandwich_holds);
  CHECK(res.trace.converged);
  CHECK(steps == res.trace.sweep_count * static_cast<int>(pb.ray_count()));
  CHECK(res.trace.residual.max_abs <= inst.tol);
  CHECK(res.trace.residual.finiteness_mismatches == 0);
  CHECK(linear_sandwich_exists(carrier_points(pb.carrier())));
  MESSAGE("Q* = " << to_string(res.values.rays[0]) << ", " << to_string(res.values.rays.back()));

  auto tk = verify_toolkit(pb, res.values);
  CHECK(tk.precondition_ok);
  CHECK(tk.exact_claims_hold());
  CHECK(tk.get("4").checked > 0);

  auto tk0 = verify_toolkit(pb, pb.initial_table());
  CHECK(tk0.exact_claims_hold());
}

TEST_CASE("iterate: tight sandwich P = H = Linear") {
  auto inst = min_max_instance();
  inst.lower = Functional::linear(Point{2, 1});
  inst.upper = inst.lower;
  auto res = iterate_sandwich(inst);
  CHECK(res.trace.converged);
  CHECK(res.trace.sweep_count == 1);
  CHECK(res.trace.residual.max_abs == 0);
  SandwichProblem pb(inst);
  CHECK(res.values == pb.initial_table());
}

TEST_CASE("iterate: strict comonotone with Choquet lower and Max upper") {
  SandwichInstance inst;
  inst.carrier = make_carrier(2, {Point{1, 0}, Point{0, 1}, Point{1, 1}, Point{2, 1}, Point{1, 2}, Point{-1, 1},
                                  Point{1, -1}},
                              {q(1, 2), q(1), q(2)}, 1);
  inst.relation = RelationSpec::strict_comonotone(2);
  auto nu = Capacity::from_table(2, {{1, q(1, 10)}, {2, q(1, 2)}, {3, 1}});
  inst.lower = Functional::choquet(nu);
  inst.upper = coord_max2();
  auto res = iterate_sandwich(inst);
  CHECK(res.sandwich_holds);
  SandwichProblem pb(inst);
  for (std::size_t r = 0; r < pb.ray_count(); ++r) {
    std::size_t u = pb.unit_point(r);
    if (pb.lower_at(u) == pb.upper_at(u)) CHECK(res.values.rays[r] == pb.lower_at(u));
    CHECK(pb.lower_at(u) <= res.values.rays[r]);
    CHECK(res.values.rays[r] <= pb.upper_at(u));
  }
  CHECK(verify_toolkit(pb, res.values).exact_claims_hold());
}

TEST_CASE("iterate: exhausted budget is reported, not thrown") {
  auto inst = min_max_instance();
  inst.lower = extend_minus_infinity(Functional::linear(Point{1, 0}), ConeSpec::ray(Point{2, 1}));
  inst.max_sweeps = 1;
  auto res = iterate_sandwich(inst);
  CHECK(res.trace.sweep_count == 1);
  CHECK(!res.trace.converged);
  CHECK(res.sandwich_holds);
}

TEST_CASE("iterate is deterministic") {
  auto a = iterate_sandwich(min_max_instance());
  auto b = iterate_sandwich(min_max_instance());
  CHECK(a.values == b.values);
  CHECK(a.trace.sweep_count == b.trace.sweep_count);
}

TEST_CASE("summand mode keeps Q(n x) = n Q(x) and the sandwich") {
  auto inst = min_max_instance();
  inst.mode = EngineMode::Summand;
  inst.n_max = 3;
  inst.carrier = make_carrier(2, {Point{1, 0}, Point{0, 1}, Point{1, 1}, Point{1, 2}, Point{2, 1}},
                              {q(1), q(2), q(3)}, 0, 4096, true);
  auto res = iterate_sandwich(inst);
  CHECK(res.sandwich_holds);
  for (const auto& r : inst.carrier.rays)
    for (long n = 1; n <= 3; ++n) CHECK(res.q_star(Rational(n) * r) == scale(Rational(n), res.q_star(r)));
  SandwichProblem pb(inst);
  CHECK(verify_toolkit(pb, res.values).exact_claims_hold());
}

TEST_CASE("verify_toolkit: -inf extension and adversarial input") {
  auto inst = min_max_instance();
  inst.lower = extend_minus_infinity(Functional::linear(Point{1, 0}), ConeSpec::ray(Point{1, 1}));
  SandwichProblem pb(inst);
  auto rep = verify_toolkit(pb, pb.initial_table());
  CHECK(rep.precondition_ok);
  CHECK(rep.get("1a").violations == 0);
  CHECK(rep.exact_claims_hold());

  // Q = Max on every ray breaks Q(x) + Q(y) <= H(x + y): rejected before checking.
  auto adv = min_max_instance();
  auto bad = verify_toolkit(adv, coord_max2());
  CHECK(!bad.precondition_ok);
  CHECK(bad.items.empty());
  CHECK(!bad.exact_claims_hold());
}

TEST_CASE("extend_functional") {
  auto inst = min_max_instance();
  inst.tol = 0;
  SUBCASE("ell = 1 on the diagonal ray") {
    auto ell = Functional::linear(Point{q(1, 2), q(1, 2)});
    auto ext = extend_functional(inst, ell, ConeSpec::ray(Point{1, 1}));
    CHECK(ext.dominates_ell);
    CHECK(ext.below_upper);
    CHECK(ext.run.q_star(Point{1, 1}) >= ExtReal(1));
    CHECK(ext.run.q_star(Point{1, 1}) <= ExtReal(1));
  }
  SUBCASE("ell = H on Y squeezes") {
    auto ell = ray_functional(Point{1, 2}, coord_max2());
    auto ext = extend_functional(inst, ell, ConeSpec::ray(Point{1, 2}));
    CHECK(ext.run.q_star(Point{1, 2}) == ExtReal(2));
  }
  SUBCASE("ell above H is rejected") {
    auto ell = Functional::linear(Point{3, 3});
    CHECK_THROWS_AS(extend_functional(inst, ell, ConeSpec::ray(Point{1, 1})), ValidationError);
  }
}

TEST_CASE("envelope") {
  SUBCASE("H = Max attains H(x) on every ray") {
    auto inst = min_max_instance();
    inst.carrier = make_carrier(2, {Point{1, 0}, Point{0, 1}, Point{1, 1}, Point{1, 3}, Point{3, 1}},
                                {q(1, 8), q(1, 2), q(1), q(2)}, 0, 4096, true);
    inst.tol = 0;
    auto env = envelope(inst);
    CHECK(env.failures.empty());
    CHECK(env.envelope_matches);
    bool saw = false;
    for (const auto& m : env.members)
      if (m.ray == normalize_l1(Point{1, 3})) {
        saw = true;
        CHECK(scale(4, m.member_value) == ExtReal(3));
      }
    CHECK(saw);
  }
  SUBCASE("H = Linear collapses to H") {
    auto inst = min_max_instance();
    inst.upper = Functional::linear(Point{1, 2});
    inst.lower = inst.upper;
    auto env = envelope(inst);
    CHECK(env.envelope_matches);
    SandwichProblem pb(inst);
    // Each member reaches H on its own ray and stays below H elsewhere; off
    // its ray the discrete iteration may stop short of H.
    for (const auto& m : env.members) {
      CHECK(m.member_value == inst.upper(m.ray));
      for (std::size_t r = 0; r < pb.ray_count(); ++r) CHECK(m.values.rays[r] <= inst.upper(pb.carrier().rays[r]));
    }
  }
}
