#include <doctest.h>

#include <random>

#include "sandwich/axioms.hpp"
#include "sandwich/relation.hpp"

using namespace sandwich;

namespace {
Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}
const std::vector<Rational> kScales = {q(1, 2), q(1), q(3)};

// Random injective vector in R^n with small integer coordinates.
Point injective(std::mt19937_64& rng, std::size_t n) {
  std::vector<long> vals;
  while (vals.size() < n) {
    long v = static_cast<long>(rng() % 21) - 10;
    if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
  }
  Point p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = vals[i];
  return p;
}
}  // namespace

TEST_CASE("relates: spec examples") {
  auto sc = RelationSpec::strict_comonotone(3);
  CHECK(sc.relates(Point{1, 2, 3}, Point{0, 1, 5}));
  auto sc2 = RelationSpec::strict_comonotone(2);
  CHECK(!sc2.relates(Point{1, 1}, Point{0, 1}));
  auto d = RelationSpec::ray_d(2);
  CHECK(d.relates(Point{2, 0}, Point{5, 0}));
  CHECK(!d.relates(Point{2, 0}, Point{-5, 0}));
  CHECK(!d.relates(Point{1, 0}, Point{0, 1}));
  CHECK(d.relates(Point{0, 0}, Point{0, 0}));
  CHECK_THROWS(d.relates(Point{1}, Point{1, 0}));
}

TEST_CASE("strict comonotone: zero relates only to zero, rays relate to themselves") {
  auto sc = RelationSpec::strict_comonotone(2);
  CHECK(sc.relates(Point{0, 0}, Point{0, 0}));
  CHECK(!sc.relates(Point{0, 0}, Point{1, 2}));
  CHECK(!sc.relates(Point{1, 2}, Point{0, 0}));
  CHECK(sc.relates(Point{1, 1}, Point{2, 2}));   // same ray
  CHECK(!sc.relates(Point{1, 1}, Point{-2, -2}));
  auto sc1 = RelationSpec::strict_comonotone(1);
  CHECK(sc1.relates(Point{1}, Point{-3}));  // vacuous product condition
  CHECK(!sc1.relates(Point{1}, Point{0}));
}

TEST_CASE("equivalent measures compares zero sets of nonnegative vectors") {
  auto e = RelationSpec::equivalent_measures(3);
  CHECK(e.relates(Point{1, 0, 2}, Point{5, 0, q(1, 3)}));
  CHECK(!e.relates(Point{1, 0, 2}, Point{1, 1, 2}));
  CHECK_THROWS(e.relates(Point{-1, 0, 2}, Point{1, 0, 2}));
}

TEST_CASE("affinity needs a declared direction and solves x = a y + b e exactly") {
  auto a = RelationSpec::affinity(Point{1, 1});
  CHECK(a.relates(Point{3, 5}, Point{1, 2}));   // 2·(1,2) + 1·(1,1)
  CHECK(a.relates(Point{1, 1}, Point{0, 0}));   // α free when y = 0
  CHECK(!a.relates(Point{1, 0}, Point{0, 0}));
  CHECK(!a.relates(Point{0, 0}, Point{1, 0}));  // would need α = 0
  RelationSpec bad{RelationKind::Affinity, 2};
  CHECK_THROWS(bad.relates(Point{1, 0}, Point{0, 1}));
}

TEST_CASE("affinity: the checker surfaces an additive-closure failure through x = -y") {
  auto a = RelationSpec::affinity(Point{1, 1});
  std::vector<Point> sample = {Point{1, 2}, Point{-1, -2}, Point{1, 0}};
  auto rep = check_ccsp_axioms(a, sample, kScales);
  const auto& ii = rep.get("additive-closure");
  REQUIRE(ii.verdict == Verdict::Fail);
  CHECK(ii.witness[0] + ii.witness[1] == Point{0, 0});
  CHECK(witness_reproduces(a, ii));
}

TEST_CASE("corr on two cells: transitivity fails with witness (f, g, h)") {
  auto c = RelationSpec::corr(2);
  Point f{1, 1}, g{1, 0}, h{0, -1};  // 1_[0,1], 1_[0,1/2], -1_[1/2,1]
  std::vector<Point> sample = {f, g, h};
  auto rep = check_ccsp_axioms(c, sample, kScales);
  const auto& t = rep.get("transitive");
  REQUIRE(t.verdict == Verdict::Fail);
  CHECK(t.witness == std::vector<Point>{f, g, h});
  CHECK(witness_reproduces(c, t));
  CHECK(rep.get("reflexive").verdict == Verdict::Pass);
  CHECK(rep.get("symmetric").verdict == Verdict::Pass);

  auto summand = check_summand_axioms(c, sample, 3);
  CHECK(summand.get("transitive").witness == std::vector<Point>{f, g, h});
}

TEST_CASE("phi relation on {1, -1, 0}: additive closure fails at (1, -1, 1)") {
  auto phi = RelationSpec::phi(1);
  std::vector<Point> sample = {Point{1}, Point{-1}, Point{0}};
  auto rep = check_ccsp_axioms(phi, sample, kScales);
  const auto& ii = rep.get("additive-closure");
  REQUIRE(ii.verdict == Verdict::Fail);
  CHECK(ii.witness == std::vector<Point>{Point{1}, Point{-1}, Point{1}});
  CHECK(witness_reproduces(phi, ii));
  CHECK(rep.get("transitive").verdict == Verdict::Pass);
}

TEST_CASE("full relation passes every axiom") {
  std::vector<Point> sample = {Point{1, 0}, Point{0, 0}, Point{-1, 3}, Point{q(1, 2), 2}};
  auto rep = check_ccsp_axioms(RelationSpec::full(2), sample, kScales);
  CHECK(rep.all_pass());
  CHECK(rep.results.size() == 5);
  CHECK(check_summand_axioms(RelationSpec::full(2), sample, 4).all_pass());
}

TEST_CASE("sample cap is enforced and overridable") {
  std::vector<Point> big;
  for (int i = 0; i < 65; ++i) big.push_back(Point{i, 1});
  CHECK_THROWS(check_ccsp_axioms(RelationSpec::ray_d(2), big, kScales));
  AxiomOptions opt;
  opt.max_sample = 100;
  CHECK(check_ccsp_axioms(RelationSpec::ray_d(2), big, kScales, opt).all_pass());
}

TEST_CASE("summand axioms: division closure") {
  auto sc = RelationSpec::strict_comonotone(2);
  CHECK(sc.relates(Point{2, 4}, Point{1, 5}));
  CHECK(sc.relates(Point{1, 2}, Point{1, 5}));
  std::vector<Point> sample = {Point{2, 4}, Point{1, 5}, Point{3, 1}, Point{-1, 0}};
  CHECK(check_summand_axioms(sc, sample, 5).all_pass());

  // A relation that is not closed under division: pairs list only (2,2)~(2,2).
  auto ext = RelationSpec::extensional_pairs(2, {{Point{2, 2}, Point{2, 2}}}, true);
  std::vector<Point> one = {Point{2, 2}};
  auto rep = check_summand_axioms(ext, one, 2);
  const auto& dc = rep.get("division-closure");
  REQUIRE(dc.verdict == Verdict::Fail);
  CHECK(*dc.scale == 2);
  CHECK(witness_reproduces(ext, dc));
}

TEST_CASE("strict comonotone passes the ccsp axioms on random injective samples") {
  std::mt19937_64 rng(20240611);
  auto sc = RelationSpec::strict_comonotone(3);
  std::size_t triples = 0;
  for (int round = 0; round < 6; ++round) {
    std::vector<Point> sample;
    // Build clusters sharing an order pattern so that many triples relate.
    for (int i = 0; i < 14; ++i) {
      Point p = injective(rng, 3);
      if (i % 2 == 1) {
        Point base = sample.back();
        // strictly increasing transform of the previous point keeps the order
        for (std::size_t k = 0; k < 3; ++k) p[k] = 3 * base[k] + 1;
      }
      sample.push_back(p);
    }
    auto rep = check_ccsp_axioms(sc, sample, kScales);
    CHECK(rep.all_pass());
    triples += rep.get("transitive").instances_checked + rep.get("additive-closure").instances_checked;
  }
  CHECK(triples >= 1000);
}

TEST_CASE("built-in symmetric relations are symmetric on random pairs") {
  std::mt19937_64 rng(99);
  std::vector<RelationSpec> rels = {RelationSpec::full(3), RelationSpec::ray_d(3), RelationSpec::strict_comonotone(3),
                                    RelationSpec::corr(3), RelationSpec::phi(3), RelationSpec::affinity(Point{1, 0, 1})};
  for (int i = 0; i < 200; ++i) {
    Point x(3), y(3);
    for (std::size_t k = 0; k < 3; ++k) {
      x[k] = long(rng() % 5) - 2;
      y[k] = long(rng() % 5) - 2;
    }
    if (i % 5 == 0) y = q(3, 2) * x;
    for (const auto& r : rels) CHECK(r.relates(x, y) == r.relates(y, x));
  }
}

TEST_CASE("check_collapse") {
  SUBCASE("full relation with 0 in the sample: triggered and consistent") {
    std::vector<Point> s = {Point{0, 0}, Point{1, 2}, Point{-1, 0}};
    auto rep = check_collapse(RelationSpec::full(2), s);
    CHECK(rep.zero_trigger);
    CHECK(rep.triggered);
    CHECK(rep.full_on_sample);
    CHECK(rep.consistent);
  }
  SUBCASE("ray relation on two rays: no trigger") {
    std::vector<Point> s = {Point{1, 0}, Point{0, 1}};
    auto rep = check_collapse(RelationSpec::ray_d(2), s);
    CHECK(!rep.triggered);
    CHECK(!rep.full_on_sample);
    CHECK(rep.consistent);
  }
  SUBCASE("extensional relation with the zero trigger but a missing cross pair") {
    Point z{0, 0}, a{1, 0}, b{0, 1};
    auto r = RelationSpec::extensional_pairs(
        2, {{z, z}, {z, a}, {z, b}, {a, a}, {b, b}}, true);
    std::vector<Point> s = {z, a, b};
    auto rep = check_collapse(r, s);
    CHECK(rep.zero_trigger);
    CHECK(!rep.full_on_sample);
    CHECK(!rep.consistent);
    REQUIRE(!rep.discrepancies.empty());
    CHECK(rep.discrepancies.front() == std::make_pair(a, b));
    // The input is not a ccsp: transitivity fails through 0.
    CHECK(check_ccsp_axioms(r, s, kScales).get("transitive").verdict == Verdict::Fail);
  }
  SUBCASE("negation trigger") {
    std::vector<Point> s = {Point{1, 1}, Point{-1, -1}};
    auto rep = check_collapse(RelationSpec::full(2), s);
    CHECK(rep.negation_trigger);
    CHECK(!rep.zero_trigger);
    CHECK(rep.consistent);
    auto ray = check_collapse(RelationSpec::ray_d(2), s);
    CHECK(!ray.negation_trigger);
  }
}

TEST_CASE("extensional classes: membership means same class; undeclared points relate to nothing") {
  auto r = RelationSpec::extensional_classes(1, {{Point{1}, Point{2}}, {Point{-1}}});
  CHECK(r.relates(Point{1}, Point{2}));
  CHECK(!r.relates(Point{1}, Point{-1}));
  CHECK(!r.relates(Point{5}, Point{5}));
}
