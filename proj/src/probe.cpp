#include "sandwich/probe.hpp"

#include <random>
#include <stdexcept>

namespace sandwich {

std::string to_string(UpperFamily f) { return f == UpperFamily::MaxLinear ? "max-linear" : "max-choquet"; }

UpperFamily upper_family_from_string(const std::string& name) {
  if (name == "max-linear") return UpperFamily::MaxLinear;
  if (name == "max-choquet") return UpperFamily::MaxChoquet;
  throw std::invalid_argument("unknown upper family '" + name + "'");
}

namespace {

RelationSpec probe_relation(const ProbeConfig& c) {
  switch (c.relation) {
    case RelationKind::Full: return RelationSpec::full(c.dimension);
    case RelationKind::RayD: return RelationSpec::ray_d(c.dimension);
    case RelationKind::StrictComonotone: return RelationSpec::strict_comonotone(c.dimension);
    default: throw std::invalid_argument("probe supports the full, ray and strict-comonotone relations only");
  }
}

// Monotone capacity built bottom-up over masks.
Capacity random_capacity(std::size_t n, std::mt19937_64& rng, int max_entry) {
  std::uniform_int_distribution<int> bump(0, max_entry);
  std::map<std::uint64_t, Rational> table;
  std::vector<Rational> v(std::size_t{1} << n, Rational(0));
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Rational floor = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) floor = std::max(floor, v[mask & ~(std::uint64_t{1} << i)]);
    v[mask] = floor + Rational(bump(rng), max_entry);
    table[mask] = v[mask];
  }
  return Capacity::from_table(n, table);
}

}  // namespace

ProbeInstance generate_probe_instance(const ProbeConfig& c, std::uint64_t seed, std::size_t trial) {
  if (c.dimension < 1 || c.dimension > 6) throw std::invalid_argument("probe dimension must be in 1..6");
  if (c.members == 0 || c.rays == 0) throw std::invalid_argument("probe needs at least one ray and one member");
  if (c.max_entry < 1) throw std::invalid_argument("probe max_entry must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> coord(1, c.max_entry), entry(0, c.max_entry);

  std::vector<Point> rays;
  for (std::size_t r = 0; r < c.rays; ++r) {
    Point p(c.dimension);
    for (std::size_t i = 0; i < c.dimension; ++i) p[i] = coord(rng);
    rays.push_back(p);
  }
  ProbeInstance inst;
  inst.carrier = close_carrier(make_carrier(c.dimension, rays, c.scales, c.closure_depth), probe_relation(c));

  std::vector<Functional> members;
  if (c.family == UpperFamily::MaxLinear) {
    std::vector<Point> rows;
    for (std::size_t m = 0; m < c.members; ++m) {
      Point row(c.dimension);
      for (std::size_t i = 0; i < c.dimension; ++i) row[i] = entry(rng);
      rows.push_back(row);
    }
    inst.upper = Functional::max_of_rows(rows);
    inst.lower = Functional::min_of_rows(rows);
  } else {
    Rational total = -1;
    for (std::size_t m = 0; m < c.members; ++m) {
      Capacity nu = random_capacity(c.dimension, rng, c.max_entry);
      Rational omega = nu((std::uint64_t{1} << c.dimension) - 1);
      if (total < 0 || omega < total) total = omega;
      members.push_back(Functional::choquet(std::move(nu)));
    }
    inst.upper = Functional::max_of(members);
    // total · min coordinate sits below every member on the orthant.
    std::vector<Point> rows;
    for (std::size_t i = 0; i < c.dimension; ++i) {
      Point row(c.dimension);
      row[i] = total;
      rows.push_back(row);
    }
    inst.lower = Functional::min_of_rows(rows);
  }
  return inst;
}

LinearSystem relation_linear_system(const Carrier& carrier, const RelationSpec& relation) {
  const std::size_t n = carrier.rays.size();
  LinearSystem sys(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (const auto& a : carrier.scales)
        for (const auto& b : carrier.scales) {
          Point u = a * carrier.rays[i], v = b * carrier.rays[j];
          if (!relation.relates(u, v)) continue;
          Point w = u + v;
          if (w.is_zero()) continue;
          auto k = carrier.find_ray(normalize_l1(w));
          if (!k) continue;
          std::vector<Rational> row(n, Rational(0));
          row[i] += a;
          row[j] += b;
          row[*k] -= w.l1_norm();
          bool trivial = true;
          for (const auto& x : row) trivial = trivial && x == 0;
          if (!trivial) sys.add_eq(std::move(row), 0);
        }
  return sys;
}

ProbeReport conjecture_probe(const ProbeConfig& config, std::size_t trials, std::uint64_t seed) {
  ProbeReport rep;
  rep.config = config;
  rep.seed = seed;
  rep.trials = trials;
  if (trials == 0) return rep;
  rep.caveats = {
      "additivity is imposed only on carrier pairs whose sum lies on a carrier ray",
      "bounds are imposed only at carrier points",
      "an infeasible system is a candidate, not a refutation",
  };
  const RelationSpec relation = probe_relation(config);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    ProbeInstance inst = generate_probe_instance(config, seed, trial);
    const auto& rays = inst.carrier.rays;
    LinearSystem base = relation_linear_system(inst.carrier, relation);
    std::vector<Rational> h(rays.size()), p(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) {
      h[r] = inst.upper(rays[r]).value();
      p[r] = inst.lower(rays[r]).value();
    }
    auto unit = [&](std::size_t r) {
      std::vector<Rational> row(rays.size(), Rational(0));
      row[r] = 1;
      return row;
    };

    LinearSystem sandwich = base;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      sandwich.add_le(unit(r), h[r]);
      sandwich.add_ge(unit(r), p[r]);
    }
    ++rep.lp_solves;
    LpResult res = find_feasible_point(sandwich, config.max_pivots);
    if (res.feasible()) {
      ++rep.sandwich_feasible;
    } else {
      rep.candidates.push_back({trial, "sandwich", {},
                                res.status == LpStatus::PivotLimit ? "pivot limit reached" : "system infeasible"});
    }

    for (std::size_t x = 0; x < rays.size(); ++x) {
      LinearSystem env = base;
      for (std::size_t r = 0; r < rays.size(); ++r) env.add_le(unit(r), h[r]);
      env.add_eq(unit(x), h[x]);
      ++rep.lp_solves;
      ++rep.rays_checked;
      LpResult e = find_feasible_point(env, config.max_pivots);
      if (e.feasible()) {
        ++rep.rays_attained;
      } else {
        rep.candidates.push_back({trial, "envelope", {rays[x]},
                                  e.status == LpStatus::PivotLimit ? "pivot limit reached" : "system infeasible"});
      }
    }
  }
  return rep;
}

}  // namespace sandwich
