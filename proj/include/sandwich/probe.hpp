#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sandwich/carrier.hpp"
#include "sandwich/functional.hpp"
#include "sandwich/lp.hpp"
#include "sandwich/relation.hpp"

namespace sandwich {

enum class UpperFamily { MaxLinear, MaxChoquet };
std::string to_string(UpperFamily f);
UpperFamily upper_family_from_string(const std::string& name);

/// Random instance family for the conjecture probe. All rays lie in the open
/// positive orthant and every functional is finite there.
struct ProbeConfig {
  RelationKind relation = RelationKind::Full;
  std::size_t dimension = 2;
  std::size_t rays = 5;
  std::size_t members = 2;  // terms in the max defining H
  UpperFamily family = UpperFamily::MaxLinear;
  int max_entry = 4;        // random integer data in [1, max_entry] (rows: [0, max_entry])
  std::vector<Rational> scales = {Rational(1, 2), Rational(1), Rational(2)};
  int closure_depth = 1;
  std::size_t max_pivots = 200000;
};

struct ProbeInstance {
  Carrier carrier;
  Functional lower;
  Functional upper;
};

/// Deterministic in (config, seed, trial).
ProbeInstance generate_probe_instance(const ProbeConfig& config, std::uint64_t seed, std::size_t trial);

/// Linear constraints for a finite ray table q (one variable per carrier ray)
/// that is relation-additive on every related pair of carrier points whose
/// sum lies on a carrier ray.
LinearSystem relation_linear_system(const Carrier& carrier, const RelationSpec& relation);

struct ProbeCandidate {
  std::size_t trial = 0;
  std::string conjecture;  // "sandwich" or "envelope"
  std::vector<Point> witness;  // the ray that is not attained, for "envelope"
  std::string reason;
};

struct ProbeReport {
  ProbeConfig config;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t lp_solves = 0;
  std::size_t sandwich_feasible = 0;
  std::size_t rays_attained = 0;
  std::size_t rays_checked = 0;
  std::vector<ProbeCandidate> candidates;
  std::vector<std::string> caveats;
};

/// Searches for finite relation-linear Q with P ≤ Q ≤ H, and for each carrier
/// ray x a finite relation-linear Q ≤ H with Q(x) = H(x). Failures are
/// candidate counterexamples only.
ProbeReport conjecture_probe(const ProbeConfig& config, std::size_t trials, std::uint64_t seed);

}  // namespace sandwich
