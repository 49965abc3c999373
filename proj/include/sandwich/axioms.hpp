#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sandwich/relation.hpp"

namespace sandwich {

enum class Verdict { Pass, Fail };

/// Outcome of one axiom check. On failure `witness` holds the offending
/// points in the order the axiom names them and `scale` the offending
/// multiplier, if any. The first witness in sample order is reported.
struct AxiomResult {
  std::string axiom;
  std::string statement;
  Verdict verdict = Verdict::Pass;
  std::vector<Point> witness;
  std::optional<Rational> scale;
  std::size_t instances_checked = 0;
};

struct AxiomReport {
  std::string relation;
  std::size_t sample_size = 0;
  std::vector<AxiomResult> results;

  bool all_pass() const;
  const AxiomResult& get(const std::string& axiom) const;
};

struct AxiomOptions {
  std::size_t max_sample = 64;
};

/// Checks, exhaustively over the sample: "reflexive", "symmetric",
/// "transitive", "scale-closure" ((λx) R x for λ in `scales`) and
/// "additive-closure" (x R y R z ⇒ (x+y) R z).
AxiomReport check_ccsp_axioms(const RelationSpec& relation, std::span<const Point> sample,
                              std::span<const Rational> scales, const AxiomOptions& options = {});

/// The conic checks without scale-closure, plus "division-closure":
/// x R y ⇒ (x/n) R y for n = 1..n_max.
AxiomReport check_summand_axioms(const RelationSpec& relation, std::span<const Point> sample, int n_max,
                                 const AxiomOptions& options = {});

/// Re-evaluates the relation on a reported witness; true iff the witness
/// still violates the named axiom.
bool witness_reproduces(const RelationSpec& relation, const AxiomResult& result);

/// Looks for either collapse trigger on the sample: 0 R x for every sampled
/// x, or (-x) R x for every sampled x whose negative is also sampled. When
/// triggered, a ccsp must be full on the sample; any unrelated pair found
/// is a discrepancy, which flags a non-ccsp input.
struct CollapseReport {
  bool zero_trigger = false;
  bool negation_trigger = false;  // only counted when some -x is sampled
  bool triggered = false;
  bool full_on_sample = false;
  bool consistent = true;  // !triggered || full_on_sample
  std::vector<std::pair<Point, Point>> discrepancies;
  std::size_t sample_size = 0;
};

CollapseReport check_collapse(const RelationSpec& relation, std::span<const Point> sample,
                              const AxiomOptions& options = {});

}  // namespace sandwich
