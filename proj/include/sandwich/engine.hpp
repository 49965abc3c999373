#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sandwich/carrier.hpp"
#include "sandwich/functional.hpp"
#include "sandwich/relation.hpp"

namespace sandwich {

enum class EngineMode { Conic, Summand };
enum class Feasibility { Certified, Exploratory };

std::string to_string(EngineMode mode);
std::string to_string(Feasibility f);

struct SandwichInstance {
  Carrier carrier;
  RelationSpec relation;
  Functional lower;  // P
  Functional upper;  // H
  OrderSpec order;
  std::vector<Rational> lambda_grid = default_lambda_grid();
  EngineMode mode = EngineMode::Conic;
  int n_max = 4;  // summand mode
  Feasibility feasibility = Feasibility::Certified;
  Rational tol = 0;
  int max_sweeps = 50;

  static std::vector<Rational> default_lambda_grid();
};

/// One failed check with the points that show it.
struct Finding {
  std::string check;
  std::string detail;
  std::vector<Point> witness;
};

struct ValidationReport {
  std::vector<std::string> passed;
  std::vector<Finding> failures;
  bool ok() const { return failures.empty(); }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Checks the hypotheses the engine relies on, over the carrier points:
/// P ≤ H, H monotone, H relation-subadditive, P relation-superadditive,
/// P(x) + P(y) ≤ H(x+y) on related pairs, and well-formed grids.
ValidationReport validate_instance(const SandwichInstance& inst);

/// The empty-infimum marker for A_Q. Never stored in an ExtReal.
struct Unconstrained {
  friend bool operator==(Unconstrained, Unconstrained) { return true; }
};
using AValue = std::variant<ExtReal, Unconstrained>;
inline bool is_unconstrained(const AValue& a) { return std::holds_alternative<Unconstrained>(a); }
std::string to_string(const AValue& a);

/// Q on a carrier: one value per unit ray, extended homogeneously, plus
/// Q(0) which the engine never changes.
struct QTable {
  std::vector<ExtReal> rays;
  ExtReal origin = ExtReal(0);
  friend bool operator==(const QTable&, const QTable&) = default;
};

/// The instance with its carrier closed and the pairwise data the
/// transforms need precomputed. Points are indexed ray-major (all scales of
/// ray 0, then ray 1, ...) with the origin last.
class SandwichProblem {
 public:
  explicit SandwichProblem(SandwichInstance inst);

  const SandwichInstance& instance() const { return inst_; }
  const Carrier& carrier() const { return inst_.carrier; }
  std::size_t ray_count() const { return inst_.carrier.rays.size(); }
  std::size_t point_count() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  /// Ray index, or npos for the origin.
  std::size_t ray_of(std::size_t i) const { return ray_[i]; }
  const Rational& scale_of(std::size_t i) const { return scale_[i]; }
  std::size_t point_index(std::size_t ray, std::size_t scale_index) const;
  std::size_t unit_point(std::size_t ray) const { return point_index(ray, unit_scale_); }
  std::optional<std::size_t> find_point(const Point& x) const;
  bool related(std::size_t i, std::size_t j) const { return rel_[i][j]; }
  const ExtReal& upper_at(std::size_t i) const { return h_point_[i]; }
  const ExtReal& lower_at(std::size_t i) const { return p_point_[i]; }
  /// H(point i + point j), for related pairs only.
  const ExtReal& upper_at_sum(std::size_t i, std::size_t j) const;

  /// λ values: the conic grid, or 0..n_max in summand mode.
  const std::vector<Rational>& lambdas() const { return lambdas_; }

  QTable initial_table() const;
  QTable table_from(const Functional& q) const;
  Functional functional_from(const QTable& q) const;
  ExtReal q_at(const QTable& q, std::size_t i) const;

  /// min of H(x+y) − Q(y) over carrier points y with y R x and Q(y) > -inf.
  AValue a_at(const QTable& q, std::size_t x) const;

  /// T_g(Q)(x) with g and x carrier points and a_g = A_Q(g).
  ExtReal t_at(std::size_t g, const QTable& q, const AValue& a_g, std::size_t x) const;

  /// Largest value Q may take on the unit ray `ray` while keeping
  /// Q(x) + Q(y) ≤ H(x+y) for related x on that ray and y off it.
  ExtReal update_cap(const QTable& q, std::size_t ray) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  SandwichInstance inst_;
  std::vector<Point> points_;
  std::vector<std::size_t> ray_;
  std::vector<Rational> scale_;
  std::vector<std::vector<double>> approx_;  // double copies for prefiltering
  std::size_t unit_scale_ = 0;
  std::vector<std::vector<char>> rel_;
  std::vector<std::vector<char>> leq_;  // componentwise order between points
  std::vector<ExtReal> h_point_, p_point_;
  std::vector<std::vector<ExtReal>> h_sum_;
  std::vector<Rational> lambdas_;
  std::vector<double> lambdas_approx_;
  mutable std::vector<std::vector<std::optional<ExtReal>>> h_shift_cache_;  // [g][h * L + λ]

  const ExtReal& upper_at_shift(std::size_t h, std::size_t g, std::size_t lambda_index) const;
  bool shift_leq(std::size_t h, std::size_t g, std::size_t lambda_index, std::size_t x) const;
};

// ---- literal transforms on arbitrary points of carrier rays -----------------

/// Throws if x is not on a carrier ray or q is not evaluable there.
AValue a_transform(const SandwichInstance& inst, const Functional& q, const Point& x);
ExtReal t_transform(const SandwichInstance& inst, const Point& g, const Functional& q, const Point& x);

// ---- iteration -------------------------------------------------------------

struct StepRecord {
  int sweep = 0;
  std::size_t g_ray = 0;
  AValue a_g;
  const QTable* before = nullptr;
  const QTable* after = nullptr;
  const std::vector<ExtReal>* t_values = nullptr;  // per point; origin entry unused
};

struct SweepRecord {
  int sweep = 0;
  std::size_t g_processed = 0;
  std::vector<ExtReal> q_values;  // per unit ray, after the sweep
  Rational max_increase = 0;      // over rays finite before and after
  std::size_t rays_became_finite = 0;
  bool lower_holds = true;        // P ≤ Q on all carrier points
  bool upper_holds = true;        // Q ≤ H on all carrier points
  std::optional<Rational> min_upper_slack;  // min finite H − Q
};

struct AdditivityResidual {
  Rational max_abs = 0;
  std::size_t pairs_checked = 0;
  std::size_t finiteness_mismatches = 0;
};

struct IterationTrace {
  std::vector<SweepRecord> sweeps;
  bool converged = false;
  int sweep_count = 0;
  AdditivityResidual residual;
  std::vector<std::string> diagnostics;  // exploratory-mode findings
};

struct SandwichResult {
  Functional q_star;
  QTable values;
  IterationTrace trace;
  bool sandwich_holds = false;  // P ≤ Q* ≤ H on every carrier point
};

struct IterateOptions {
  std::function<void(const StepRecord&)> observer;
  bool validate = true;
};

/// Round-robin improvement from Q₀ = P. Throws ValidationError if the
/// instance fails validate_instance.
SandwichResult iterate_sandwich(const SandwichInstance& inst, const IterateOptions& options = {});
SandwichResult iterate_sandwich(const SandwichProblem& problem, const IterateOptions& options = {});

AdditivityResidual additivity_residual(const SandwichProblem& problem, const QTable& q);

// ---- toolkit ---------------------------------------------------------------

struct ToolkitItem {
  std::string id;
  std::string statement;
  bool exact_claim = true;  // false: discretization diagnostic only
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<Point> witness;
  Rational worst = 0;  // largest finite violation
};

struct ToolkitReport {
  bool precondition_ok = true;
  std::vector<Finding> precondition_failures;
  std::size_t superadditivity_gaps = 0;  // Q not relation-superadditive on carrier pairs
  std::vector<ToolkitItem> items;

  bool exact_claims_hold() const;
  const ToolkitItem& get(const std::string& id) const;
};

/// Tolerance for toolkit item (4) at point i: factor · (target − Q(x)).
Rational toolkit_item4_factor(const SandwichProblem& problem, std::size_t i);

ToolkitReport verify_toolkit(const SandwichProblem& problem, const QTable& q);
ToolkitReport verify_toolkit(const SandwichInstance& inst, const Functional& q);

// ---- corollaries -----------------------------------------------------------

struct ExtensionResult {
  SandwichResult run;
  bool dominates_ell = false;  // ℓ ≤ Q* on Y ∩ carrier
  bool below_upper = false;    // Q* ≤ H on the carrier
  std::vector<Finding> failures;
};

/// Throws ValidationError when ℓ is not relation-linear on Y ∩ carrier or
/// exceeds H there.
ExtensionResult extend_functional(const SandwichInstance& inst, const Functional& ell, const ConeSpec& domain,
                                  const IterateOptions& options = {});

struct EnvelopeMember {
  Point ray;
  ExtReal upper_value;   // H at the ray
  ExtReal member_value;  // Q_x at the ray
  bool attains = false;
  bool below_upper = false;
  bool converged = false;
  QTable values;
};

struct EnvelopeResult {
  std::vector<EnvelopeMember> members;
  std::vector<Point> skipped;  // rays with H = -inf
  bool envelope_matches = false;  // max over members equals H on every ray
  std::vector<Finding> failures;
};

EnvelopeResult envelope(const SandwichInstance& inst);

}  // namespace sandwich
