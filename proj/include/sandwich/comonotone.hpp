#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sandwich/capacity.hpp"
#include "sandwich/functional.hpp"
#include "sandwich/point.hpp"

namespace sandwich {

/// Raised by the approximation pipeline; `stage` names the failing step.
class ComonotoneError : public std::runtime_error {
 public:
  ComonotoneError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

bool is_comonotonic(const Point& x, const Point& y);
/// x a positive multiple of y, or every off-diagonal increment product > 0.
bool is_strictly_comonotonic(const Point& x, const Point& y);

/// Values at the N+1 equispaced nodes lo + i(hi-lo)/N.
struct GridFunction {
  std::vector<Rational> values;
  Rational lo = 0;
  Rational hi = 1;

  std::size_t intervals() const { return values.empty() ? 0 : values.size() - 1; }
  Rational node(std::size_t i) const;
  std::vector<Rational> nodes() const;
  Point as_point() const { return Point(values); }
  friend bool operator==(const GridFunction&, const GridFunction&) = default;
};

/// Piecewise constant on [b0,b1), [b1,b2), ..., [b_{k-1}, b_k]; values[i] on piece i.
struct StepFunction {
  std::vector<Rational> breakpoints;
  std::vector<Rational> values;

  /// Throws std::invalid_argument on malformed data.
  void validate() const;
  std::size_t piece_of(const Rational& t) const;
  Rational operator()(const Rational& t) const { return values[piece_of(t)]; }
};

/// Linear interpolation through (knots, values), constant outside the knots.
struct PiecewiseLinear {
  std::vector<Rational> knots;  // strictly increasing, nonempty
  std::vector<Rational> values;

  Rational operator()(const Rational& t) const;
  /// Slope check over consecutive knots; returns the offending segment.
  std::optional<std::pair<Rational, Rational>> monotone_lipschitz_violation(bool strict) const;
};

Rational sup_distance(const GridFunction& a, const GridFunction& b);
Rational sup_distance(const PiecewiseLinear& a, const PiecewiseLinear& b, const Rational& lo, const Rational& hi);

// ---- decomposition ---------------------------------------------------------

struct Decomposition {
  Point z;
  PiecewiseLinear h;
  PiecewiseLinear g;
};

/// z = x + y with x = h(z), y = g(z), h and g increasing and 1-Lipschitz.
/// Throws std::invalid_argument unless x and y are comonotonic.
Decomposition comonotone_decompose(const Point& x, const Point& y);

struct CharacterizationReport {
  bool predicate = false;     // is_strictly_comonotonic
  bool proportional = false;  // x ∈ C_y
  bool comonotone = false;
  bool z_injective = false;
  bool h_injective = false;
  bool g_injective = false;
  bool characterization = false;
  bool agree = false;
  std::string note;
};

CharacterizationReport check_strict_characterization(const Point& x, const Point& y);

// ---- approximation ---------------------------------------------------------

struct PerturbationOptions {
  bool merge_adjacent = true;
  bool share_levels = true;  // split non-adjacent pieces with equal values into sub-bands
};

struct PerturbationResult {
  GridFunction values;
  Rational eps_requested;
  Rational eps_used;
  Rational sup_distance;  // to the step function, on the grid
  std::size_t pieces = 0;  // after merging
  bool injective = false;
};

/// Affine ramp from a−ε to a+ε over each piece, evaluated on an N-interval grid of [b0, b_k].
PerturbationResult injective_step_perturbation(const StepFunction& s, const Rational& eps, std::size_t grid_n,
                                               const PerturbationOptions& options = {});

/// Step function with one piece per grid node: [ω_j − h/2, ω_j + h/2), clipped to [lo, hi].
StepFunction step_from_grid(const GridFunction& f);

struct MonotoneApprox {
  PiecewiseLinear function;
  Rational mesh;
  std::size_t runs_collapsed = 0;
  Rational sup_distance;  // exact, over [lo, hi]
};

/// Strictly increasing 1-Lipschitz approximation of an increasing 1-Lipschitz f on [lo, hi].
/// `preferred` are candidate replacement points (grid nodes); midpoints are used otherwise.
MonotoneApprox strictly_increasing_approx(const PiecewiseLinear& f, const Rational& lo, const Rational& hi,
                                          const Rational& eps, const std::vector<Rational>& preferred = {});

struct GridApprox {
  GridFunction values;
  MonotoneApprox detail;
  Rational grid_distance;
};

GridApprox strictly_increasing_approx(const GridFunction& f, const Rational& eps);

struct StrictPairResult {
  GridFunction x, y;
  Rational eps;
  Rational eps_perturbation;  // after any shrink
  Rational distance;          // max sup-distance of x and y to the outputs
  Rational bound;             // perturbation ε + approximation ε
  bool short_circuit = false;
  bool strictly_comonotone = false;
  bool proportional = false;
};

/// Throws ComonotoneError labelled with the failing stage.
StrictPairResult approximate_strict_pair(const GridFunction& x, const GridFunction& y, const Rational& eps);

struct LadderReport {
  std::vector<StrictPairResult> rungs;  // in the order of eps_values
  bool all_strict = false;
  bool distance_non_increasing = false;
};

/// eps_values should be decreasing.
LadderReport strict_pair_ladder(const GridFunction& x, const GridFunction& y, const std::vector<Rational>& eps_values);

// ---- Choquet side ----------------------------------------------------------

struct SubadditivityReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // pairs not strictly comonotone
  std::size_t failures = 0;
  bool equality_everywhere = true;
  std::vector<Point> witness;  // first failing x, y
  Rational worst = 0;          // largest H(x+y) − H(x) − H(y)
  bool pass() const { return failures == 0; }
};

SubadditivityReport check_comono_subadditive(const Functional& h, const std::vector<std::pair<Point, Point>>& pairs);

struct EnvelopeMemberReport {
  std::size_t index = 0;
  std::size_t attained = 0;        // carrier points where member = H
  bool below_everywhere = true;
  bool comonotone_additive = true; // on comonotone carrier pairs
};

struct ComonoEnvelopeReport {
  std::vector<EnvelopeMemberReport> members;
  std::vector<std::size_t> never_attaining;
  std::vector<Point> unattained_points;
  std::size_t points = 0;
  bool envelope_exact = false;
};

ComonoEnvelopeReport comono_envelope_check(const std::vector<Capacity>& members, const std::vector<Point>& points);

}  // namespace sandwich
