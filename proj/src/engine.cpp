#include "sandwich/engine.hpp"

#include <algorithm>
#include <cmath>

namespace sandwich {

std::string to_string(EngineMode mode) { return mode == EngineMode::Conic ? "conic" : "summand"; }
std::string to_string(Feasibility f) { return f == Feasibility::Certified ? "certified" : "exploratory"; }

std::string to_string(const AValue& a) {
  return is_unconstrained(a) ? std::string("unconstrained") : to_string(std::get<ExtReal>(a));
}

std::vector<Rational> SandwichInstance::default_lambda_grid() {
  return {Rational(0),    Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(3, 4),
          Rational(7, 8), Rational(1),    Rational(2),    Rational(4),    Rational(8)};
}

namespace {

std::string validation_message(const ValidationReport& r) {
  std::string msg = "instance validation failed";
  for (const auto& f : r.failures) {
    msg += "; " + f.check + ": " + f.detail;
    if (!f.witness.empty()) {
      msg += " at";
      for (const auto& w : f.witness) msg += " " + to_string(w);
    }
  }
  return msg;
}

bool try_eval(const Functional& f, const Point& x, ExtReal& out) {
  try {
    out = f(x);
    return true;
  } catch (const RayNotInCarrier&) {
    return false;
  }
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(validation_message(report)), report_(std::move(report)) {}

// ---- problem setup ---------------------------------------------------------

SandwichProblem::SandwichProblem(SandwichInstance inst) : inst_(std::move(inst)) {
  Carrier& c = inst_.carrier;
  const std::size_t n = c.dimension;
  if (inst_.relation.dimension != n) throw std::invalid_argument("relation dimension differs from the carrier's");
  if (inst_.lower.dimension() != n || inst_.upper.dimension() != n)
    throw std::invalid_argument("P and H must live on the carrier's dimension");
  c = close_carrier(c, inst_.relation);

  auto unit = std::find(c.scales.begin(), c.scales.end(), Rational(1));
  if (unit == c.scales.end()) throw std::invalid_argument("carrier scales must contain 1");
  unit_scale_ = static_cast<std::size_t>(unit - c.scales.begin());

  for (std::size_t r = 0; r < c.rays.size(); ++r)
    for (const auto& s : c.scales) {
      points_.push_back(s * c.rays[r]);
      ray_.push_back(r);
      scale_.push_back(s);
    }
  if (c.include_origin) {
    points_.emplace_back(n);
    ray_.push_back(npos);
    scale_.emplace_back(0);
  }
  const std::size_t count = points_.size();
  for (const auto& p : points_) {
    std::vector<double> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(to_double(p[i]));
    approx_.push_back(std::move(a));
  }

  if (inst_.mode == EngineMode::Conic) {
    lambdas_ = inst_.lambda_grid;
    for (auto& l : lambdas_) {
      l.canonicalize();
      if (l < 0) throw std::invalid_argument("lambda grid must be nonnegative");
    }
    lambdas_.push_back(Rational(0));
    std::sort(lambdas_.begin(), lambdas_.end());
    lambdas_.erase(std::unique(lambdas_.begin(), lambdas_.end()), lambdas_.end());
  } else {
    if (inst_.n_max < 1) throw std::invalid_argument("summand mode needs n_max ≥ 1");
    for (int k = 0; k <= inst_.n_max; ++k) lambdas_.emplace_back(k);
  }
  for (const auto& l : lambdas_) lambdas_approx_.push_back(to_double(l));

  rel_.assign(count, std::vector<char>(count, 0));
  leq_.assign(count, std::vector<char>(count, 0));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      rel_[i][j] = inst_.relation.relates(points_[i], points_[j]);
      leq_[i][j] = inst_.order.leq(points_[i], points_[j]);
    }

  for (const auto& p : points_) {
    h_point_.push_back(inst_.upper(p));
    ExtReal pv = ExtReal::neg_inf();
    if (!try_eval(inst_.lower, p, pv)) throw std::invalid_argument("P is not evaluable at carrier point " + to_string(p));
    p_point_.push_back(pv);
  }

  h_sum_.assign(count, std::vector<ExtReal>(count, ExtReal::neg_inf()));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i; j < count; ++j)
      if (rel_[i][j] || rel_[j][i]) {
        h_sum_[i][j] = inst_.upper(points_[i] + points_[j]);
        h_sum_[j][i] = h_sum_[i][j];
      }
  h_shift_cache_.resize(count);
}

std::size_t SandwichProblem::point_index(std::size_t ray, std::size_t scale_index) const {
  return ray * inst_.carrier.scales.size() + scale_index;
}

std::optional<std::size_t> SandwichProblem::find_point(const Point& x) const {
  if (x.size() != inst_.carrier.dimension) return std::nullopt;
  if (x.is_zero()) {
    if (inst_.carrier.include_origin) return points_.size() - 1;
    return std::nullopt;
  }
  Rational norm = x.l1_norm();
  auto ray = inst_.carrier.find_ray(Rational(1 / norm) * x);
  if (!ray) return std::nullopt;
  const auto& sc = inst_.carrier.scales;
  auto it = std::lower_bound(sc.begin(), sc.end(), norm);
  if (it == sc.end() || *it != norm) return std::nullopt;
  return point_index(*ray, static_cast<std::size_t>(it - sc.begin()));
}

const ExtReal& SandwichProblem::upper_at_sum(std::size_t i, std::size_t j) const {
  if (!rel_[i][j] && !rel_[j][i]) throw std::logic_error("H(x+y) is only cached for related pairs");
  return h_sum_[i][j];
}

QTable SandwichProblem::initial_table() const {
  QTable q;
  for (std::size_t r = 0; r < ray_count(); ++r) q.rays.push_back(p_point_[unit_point(r)]);
  q.origin = inst_.carrier.include_origin ? p_point_.back() : ExtReal(0);
  if (q.origin.is_finite() && q.origin.value() != 0)
    throw std::invalid_argument("P(0) must be 0 or -inf for a positively homogeneous P");
  return q;
}

QTable SandwichProblem::table_from(const Functional& f) const {
  QTable q;
  for (const auto& r : inst_.carrier.rays) q.rays.push_back(f(r));
  q.origin = inst_.carrier.include_origin ? f(Point(inst_.carrier.dimension)) : ExtReal(0);
  return q;
}

Functional SandwichProblem::functional_from(const QTable& q) const {
  std::vector<std::pair<Point, ExtReal>> values;
  for (std::size_t r = 0; r < ray_count(); ++r) values.emplace_back(inst_.carrier.rays[r], q.rays[r]);
  return Functional::ray_table(inst_.carrier.dimension, values, q.origin);
}

ExtReal SandwichProblem::q_at(const QTable& q, std::size_t i) const {
  if (ray_[i] == npos) return q.origin;
  return scale(scale_[i], q.rays[ray_[i]]);
}

// ---- transforms ------------------------------------------------------------

AValue SandwichProblem::a_at(const QTable& q, std::size_t x) const {
  std::optional<ExtReal> best;
  for (std::size_t y = 0; y < points_.size(); ++y) {
    if (!rel_[y][x]) continue;
    ExtReal qy = q_at(q, y);
    if (qy.is_neg_inf()) continue;
    ExtReal v = h_sum_[x][y] - qy.value();
    if (!best || v < *best) best = v;
  }
  if (!best) return Unconstrained{};
  return *best;
}

bool SandwichProblem::shift_leq(std::size_t h, std::size_t g, std::size_t li, std::size_t x) const {
  const auto& ah = approx_[h];
  const auto& ag = approx_[g];
  const auto& ax = approx_[x];
  const double lam = lambdas_approx_[li];
  bool certain = true;
  for (std::size_t i = 0; i < ah.size(); ++i) {
    double lhs = ah[i] + lam * ag[i];
    double margin = 1e-9 * (1.0 + std::fabs(lhs) + std::fabs(ax[i]));
    if (lhs > ax[i] + margin) return false;
    if (lhs > ax[i] - margin) certain = false;
  }
  if (certain) return true;
  const Point& ph = points_[h];
  const Point& pg = points_[g];
  const Point& px = points_[x];
  for (std::size_t i = 0; i < ph.size(); ++i)
    if (ph[i] + lambdas_[li] * pg[i] > px[i]) return false;
  return true;
}

const ExtReal& SandwichProblem::upper_at_shift(std::size_t h, std::size_t g, std::size_t li) const {
  auto& cache = h_shift_cache_[g];
  const std::size_t L = lambdas_.size();
  if (cache.empty()) cache.resize(points_.size() * L);
  auto& slot = cache[h * L + li];
  if (!slot) slot = inst_.upper(points_[h] + lambdas_[li] * points_[g]);
  return *slot;
}

ExtReal SandwichProblem::t_at(std::size_t g, const QTable& q, const AValue& a_g, std::size_t x) const {
  const bool certified = inst_.feasibility == Feasibility::Certified;
  ExtReal best = q_at(q, x);
  const ExtReal* a = std::get_if<ExtReal>(&a_g);
  const bool a_finite = a && a->is_finite();
  for (std::size_t h = 0; h < points_.size(); ++h) {
    if (!rel_[h][x]) continue;
    ExtReal qh = q_at(q, h);
    if (qh.is_neg_inf()) continue;
    if (leq_[h][x] && best < qh) best = qh;  // λ = 0
    // λ > 0 terms: skipped when A_Q(g) is unconstrained, and -inf when A_Q(g) is.
    if (!a_finite) continue;
    if (certified && !rel_[h][g]) continue;
    for (std::size_t li = 1; li < lambdas_.size(); ++li) {
      if (!shift_leq(h, g, li, x)) continue;
      ExtReal term(Rational(qh.value() + lambdas_[li] * a->value()));
      if (!(best < term)) continue;
      // min with H(h+λg) widens A's index set by y = h/λ, which makes
      // the term provably ≤ H(x).
      if (certified) term = ext_min(term, upper_at_shift(h, g, li));
      if (best < term) best = term;
    }
  }
  return best;
}

ExtReal SandwichProblem::update_cap(const QTable& q, std::size_t ray) const {
  ExtReal cap = h_point_[unit_point(ray)];
  const auto& scales = inst_.carrier.scales;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const std::size_t x = point_index(ray, si);
    const Rational inv = 1 / scales[si];
    for (std::size_t y = 0; y < points_.size(); ++y) {
      if (ray_[y] == ray || (!rel_[x][y] && !rel_[y][x])) continue;
      ExtReal qy = q_at(q, y);
      if (qy.is_neg_inf()) continue;
      cap = ext_min(cap, scale(inv, h_sum_[x][y] - qy.value()));
    }
  }
  return cap;
}

// ---- literal transforms ----------------------------------------------------

namespace {

std::vector<Point> all_points(const Carrier& c) { return carrier_points(c); }

void require_on_carrier_ray(const Carrier& c, const Point& x) {
  if (x.size() != c.dimension) throw std::invalid_argument("point " + to_string(x) + " has the wrong dimension");
  if (x.is_zero()) {
    if (c.include_origin) return;
    throw std::invalid_argument("the origin is not part of this carrier");
  }
  if (!c.find_ray(normalize_l1(x))) throw std::invalid_argument("point " + to_string(x) + " is not on a carrier ray");
}

std::vector<Rational> engine_lambdas(const SandwichInstance& inst) {
  std::vector<Rational> ls;
  if (inst.mode == EngineMode::Conic) {
    ls = inst.lambda_grid;
  } else {
    for (int k = 0; k <= inst.n_max; ++k) ls.emplace_back(k);
  }
  ls.emplace_back(0);
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  return ls;
}

AValue literal_a(const SandwichInstance& inst, const std::vector<Point>& pts, const Functional& q, const Point& x) {
  std::optional<ExtReal> best;
  for (const auto& y : pts) {
    if (!inst.relation.relates(y, x)) continue;
    ExtReal qy = q(y);
    if (qy.is_neg_inf()) continue;
    ExtReal v = inst.upper(x + y) - qy.value();
    if (!best || v < *best) best = v;
  }
  if (!best) return Unconstrained{};
  return *best;
}

}  // namespace

AValue a_transform(const SandwichInstance& inst, const Functional& q, const Point& x) {
  Carrier c = close_carrier(inst.carrier, inst.relation);
  require_on_carrier_ray(c, x);
  return literal_a(inst, all_points(c), q, x);
}

ExtReal t_transform(const SandwichInstance& inst, const Point& g, const Functional& q, const Point& x) {
  Carrier c = close_carrier(inst.carrier, inst.relation);
  require_on_carrier_ray(c, x);
  require_on_carrier_ray(c, g);
  const auto pts = all_points(c);
  const AValue a = literal_a(inst, pts, q, g);
  const bool certified = inst.feasibility == Feasibility::Certified;
  ExtReal best = q(x);
  for (const auto& h : pts) {
    if (!inst.relation.relates(h, x)) continue;
    ExtReal qh = q(h);
    if (qh.is_neg_inf()) continue;
    for (const auto& lambda : engine_lambdas(inst)) {
      Point shifted = h + lambda * g;
      if (!inst.order.leq(shifted, x)) continue;
      ExtReal term = qh;
      if (lambda > 0) {
        if (is_unconstrained(a)) continue;
        if (certified && !inst.relation.relates(h, g)) continue;
        term = qh + scale(lambda, std::get<ExtReal>(a));
        if (certified) term = ext_min(term, inst.upper(shifted));
      }
      best = ext_max(best, term);
    }
  }
  return best;
}

// ---- validation ------------------------------------------------------------

namespace {

struct CheckTally {
  std::string name;
  std::size_t failures = 0;
  Finding first;

  void fail(std::string detail, std::vector<Point> witness) {
    if (failures++ == 0) first = {name, std::move(detail), std::move(witness)};
  }
  void commit(ValidationReport& report) {
    if (failures == 0) {
      report.passed.push_back(name);
      return;
    }
    if (failures > 1) first.detail += " (" + std::to_string(failures) + " violations)";
    report.failures.push_back(first);
  }
};

ValidationReport validate_problem(const SandwichProblem& pb) {
  const SandwichInstance& inst = pb.instance();
  ValidationReport report;
  const std::size_t count = pb.point_count();

  CheckTally grid{"engine grid"};
  if (inst.mode == EngineMode::Conic) {
    if (pb.lambdas().size() < 2) grid.fail("lambda grid needs a positive value", {});
  } else if (inst.n_max < 1) {
    grid.fail("n_max must be at least 1", {});
  }
  if (inst.tol < 0) grid.fail("tol must be nonnegative", {});
  if (inst.max_sweeps < 1) grid.fail("max_sweeps must be at least 1", {});
  grid.commit(report);

  CheckTally homog{"P and H positively homogeneous"};
  for (const Functional* f : {&inst.lower, &inst.upper}) {
    try {
      auto rep = check_pos_homogeneous(*f, pb.carrier());
      if (!rep.pass)
        homog.fail((f == &inst.lower ? "P" : "H") + std::string(" scales wrongly by ") + to_string(*rep.scale),
                   rep.witness);
    } catch (const RayNotInCarrier& e) {
      homog.fail(e.what(), {});
    }
  }
  homog.commit(report);

  CheckTally below{"P <= H"};
  for (std::size_t i = 0; i < count; ++i)
    if (pb.lower_at(i) > pb.upper_at(i))
      below.fail("P = " + to_string(pb.lower_at(i)) + " exceeds H = " + to_string(pb.upper_at(i)), {pb.point(i)});
  below.commit(report);

  CheckTally mono{"H monotone"};
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      if (i != j && inst.order.leq(pb.point(i), pb.point(j)) && pb.upper_at(i) > pb.upper_at(j))
        mono.fail("x <= y but H(x) > H(y)", {pb.point(i), pb.point(j)});
  mono.commit(report);

  CheckTally sub{"H relation-subadditive"};
  CheckTally super{"P relation-superadditive"};
  CheckTally joint{"P(x) + P(y) <= H(x+y)"};
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      if (!pb.related(i, j)) continue;
      const ExtReal& hs = pb.upper_at_sum(i, j);
      if (hs > pb.upper_at(i) + pb.upper_at(j)) sub.fail("H(x+y) > H(x) + H(y)", {pb.point(i), pb.point(j)});
      ExtReal psum = pb.lower_at(i) + pb.lower_at(j);
      if (psum > hs) joint.fail("P(x) + P(y) > H(x+y)", {pb.point(i), pb.point(j)});
      ExtReal pw = ExtReal::neg_inf();
      if (try_eval(inst.lower, pb.point(i) + pb.point(j), pw) && pw < psum)
        super.fail("P(x+y) < P(x) + P(y)", {pb.point(i), pb.point(j)});
    }
  sub.commit(report);
  super.commit(report);
  joint.commit(report);
  return report;
}

}  // namespace

ValidationReport validate_instance(const SandwichInstance& inst) {
  SandwichProblem pb(inst);
  return validate_problem(pb);
}

// ---- iteration -------------------------------------------------------------

AdditivityResidual additivity_residual(const SandwichProblem& pb, const QTable& q) {
  AdditivityResidual res;
  const Carrier& c = pb.carrier();
  for (std::size_t i = 0; i < pb.point_count(); ++i) {
    if (pb.ray_of(i) == SandwichProblem::npos) continue;
    for (std::size_t j = 0; j < pb.point_count(); ++j) {
      if (pb.ray_of(j) == SandwichProblem::npos || !pb.related(i, j)) continue;
      Point sum = pb.point(i) + pb.point(j);
      if (sum.is_zero()) continue;
      Rational norm = sum.l1_norm();
      auto ray = c.find_ray(Rational(1 / norm) * sum);
      if (!ray) continue;
      ++res.pairs_checked;
      ExtReal whole = scale(norm, q.rays[*ray]);
      ExtReal parts = pb.q_at(q, i) + pb.q_at(q, j);
      if (whole.is_finite() && parts.is_finite()) {
        Rational gap = rabs(whole.value() - parts.value());
        if (gap > res.max_abs) res.max_abs = gap;
      } else if (whole.is_finite() != parts.is_finite()) {
        ++res.finiteness_mismatches;
      }
    }
  }
  return res;
}

namespace {

bool sandwiched(const SandwichProblem& pb, const QTable& q, bool& lower_ok, bool& upper_ok,
                std::optional<Rational>& min_slack) {
  lower_ok = upper_ok = true;
  min_slack.reset();
  for (std::size_t i = 0; i < pb.point_count(); ++i) {
    ExtReal qi = pb.q_at(q, i);
    if (pb.lower_at(i) > qi) lower_ok = false;
    if (qi > pb.upper_at(i)) upper_ok = false;
    if (qi.is_finite() && pb.upper_at(i).is_finite()) {
      Rational slack = pb.upper_at(i).value() - qi.value();
      if (!min_slack || slack < *min_slack) min_slack = slack;
    }
  }
  return lower_ok && upper_ok;
}

}  // namespace

SandwichResult iterate_sandwich(const SandwichInstance& inst, const IterateOptions& options) {
  SandwichProblem pb(inst);
  return iterate_sandwich(pb, options);
}

SandwichResult iterate_sandwich(const SandwichProblem& pb, const IterateOptions& options) {
  if (options.validate) {
    auto report = validate_problem(pb);
    if (!report.ok()) throw ValidationError(std::move(report));
  }
  const SandwichInstance& inst = pb.instance();
  const bool certified = inst.feasibility == Feasibility::Certified;
  const auto& scales = inst.carrier.scales;
  const std::size_t R = pb.ray_count();

  SandwichResult result;
  QTable q = pb.initial_table();
  std::vector<ExtReal> t_values(pb.point_count(), ExtReal::neg_inf());

  for (int sweep = 1; sweep <= inst.max_sweeps; ++sweep) {
    const QTable start = q;
    for (std::size_t g_ray = 0; g_ray < R; ++g_ray) {
      const std::size_t g = pb.unit_point(g_ray);
      const AValue a_g = pb.a_at(q, g);
      for (std::size_t x = 0; x < pb.point_count(); ++x)
        if (pb.ray_of(x) != SandwichProblem::npos) t_values[x] = pb.t_at(g, q, a_g, x);

      std::optional<QTable> before;
      if (options.observer) before = q;
      for (std::size_t r = 0; r < R; ++r) {
        ExtReal cand = ExtReal::neg_inf();
        for (std::size_t si = 0; si < scales.size(); ++si)
          cand = ext_max(cand, scale(Rational(1 / scales[si]), t_values[pb.point_index(r, si)]));
        if (!(q.rays[r] < cand)) continue;
        if (certified) cand = ext_min(cand, pb.update_cap(q, r));
        if (q.rays[r] < cand) q.rays[r] = cand;
      }
      if (options.observer) options.observer(StepRecord{sweep, g_ray, a_g, &*before, &q, &t_values});
    }

    SweepRecord rec;
    rec.sweep = sweep;
    rec.g_processed = R;
    rec.q_values = q.rays;
    for (std::size_t r = 0; r < R; ++r) {
      if (start.rays[r].is_neg_inf()) {
        if (q.rays[r].is_finite()) ++rec.rays_became_finite;
      } else {
        Rational inc = q.rays[r].value() - start.rays[r].value();
        if (inc > rec.max_increase) rec.max_increase = inc;
      }
    }
    sandwiched(pb, q, rec.lower_holds, rec.upper_holds, rec.min_upper_slack);
    if (!rec.upper_holds && !certified)
      result.trace.diagnostics.push_back("sweep " + std::to_string(sweep) +
                                         ": Q exceeds H on the carrier (exploratory discretization artifact)");
    if (certified && !(rec.lower_holds && rec.upper_holds))
      throw std::logic_error("certified invariant P <= Q <= H broken in sweep " + std::to_string(sweep));
    result.trace.sweeps.push_back(std::move(rec));
    result.trace.sweep_count = sweep;
    const auto& last = result.trace.sweeps.back();
    if (last.rays_became_finite == 0 && last.max_increase <= inst.tol) {
      result.trace.converged = true;
      break;
    }
  }

  bool lo = false, up = false;
  std::optional<Rational> slack;
  result.sandwich_holds = sandwiched(pb, q, lo, up, slack);
  result.trace.residual = additivity_residual(pb, q);
  result.q_star = pb.functional_from(q);
  result.values = std::move(q);
  return result;
}

// ---- toolkit ---------------------------------------------------------------

bool ToolkitReport::exact_claims_hold() const {
  if (!precondition_ok) return false;
  for (const auto& it : items)
    if (it.exact_claim && it.violations > 0) return false;
  return true;
}

const ToolkitItem& ToolkitReport::get(const std::string& id) const {
  for (const auto& it : items)
    if (it.id == id) return it;
  throw std::out_of_range("no toolkit item '" + id + "'");
}

Rational toolkit_item4_factor(const SandwichProblem& pb, std::size_t i) {
  // Witness h = t·r, λ = (s1 - t)/s0 evaluated at s1·r: T(s1 r)/s1 is at
  // least (t/s1)·q + (1 - t/s1)·a, so the shortfall is at most t/s1 of the gap.
  const Rational& s0 = pb.scale_of(i);
  const auto& scales = pb.carrier().scales;
  const auto& ls = pb.lambdas();
  Rational factor = 1;
  for (const auto& s1 : scales)
    for (const auto& t : scales) {
      if (!(t < s1)) continue;
      Rational lambda = (s1 - t) / s0;
      if (std::binary_search(ls.begin(), ls.end(), lambda) && t / s1 < factor) factor = t / s1;
    }
  return factor;
}

namespace {

void note(ToolkitItem& item, const std::vector<Point>& witness, const ExtReal& should_be_big,
          const ExtReal& should_be_small) {
  if (item.violations++ == 0) item.witness = witness;
  if (should_be_big.is_finite() && should_be_small.is_finite()) {
    Rational gap = should_be_small.value() - should_be_big.value();
    if (gap > item.worst) item.worst = gap;
  }
}

}  // namespace

ToolkitReport verify_toolkit(const SandwichProblem& pb, const QTable& q) {
  ToolkitReport rep;
  const SandwichInstance& inst = pb.instance();
  const bool certified = inst.feasibility == Feasibility::Certified;
  const std::size_t count = pb.point_count();
  const std::size_t npos = SandwichProblem::npos;

  for (std::size_t i = 0; i < count; ++i) {
    ExtReal qi = pb.q_at(q, i);
    if (pb.lower_at(i) > qi) rep.precondition_failures.push_back({"P <= Q", "Q below P", {pb.point(i)}});
    if (qi > pb.upper_at(i)) rep.precondition_failures.push_back({"Q <= H", "Q above H", {pb.point(i)}});
  }
  std::vector<std::vector<std::size_t>> sum_index(count, std::vector<std::size_t>(count, npos));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      if (!pb.related(i, j)) continue;
      if (pb.q_at(q, i) + pb.q_at(q, j) > pb.upper_at_sum(i, j))
        rep.precondition_failures.push_back({"Q(x) + Q(y) <= H(x+y)", "joint dominance fails", {pb.point(i), pb.point(j)}});
      if (auto k = pb.find_point(pb.point(i) + pb.point(j))) {
        sum_index[i][j] = *k;
        if (pb.q_at(q, *k) < pb.q_at(q, i) + pb.q_at(q, j)) ++rep.superadditivity_gaps;
      }
    }
  rep.precondition_ok = rep.precondition_failures.empty();
  if (!rep.precondition_ok) return rep;

  std::vector<AValue> a(count, Unconstrained{});
  for (std::size_t i = 0; i < count; ++i)
    if (pb.ray_of(i) != npos) a[i] = pb.a_at(q, i);

  ToolkitItem i1a{"1a", "A_Q(x) >= Q(x) where A_Q(x) is constrained"};
  ToolkitItem i1b{"1b", "A_Q(x+y) <= A_Q(x) + A_Q(y) on related pairs", false};
  ToolkitItem i2{"2", "T_g(Q)(x+y) >= T_g(Q)(x) + T_g(Q)(y) on related pairs", false};
  ToolkitItem i3l{"3-lower", "Q(x) <= T_g(Q)(x)"};
  ToolkitItem i3u{"3-upper", "T_g(Q)(x) <= H(x)", certified};
  ToolkitItem i4{"4", "T_x(Q)(x) >= A_Q(x) - tol"};

  for (std::size_t i = 0; i < count; ++i) {
    if (pb.ray_of(i) == npos || is_unconstrained(a[i])) continue;
    ++i1a.checked;
    const ExtReal& ai = std::get<ExtReal>(a[i]);
    if (ai < pb.q_at(q, i)) note(i1a, {pb.point(i)}, ai, pb.q_at(q, i));
  }
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      std::size_t k = sum_index[i][j];
      if (k == npos || pb.ray_of(i) == npos || pb.ray_of(j) == npos) continue;
      if (is_unconstrained(a[i]) || is_unconstrained(a[j]) || is_unconstrained(a[k])) continue;
      ++i1b.checked;
      ExtReal rhs = std::get<ExtReal>(a[i]) + std::get<ExtReal>(a[j]);
      if (std::get<ExtReal>(a[k]) > rhs) note(i1b, {pb.point(i), pb.point(j)}, rhs, std::get<ExtReal>(a[k]));
    }

  std::vector<ExtReal> t(count, ExtReal::neg_inf());
  for (std::size_t g_ray = 0; g_ray < pb.ray_count(); ++g_ray) {
    const std::size_t g = pb.unit_point(g_ray);
    for (std::size_t x = 0; x < count; ++x) {
      if (pb.ray_of(x) == npos) continue;
      t[x] = pb.t_at(g, q, a[g], x);
      ++i3l.checked;
      ++i3u.checked;
      if (t[x] < pb.q_at(q, x)) note(i3l, {pb.point(g), pb.point(x)}, t[x], pb.q_at(q, x));
      if (t[x] > pb.upper_at(x)) note(i3u, {pb.point(g), pb.point(x)}, pb.upper_at(x), t[x]);
    }
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) {
        std::size_t k = sum_index[i][j];
        if (k == npos || pb.ray_of(i) == npos || pb.ray_of(j) == npos) continue;
        ++i2.checked;
        ExtReal parts = t[i] + t[j];
        if (t[k] < parts) note(i2, {pb.point(g), pb.point(i), pb.point(j)}, t[k], parts);
      }
  }

  const auto& scales = pb.carrier().scales;
  for (std::size_t x = 0; x < count; ++x) {
    if (pb.ray_of(x) == npos || is_unconstrained(a[x])) continue;
    const ExtReal qx = pb.q_at(q, x);
    const ExtReal& ax = std::get<ExtReal>(a[x]);
    if (qx.is_neg_inf() || ax.is_neg_inf()) continue;
    // Certified terms are capped at H, so the reachable target is min(A, H).
    const ExtReal target = certified ? ext_min(ax, pb.upper_at(x)) : ax;
    Rational gap = target.value() - qx.value();
    if (gap < 0) gap = 0;
    const Rational tol4 = toolkit_item4_factor(pb, x) * gap;
    ExtReal reached = ExtReal::neg_inf();
    const Rational& s0 = pb.scale_of(x);
    for (std::size_t si = 0; si < scales.size(); ++si) {
      std::size_t at = pb.point_index(pb.ray_of(x), si);
      reached = ext_max(reached, scale(s0 / scales[si], pb.t_at(x, q, a[x], at)));
    }
    ++i4.checked;
    ExtReal needed = target - tol4;
    if (reached < needed) note(i4, {pb.point(x)}, reached, needed);
  }

  rep.items = {i1a, i1b, i2, i3l, i3u, i4};
  return rep;
}

ToolkitReport verify_toolkit(const SandwichInstance& inst, const Functional& q) {
  SandwichProblem pb(inst);
  return verify_toolkit(pb, pb.table_from(q));
}

// ---- corollaries -----------------------------------------------------------

ExtensionResult extend_functional(const SandwichInstance& inst, const Functional& ell, const ConeSpec& domain,
                                  const IterateOptions& options) {
  SandwichInstance closed = inst;
  closed.carrier = close_carrier(inst.carrier, inst.relation);
  const auto pts = carrier_points(closed.carrier);

  ValidationReport pre;
  CheckTally dom{"ell <= H on Y"};
  CheckTally lin{"ell relation-linear on Y"};
  std::vector<Point> in_y;
  for (const auto& p : pts)
    if (domain.contains(p)) in_y.push_back(p);
  for (const auto& p : in_y)
    if (ell(p) > inst.upper(p)) dom.fail("ell = " + to_string(ell(p)) + " exceeds H = " + to_string(inst.upper(p)), {p});
  for (const auto& x : in_y)
    for (const auto& y : in_y) {
      if (!inst.relation.relates(x, y)) continue;
      Point sum = x + y;
      if (!domain.contains(sum)) continue;
      ExtReal whole = ExtReal::neg_inf();
      if (!try_eval(ell, sum, whole)) continue;
      if (!(whole == ell(x) + ell(y))) lin.fail("ell(x+y) != ell(x) + ell(y)", {x, y});
    }
  dom.commit(pre);
  lin.commit(pre);
  if (!pre.ok()) throw ValidationError(std::move(pre));

  closed.lower = extend_minus_infinity(ell, domain);
  SandwichProblem pb(closed);
  ExtensionResult out;
  out.run = iterate_sandwich(pb, options);
  out.dominates_ell = true;
  out.below_upper = true;
  for (std::size_t i = 0; i < pb.point_count(); ++i) {
    ExtReal qi = pb.q_at(out.run.values, i);
    if (domain.contains(pb.point(i)) && ell(pb.point(i)) > qi) {
      out.dominates_ell = false;
      out.failures.push_back({"ell <= Q* on Y", "Q* drops below ell", {pb.point(i)}});
    }
    if (qi > pb.upper_at(i)) {
      out.below_upper = false;
      out.failures.push_back({"Q* <= H", "Q* exceeds H", {pb.point(i)}});
    }
  }
  return out;
}

EnvelopeResult envelope(const SandwichInstance& inst) {
  SandwichInstance closed = inst;
  closed.carrier = close_carrier(inst.carrier, inst.relation);
  EnvelopeResult out;
  const auto& rays = closed.carrier.rays;
  std::vector<ExtReal> best(rays.size(), ExtReal::neg_inf());
  auto within = [&](const ExtReal& a, const ExtReal& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return a == b;
    return rabs(a.value() - b.value()) <= inst.tol;
  };

  for (const auto& r : rays) {
    ExtReal hr = inst.upper(r);
    if (hr.is_neg_inf()) {
      out.skipped.push_back(r);
      continue;
    }
    EnvelopeMember m;
    m.ray = r;
    m.upper_value = hr;
    try {
      ExtensionResult ext = extend_functional(closed, ray_functional(r, inst.upper), ConeSpec::ray(r));
      m.values = ext.run.values;
      m.member_value = m.values.rays[*closed.carrier.find_ray(r)];
      m.attains = within(m.member_value, hr);
      m.below_upper = ext.below_upper;
      m.converged = ext.run.trace.converged;
      for (std::size_t k = 0; k < rays.size(); ++k) best[k] = ext_max(best[k], m.values.rays[k]);
    } catch (const std::exception& e) {
      out.failures.push_back({"envelope member", e.what(), {r}});
      m.member_value = ExtReal::neg_inf();
    }
    if (!m.attains) out.failures.push_back({"Q_x(x) = H(x)", "member misses H at its own ray", {r}});
    if (!m.below_upper) out.failures.push_back({"Q_x <= H", "member exceeds H", {r}});
    out.members.push_back(std::move(m));
  }
  out.envelope_matches = true;
  for (std::size_t k = 0; k < rays.size(); ++k) {
    ExtReal hr = inst.upper(rays[k]);
    if (hr.is_neg_inf()) continue;
    if (!within(best[k], hr)) {
      out.envelope_matches = false;
      out.failures.push_back({"sup of family = H", "envelope misses H", {rays[k]}});
    }
  }
  return out;
}

}  // namespace sandwich
