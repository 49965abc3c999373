#include "sandwich/comonotone.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sandwich/relation.hpp"

namespace sandwich {

bool is_comonotonic(const Point& x, const Point& y) { return is_comonotonic(x.coords(), y.coords()); }

bool is_strictly_comonotonic(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch in comonotonicity test");
  return same_open_ray(x, y) || increments_strictly_cosigned(x.coords(), y.coords());
}

// ---- function types --------------------------------------------------------

Rational GridFunction::node(std::size_t i) const {
  if (intervals() == 0) return lo;
  return lo + (hi - lo) * Rational(static_cast<long>(i)) / Rational(static_cast<long>(intervals()));
}

std::vector<Rational> GridFunction::nodes() const {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back(node(i));
  return out;
}

void StepFunction::validate() const {
  if (values.empty()) throw std::invalid_argument("step function has no pieces");
  if (breakpoints.size() != values.size() + 1)
    throw std::invalid_argument("step function needs one more breakpoint than values");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw std::invalid_argument("step breakpoints must be strictly increasing");
}

std::size_t StepFunction::piece_of(const Rational& t) const {
  if (t < breakpoints.front() || t > breakpoints.back())
    throw std::out_of_range("step function evaluated outside its domain at " + to_string(t));
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - breakpoints.begin());
  return std::min(idx == 0 ? 0 : idx - 1, values.size() - 1);
}

Rational PiecewiseLinear::operator()(const Rational& t) const {
  if (knots.empty()) throw std::logic_error("empty piecewise-linear function");
  if (t <= knots.front()) return values.front();
  if (t >= knots.back()) return values.back();
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  std::size_t k = static_cast<std::size_t>(it - knots.begin());
  const Rational &x0 = knots[k - 1], &x1 = knots[k];
  return values[k - 1] + (values[k] - values[k - 1]) * (t - x0) / (x1 - x0);
}

std::optional<std::pair<Rational, Rational>> PiecewiseLinear::monotone_lipschitz_violation(bool strict) const {
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    Rational rise = values[k + 1] - values[k];
    Rational run = knots[k + 1] - knots[k];
    if (rise < 0 || rise > run || (strict && rise == 0)) return std::make_pair(knots[k], knots[k + 1]);
  }
  return std::nullopt;
}

Rational sup_distance(const GridFunction& a, const GridFunction& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("grid functions on different grids");
  Rational d = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, Rational(rabs(a.values[i] - b.values[i])));
  return d;
}

Rational sup_distance(const PiecewiseLinear& a, const PiecewiseLinear& b, const Rational& lo, const Rational& hi) {
  std::set<Rational> ts{lo, hi};
  for (const auto* f : {&a, &b})
    for (const auto& t : f->knots)
      if (t > lo && t < hi) ts.insert(t);
  Rational d = 0;
  for (const auto& t : ts) d = std::max(d, Rational(rabs(a(t) - b(t))));
  return d;
}

// ---- decomposition ---------------------------------------------------------

Decomposition comonotone_decompose(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch in decomposition");
  if (x.size() == 0) throw std::invalid_argument("cannot decompose empty vectors");
  if (!is_comonotonic(x, y))
    throw std::invalid_argument("decomposition needs a comonotonic pair, got x = " + to_string(x) +
                                ", y = " + to_string(y));
  Decomposition d{x + y, {}, {}};
  std::map<Rational, Rational> h_at;  // z value -> x value
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto [it, fresh] = h_at.emplace(d.z[i], x[i]);
    if (!fresh && it->second != x[i]) throw std::logic_error("comonotonic pair with tied sum but different x");
  }
  for (const auto& [v, hv] : h_at) {
    d.h.knots.push_back(v);
    d.h.values.push_back(hv);
    d.g.knots.push_back(v);
    d.g.values.push_back(v - hv);
  }
  if (d.h.monotone_lipschitz_violation(false) || d.g.monotone_lipschitz_violation(false))
    throw std::logic_error("decomposition maps are not increasing 1-Lipschitz");
  return d;
}

namespace {

bool strictly_increasing_values(const std::vector<Rational>& v) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    if (!(v[k] < v[k + 1])) return false;
  return true;
}

}  // namespace

CharacterizationReport check_strict_characterization(const Point& x, const Point& y) {
  CharacterizationReport r;
  r.predicate = is_strictly_comonotonic(x, y);
  r.proportional = same_open_ray(x, y);
  r.comonotone = is_comonotonic(x, y);
  if (r.proportional) {
    // Take z = y: then h is multiplication by the ratio and g the identity.
    std::set<Rational> distinct(y.coords().begin(), y.coords().end());
    r.z_injective = distinct.size() == y.size();
    r.h_injective = r.g_injective = true;
    r.characterization = true;
    r.note = "proportional pair; characterized with z = y";
  } else if (r.comonotone) {
    Decomposition d = comonotone_decompose(x, y);
    r.z_injective = d.h.knots.size() == x.size();
    r.h_injective = strictly_increasing_values(d.h.values);
    r.g_injective = strictly_increasing_values(d.g.values);
    r.characterization = r.z_injective && r.h_injective && r.g_injective;
    r.note = "z = x + y";
  } else {
    r.note = "not comonotonic, so no increasing decomposition exists";
  }
  r.agree = r.predicate == r.characterization;
  return r;
}

// ---- injective perturbation ------------------------------------------------

PerturbationResult injective_step_perturbation(const StepFunction& input, const Rational& eps, std::size_t grid_n,
                                               const PerturbationOptions& options) {
  input.validate();
  if (eps <= 0) throw std::invalid_argument("perturbation size must be positive, got " + to_string(eps));
  if (grid_n == 0) throw std::invalid_argument("output grid needs at least one interval");

  StepFunction s;
  s.breakpoints.push_back(input.breakpoints.front());
  for (std::size_t i = 0; i < input.values.size(); ++i) {
    if (options.merge_adjacent && !s.values.empty() && s.values.back() == input.values[i]) {
      s.breakpoints.back() = input.breakpoints[i + 1];
      continue;
    }
    s.values.push_back(input.values[i]);
    s.breakpoints.push_back(input.breakpoints[i + 1]);
  }

  PerturbationResult r;
  r.eps_requested = eps;
  r.eps_used = eps;
  r.pieces = s.values.size();

  std::set<Rational> levels(s.values.begin(), s.values.end());
  if (levels.size() >= 2) {
    Rational gap = -1;
    for (auto it = std::next(levels.begin()); it != levels.end(); ++it) {
      Rational d = *it - *std::prev(it);
      if (gap < 0 || d < gap) gap = d;
    }
    if (2 * r.eps_used >= gap) r.eps_used = gap / 4;
  }
  const Rational e = r.eps_used;

  // Pieces sharing a level get disjoint sub-bands in left-to-right order.
  std::map<Rational, std::size_t> count, seen;
  for (const auto& v : s.values) ++count[v];
  std::vector<Rational> band_lo(s.values.size()), width(s.values.size());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::size_t m = count[s.values[i]];
    if (m > 1 && !options.share_levels)
      throw std::invalid_argument("level " + to_string(s.values[i]) +
                                  " is shared by non-adjacent pieces and sub-bands are disabled");
    std::size_t j = seen[s.values[i]]++;
    if (m == 1) {
      band_lo[i] = s.values[i] - e;
      width[i] = 2 * e;
    } else {
      Rational mm(static_cast<long>(m));
      band_lo[i] = s.values[i] - e + 2 * e * Rational(static_cast<long>(j)) / mm;
      width[i] = e / mm;
    }
  }

  r.values.lo = s.breakpoints.front();
  r.values.hi = s.breakpoints.back();
  r.values.values.resize(grid_n + 1);
  for (std::size_t k = 0; k <= grid_n; ++k) {
    Rational w = r.values.node(k);
    std::size_t i = s.piece_of(w);
    const Rational &a = s.breakpoints[i], &b = s.breakpoints[i + 1];
    Rational v = band_lo[i] + width[i] * (w - a) / (b - a);
    r.values.values[k] = v;
    r.sup_distance = std::max(r.sup_distance, Rational(rabs(v - s.values[i])));
  }
  std::set<Rational> distinct(r.values.values.begin(), r.values.values.end());
  r.injective = distinct.size() == r.values.values.size();
  if (!r.injective) throw std::logic_error("perturbed step function is not injective on the grid");
  if (r.sup_distance > eps) throw std::logic_error("perturbation moved the step function by more than eps");
  return r;
}

StepFunction step_from_grid(const GridFunction& f) {
  if (f.values.size() < 2) throw std::invalid_argument("grid function needs at least two nodes");
  StepFunction s;
  Rational half = (f.hi - f.lo) / Rational(static_cast<long>(f.intervals())) / 2;
  s.breakpoints.push_back(f.lo);
  for (std::size_t j = 0; j + 1 < f.values.size(); ++j) s.breakpoints.push_back(f.node(j) + half);
  s.breakpoints.push_back(f.hi);
  s.values = f.values;
  return s;
}

// ---- strictly increasing approximation -------------------------------------

namespace {

// f restricted to [lo, hi] as a list of vertices.
struct Segments {
  std::vector<Rational> t, v;

  Segments(const PiecewiseLinear& f, const Rational& lo, const Rational& hi) {
    t.push_back(lo);
    for (const auto& k : f.knots)
      if (k > lo && k < hi) t.push_back(k);
    t.push_back(hi);
    for (const auto& s : t) v.push_back(f(s));
  }

  // Smallest point with f ≥ target; requires f(hi) ≥ target.
  Rational first_reach(const Rational& target) const {
    if (v.front() >= target) return t.front();
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
      if (v[k + 1] >= target) return t[k] + (target - v[k]) * (t[k + 1] - t[k]) / (v[k + 1] - v[k]);
    throw std::logic_error("first_reach target above the range");
  }

  // Largest point with f ≤ target; requires f(lo) ≤ target.
  Rational last_at_most(const Rational& target) const {
    if (v.back() <= target) return t.back();
    for (std::size_t k = t.size() - 1; k-- > 0;)
      if (v[k] <= target) return t[k] + (target - v[k]) * (t[k + 1] - t[k]) / (v[k + 1] - v[k]);
    throw std::logic_error("last_at_most target below the range");
  }
};

}  // namespace

MonotoneApprox strictly_increasing_approx(const PiecewiseLinear& f, const Rational& lo, const Rational& hi,
                                          const Rational& eps, const std::vector<Rational>& preferred) {
  if (eps <= 0) throw std::invalid_argument("approximation size must be positive, got " + to_string(eps));
  if (!(lo < hi)) throw std::invalid_argument("approximation interval must have lo < hi");
  Segments seg(f, lo, hi);
  for (std::size_t k = 0; k + 1 < seg.t.size(); ++k) {
    Rational rise = seg.v[k + 1] - seg.v[k], run = seg.t[k + 1] - seg.t[k];
    if (rise < 0)
      throw std::invalid_argument("input is not increasing on [" + to_string(seg.t[k]) + ", " +
                                  to_string(seg.t[k + 1]) + "]");
    if (rise > run)
      throw std::invalid_argument("input is not 1-Lipschitz on [" + to_string(seg.t[k]) + ", " +
                                  to_string(seg.t[k + 1]) + "]");
  }

  MonotoneApprox out;
  const Rational ratio = 2 * (hi - lo) / eps;
  const mpz_class whole = ratio.get_num() / ratio.get_den();  // positive, so truncation is floor
  if (!whole.fits_slong_p() || whole > 1000000) throw std::invalid_argument("eps too small for the mesh");
  const long K = whole.get_si() + 1;
  out.mesh = (hi - lo) / Rational(K);
  std::vector<Rational> m(static_cast<std::size_t>(K) + 1), fm(m.size());
  for (long k = 0; k <= K; ++k) {
    m[static_cast<std::size_t>(k)] = lo + out.mesh * Rational(k);
    fm[static_cast<std::size_t>(k)] = f(m[static_cast<std::size_t>(k)]);
  }

  auto& knots = out.function.knots;
  auto& vals = out.function.values;
  std::size_t k = 0;
  const std::size_t last = static_cast<std::size_t>(K);
  while (k <= last) {
    if (k < last && fm[k] == fm[k + 1]) {
      std::size_t j = k + 1;
      while (j < last && fm[j + 1] == fm[k]) ++j;
      ++out.runs_collapsed;
      if (k == 0) {
        Rational delta = std::min(Rational(eps / 2), Rational(m[j] - lo)) / 2;
        knots.push_back(lo);
        vals.push_back(fm[0] - delta);
      } else {
        Rational floor_value = std::max(fm[k - 1], Rational(fm[k] - eps / 2));
        Rational left = seg.last_at_most(floor_value);
        Rational right = seg.first_reach(fm[k]);
        std::vector<Rational> admissible;
        for (const auto& p : preferred)
          if (p > left && p < right) admissible.push_back(p);
        std::sort(admissible.begin(), admissible.end());
        Rational pick = admissible.empty() ? (left + right) / 2 : admissible[(admissible.size() - 1) / 2];
        knots.push_back(pick);
        vals.push_back(f(pick));
      }
      knots.push_back(m[j]);
      vals.push_back(fm[j]);
      k = j + 1;
    } else {
      knots.push_back(m[k]);
      vals.push_back(fm[k]);
      ++k;
    }
  }

  if (auto bad = out.function.monotone_lipschitz_violation(true))
    throw std::logic_error("approximation is not strictly increasing 1-Lipschitz on [" + to_string(bad->first) +
                           ", " + to_string(bad->second) + "]");
  out.sup_distance = sup_distance(f, out.function, lo, hi);
  if (out.sup_distance >= eps) throw std::logic_error("approximation error reached eps");
  return out;
}

GridApprox strictly_increasing_approx(const GridFunction& f, const Rational& eps) {
  if (f.values.size() < 2) throw std::invalid_argument("grid function needs at least two nodes");
  PiecewiseLinear pl{f.nodes(), f.values};
  GridApprox r;
  r.detail = strictly_increasing_approx(pl, f.lo, f.hi, eps, pl.knots);
  r.values.lo = f.lo;
  r.values.hi = f.hi;
  for (const auto& t : pl.knots) r.values.values.push_back(r.detail.function(t));
  r.grid_distance = sup_distance(f, r.values);
  return r;
}

// ---- pipeline --------------------------------------------------------------

StrictPairResult approximate_strict_pair(const GridFunction& x, const GridFunction& y, const Rational& eps) {
  if (eps <= 0) throw ComonotoneError("input", "eps must be positive");
  if (x.values.size() != y.values.size() || x.lo != y.lo || x.hi != y.hi)
    throw ComonotoneError("input", "x and y live on different grids");
  if (x.values.size() < 2) throw ComonotoneError("input", "grid needs at least two nodes");

  StrictPairResult r;
  r.eps = eps;
  const Point px = x.as_point(), py = y.as_point();
  if (is_strictly_comonotonic(px, py)) {
    r.x = x;
    r.y = y;
    r.short_circuit = true;
    r.strictly_comonotone = true;
    r.proportional = same_open_ray(px, py);
    return r;
  }

  Decomposition d;
  try {
    d = comonotone_decompose(px, py);
  } catch (const std::exception& e) {
    throw ComonotoneError("decompose", e.what());
  }

  GridFunction z{d.z.coords(), x.lo, x.hi};
  PerturbationResult pert;
  try {
    pert = injective_step_perturbation(step_from_grid(z), eps / 2, z.intervals());
  } catch (const std::exception& e) {
    throw ComonotoneError("perturb", e.what());
  }
  r.eps_perturbation = pert.eps_used;
  const auto& s = pert.values.values;

  Rational lo = std::min(*std::min_element(s.begin(), s.end()), d.h.knots.front());
  Rational hi = std::max(*std::max_element(s.begin(), s.end()), d.h.knots.back());
  MonotoneApprox hn, gn;
  try {
    hn = strictly_increasing_approx(d.h, lo, hi, eps / 2, d.h.knots);
  } catch (const std::exception& e) {
    throw ComonotoneError("approximate h", e.what());
  }
  try {
    gn = strictly_increasing_approx(d.g, lo, hi, eps / 2, d.g.knots);
  } catch (const std::exception& e) {
    throw ComonotoneError("approximate g", e.what());
  }

  r.x = GridFunction{{}, x.lo, x.hi};
  r.y = GridFunction{{}, y.lo, y.hi};
  for (const auto& sv : s) {
    r.x.values.push_back(hn.function(sv));
    r.y.values.push_back(gn.function(sv));
  }
  r.distance = std::max(sup_distance(x, r.x), sup_distance(y, r.y));
  r.bound = pert.eps_used + eps / 2;
  r.strictly_comonotone = is_strictly_comonotonic(r.x.as_point(), r.y.as_point());
  r.proportional = same_open_ray(r.x.as_point(), r.y.as_point());
  if (!r.strictly_comonotone) throw ComonotoneError("compose", "outputs are not strictly comonotonic");
  if (r.distance > r.bound) throw ComonotoneError("compose", "distance exceeds the pipeline bound");
  return r;
}

LadderReport strict_pair_ladder(const GridFunction& x, const GridFunction& y, const std::vector<Rational>& eps_values) {
  LadderReport rep;
  rep.all_strict = true;
  rep.distance_non_increasing = true;
  for (const auto& e : eps_values) {
    rep.rungs.push_back(approximate_strict_pair(x, y, e));
    const auto& cur = rep.rungs.back();
    rep.all_strict = rep.all_strict && cur.strictly_comonotone;
    if (rep.rungs.size() > 1 && cur.distance > rep.rungs[rep.rungs.size() - 2].distance)
      rep.distance_non_increasing = false;
  }
  return rep;
}

// ---- Choquet side ----------------------------------------------------------

SubadditivityReport check_comono_subadditive(const Functional& h, const std::vector<std::pair<Point, Point>>& pairs) {
  SubadditivityReport r;
  for (const auto& [x, y] : pairs) {
    if (!is_strictly_comonotonic(x, y)) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    ExtReal lhs = h(x + y), rhs = h(x) + h(y);
    if (lhs != rhs) r.equality_everywhere = false;
    if (lhs > rhs) {
      if (r.failures++ == 0) r.witness = {x, y};
      if (rhs.is_finite()) r.worst = std::max(r.worst, Rational(lhs.value() - rhs.value()));
    }
  }
  return r;
}

ComonoEnvelopeReport comono_envelope_check(const std::vector<Capacity>& members, const std::vector<Point>& points) {
  if (members.empty()) throw std::invalid_argument("envelope check needs at least one member");
  ComonoEnvelopeReport r;
  r.points = points.size();
  std::vector<std::vector<Rational>> vals(members.size());
  for (std::size_t m = 0; m < members.size(); ++m)
    for (const auto& p : points) vals[m].push_back(choquet_integral(p, members[m]));

  for (std::size_t m = 0; m < members.size(); ++m) r.members.push_back({m});
  r.envelope_exact = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Rational top = vals[0][i];
    for (std::size_t m = 1; m < members.size(); ++m) top = std::max(top, vals[m][i]);
    bool hit = false;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (vals[m][i] == top) {
        ++r.members[m].attained;
        hit = true;
      }
      if (vals[m][i] > top) r.members[m].below_everywhere = false;
    }
    if (!hit) {
      r.envelope_exact = false;
      r.unattained_points.push_back(points[i]);
    }
  }
  for (std::size_t m = 0; m < members.size(); ++m) {
    if (r.members[m].attained == 0) r.never_attaining.push_back(m);
    for (std::size_t i = 0; i < points.size() && r.members[m].comonotone_additive; ++i)
      for (std::size_t j = 0; j < points.size(); ++j) {
        if (!is_comonotonic(points[i], points[j])) continue;
        if (choquet_integral(points[i] + points[j], members[m]) != vals[m][i] + vals[m][j]) {
          r.members[m].comonotone_additive = false;
          break;
        }
      }
  }
  return r;
}

}  // namespace sandwich
