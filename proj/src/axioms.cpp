#include "sandwich/axioms.hpp"

#include <stdexcept>

namespace sandwich {

bool AxiomReport::all_pass() const {
  for (const auto& r : results)
    if (r.verdict == Verdict::Fail) return false;
  return true;
}

const AxiomResult& AxiomReport::get(const std::string& axiom) const {
  for (const auto& r : results)
    if (r.axiom == axiom) return r;
  throw std::out_of_range("no axiom named '" + axiom + "' in report");
}

namespace {

void check_sample(const RelationSpec& relation, std::span<const Point> sample, const AxiomOptions& options) {
  if (sample.size() > options.max_sample)
    throw std::invalid_argument("sample of " + std::to_string(sample.size()) + " points exceeds the cap of " +
                                std::to_string(options.max_sample) + " (raise max_sample to override)");
  for (const auto& p : sample)
    if (p.size() != relation.dimension)
      throw std::invalid_argument("sample point " + to_string(p) + " has the wrong dimension");
}

using Matrix = std::vector<std::vector<char>>;

Matrix relation_matrix(const RelationSpec& relation, std::span<const Point> sample) {
  Matrix m(sample.size(), std::vector<char>(sample.size()));
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j) m[i][j] = relation.relates(sample[i], sample[j]);
  return m;
}

void fail(AxiomResult& r, std::vector<Point> witness, std::optional<Rational> scale = std::nullopt) {
  r.verdict = Verdict::Fail;
  r.witness = std::move(witness);
  r.scale = std::move(scale);
}

AxiomResult check_reflexive(std::span<const Point> s, const Matrix& m) {
  AxiomResult r{"reflexive", "x R x"};
  for (std::size_t i = 0; i < s.size(); ++i) {
    ++r.instances_checked;
    if (!m[i][i]) {
      fail(r, {s[i]});
      break;
    }
  }
  return r;
}

AxiomResult check_symmetric(std::span<const Point> s, const Matrix& m) {
  AxiomResult r{"symmetric", "x R y implies y R x"};
  for (std::size_t i = 0; i < s.size() && r.verdict == Verdict::Pass; ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!m[i][j]) continue;
      ++r.instances_checked;
      if (!m[j][i]) {
        fail(r, {s[i], s[j]});
        break;
      }
    }
  return r;
}

AxiomResult check_transitive(std::span<const Point> s, const Matrix& m) {
  AxiomResult r{"transitive", "x R y and y R z imply x R z"};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!m[i][j]) continue;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (!m[j][k]) continue;
        ++r.instances_checked;
        if (!m[i][k]) {
          fail(r, {s[i], s[j], s[k]});
          return r;
        }
      }
    }
  return r;
}

AxiomResult check_additive(const RelationSpec& rel, std::span<const Point> s, const Matrix& m) {
  AxiomResult r{"additive-closure", "x R y and y R z imply (x+y) R z"};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!m[i][j]) continue;
      Point sum = s[i] + s[j];
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (!m[j][k]) continue;
        ++r.instances_checked;
        if (!rel.relates(sum, s[k])) {
          fail(r, {s[i], s[j], s[k]});
          return r;
        }
      }
    }
  return r;
}

AxiomReport start_report(const RelationSpec& relation, std::span<const Point> sample) {
  AxiomReport report;
  report.relation = relation.describe();
  report.sample_size = sample.size();
  return report;
}

}  // namespace

AxiomReport check_ccsp_axioms(const RelationSpec& relation, std::span<const Point> sample,
                              std::span<const Rational> scales, const AxiomOptions& options) {
  check_sample(relation, sample, options);
  const Matrix m = relation_matrix(relation, sample);
  AxiomReport report = start_report(relation, sample);
  report.results.push_back(check_reflexive(sample, m));
  report.results.push_back(check_symmetric(sample, m));
  report.results.push_back(check_transitive(sample, m));

  AxiomResult sc{"scale-closure", "(λx) R x for λ > 0"};
  for (std::size_t i = 0; i < sample.size() && sc.verdict == Verdict::Pass; ++i)
    for (const auto& lambda : scales) {
      if (lambda <= 0) throw std::invalid_argument("scale grid must be positive");
      ++sc.instances_checked;
      if (!relation.relates(lambda * sample[i], sample[i])) {
        fail(sc, {sample[i]}, lambda);
        break;
      }
    }
  report.results.push_back(sc);
  report.results.push_back(check_additive(relation, sample, m));
  return report;
}

AxiomReport check_summand_axioms(const RelationSpec& relation, std::span<const Point> sample, int n_max,
                                 const AxiomOptions& options) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  check_sample(relation, sample, options);
  const Matrix m = relation_matrix(relation, sample);
  AxiomReport report = start_report(relation, sample);
  report.results.push_back(check_reflexive(sample, m));
  report.results.push_back(check_symmetric(sample, m));
  report.results.push_back(check_transitive(sample, m));
  report.results.push_back(check_additive(relation, sample, m));

  AxiomResult dc{"division-closure", "x R y implies (x/n) R y"};
  for (std::size_t i = 0; i < sample.size() && dc.verdict == Verdict::Pass; ++i)
    for (std::size_t j = 0; j < sample.size() && dc.verdict == Verdict::Pass; ++j) {
      if (!m[i][j]) continue;
      for (int n = 1; n <= n_max; ++n) {
        ++dc.instances_checked;
        if (!relation.relates(Rational(1, n) * sample[i], sample[j])) {
          fail(dc, {sample[i], sample[j]}, Rational(n));
          break;
        }
      }
    }
  report.results.push_back(dc);
  return report;
}

bool witness_reproduces(const RelationSpec& rel, const AxiomResult& r) {
  if (r.verdict != Verdict::Fail) return false;
  const auto& w = r.witness;
  if (r.axiom == "reflexive") return w.size() == 1 && !rel.relates(w[0], w[0]);
  if (r.axiom == "symmetric") return w.size() == 2 && rel.relates(w[0], w[1]) && !rel.relates(w[1], w[0]);
  if (r.axiom == "transitive")
    return w.size() == 3 && rel.relates(w[0], w[1]) && rel.relates(w[1], w[2]) && !rel.relates(w[0], w[2]);
  if (r.axiom == "additive-closure")
    return w.size() == 3 && rel.relates(w[0], w[1]) && rel.relates(w[1], w[2]) &&
           !rel.relates(w[0] + w[1], w[2]);
  if (r.axiom == "scale-closure") return w.size() == 1 && r.scale && !rel.relates(*r.scale * w[0], w[0]);
  if (r.axiom == "division-closure")
    return w.size() == 2 && r.scale && rel.relates(w[0], w[1]) && !rel.relates(Rational(1 / *r.scale) * w[0], w[1]);
  return false;
}

CollapseReport check_collapse(const RelationSpec& relation, std::span<const Point> sample,
                              const AxiomOptions& options) {
  check_sample(relation, sample, options);
  const Matrix m = relation_matrix(relation, sample);
  CollapseReport rep;
  rep.sample_size = sample.size();

  for (std::size_t z = 0; z < sample.size(); ++z) {
    if (!sample[z].is_zero()) continue;
    bool all = true;
    for (std::size_t j = 0; j < sample.size() && all; ++j) all = m[z][j];
    rep.zero_trigger = all;
    break;
  }

  bool any_negative_pair = false, all_negatives_related = true;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample[i].is_zero()) continue;
    Point neg = Rational(-1) * sample[i];
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (!(sample[j] == neg)) continue;
      any_negative_pair = true;
      if (!m[j][i]) all_negatives_related = false;
    }
  }
  rep.negation_trigger = any_negative_pair && all_negatives_related;
  rep.triggered = rep.zero_trigger || rep.negation_trigger;

  rep.full_on_sample = true;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j)
      if (!m[i][j]) {
        rep.full_on_sample = false;
        if (rep.triggered) rep.discrepancies.emplace_back(sample[i], sample[j]);
      }
  rep.consistent = !rep.triggered || rep.full_on_sample;
  return rep;
}

}  // namespace sandwich
