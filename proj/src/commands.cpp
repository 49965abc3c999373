#include "sandwich/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sandwich/axioms.hpp"

#ifndef SANDWICH_DEFAULT_FIXTURE_DIR
#define SANDWICH_DEFAULT_FIXTURE_DIR ""
#endif

namespace sandwich {

using nlohmann::json;

namespace {

json rats_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json points_json(const std::vector<Point>& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(to_json(p));
  return a;
}

json findings_json(const std::vector<Finding>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back({{"check", f.check}, {"detail", f.detail}, {"witness", points_json(f.witness)}});
  return a;
}

json ray_table_json(const std::vector<Point>& rays, const std::vector<ExtReal>& values) {
  json a = json::array();
  for (std::size_t i = 0; i < rays.size(); ++i) a.push_back({{"ray", to_json(rays[i])}, {"value", to_json(values[i])}});
  return a;
}

// ---- check-preorder --------------------------------------------------------

std::vector<Point> random_points(std::size_t dim, std::size_t count, std::uint64_t seed, bool nonnegative) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(nonnegative ? 0 : -3, 3);
  std::vector<Point> out;
  for (std::size_t i = 0; i < count; ++i) {
    Point p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = d(rng);
    out.push_back(p);
  }
  return out;
}

CommandOutcome check_preorder(const InstanceFile& f, const RunOptions& o) {
  if (!f.relation) throw InputError("/relation", "check-preorder needs a relation");
  std::vector<Point> sample = f.sample;
  std::size_t extra = o.sample_size.value_or(f.random_sample);
  std::uint64_t seed = o.seed.value_or(f.seed);
  auto more = random_points(f.dimension, extra, seed, f.relation->kind == RelationKind::EquivalentMeasures);
  sample.insert(sample.end(), more.begin(), more.end());
  if (sample.empty()) throw InputError("/sample", "no sample points (give 'sample' or --sample-size)");
  std::vector<Rational> scales = f.sample_scales;
  if (scales.empty()) scales = {Rational(1, 2), Rational(2), Rational(3)};
  AxiomOptions opts;
  opts.max_sample = std::max<std::size_t>(64, sample.size());

  AxiomReport rep = f.axioms == "summand" ? check_summand_axioms(*f.relation, sample, f.n_max, opts)
                                          : check_ccsp_axioms(*f.relation, sample, scales, opts);
  CollapseReport col = check_collapse(*f.relation, sample, opts);

  json results = json::array();
  for (const auto& r : rep.results) {
    json rj = {{"axiom", r.axiom},
               {"statement", r.statement},
               {"verdict", r.verdict == Verdict::Pass ? "pass" : "fail"},
               {"instances_checked", r.instances_checked}};
    if (r.verdict == Verdict::Fail) {
      rj["witness"] = points_json(r.witness);
      if (r.scale) rj["scale"] = to_string(*r.scale);
      rj["witness_reproduces"] = witness_reproduces(*f.relation, r);
    }
    results.push_back(rj);
  }
  json disc = json::array();
  for (const auto& [a, b] : col.discrepancies) disc.push_back(json::array({to_json(a), to_json(b)}));
  CommandOutcome out;
  out.report = {{"relation", rep.relation},
                {"axiom_set", f.axioms},
                {"sample_size", rep.sample_size},
                {"random_points", extra},
                {"results", results},
                {"all_pass", rep.all_pass()},
                {"collapse",
                 {{"zero_trigger", col.zero_trigger},
                  {"negation_trigger", col.negation_trigger},
                  {"triggered", col.triggered},
                  {"full_on_sample", col.full_on_sample},
                  {"consistent", col.consistent},
                  {"discrepancies", disc}}}};
  out.exit_code = rep.all_pass() ? kExitOk : kExitFailure;
  return out;
}

// ---- engine verbs ----------------------------------------------------------

SandwichInstance engine_instance(const InstanceFile& f, const RunOptions& o, bool need_lower = true) {
  SandwichInstance s = f.sandwich_instance(need_lower);
  if (o.tol) s.tol = *o.tol;
  if (o.mode) s.mode = *o.mode;
  if (o.feasibility) s.feasibility = *o.feasibility;
  return s;
}

json validation_json(const ValidationReport& v) {
  return {{"passed", v.passed}, {"failures", findings_json(v.failures)}};
}

json trace_json(const IterationTrace& t) {
  json series = {{"sweep", json::array()},
                 {"max_increase", json::array()},
                 {"rays_became_finite", json::array()},
                 {"min_upper_slack", json::array()},
                 {"lower_holds", json::array()},
                 {"upper_holds", json::array()}};
  for (const auto& s : t.sweeps) {
    series["sweep"].push_back(s.sweep);
    series["max_increase"].push_back(to_string(s.max_increase));
    series["rays_became_finite"].push_back(s.rays_became_finite);
    series["min_upper_slack"].push_back(s.min_upper_slack ? json(to_string(*s.min_upper_slack)) : json(nullptr));
    series["lower_holds"].push_back(s.lower_holds);
    series["upper_holds"].push_back(s.upper_holds);
  }
  return {{"converged", t.converged},
          {"sweep_count", t.sweep_count},
          {"residual",
           {{"max_abs", to_string(t.residual.max_abs)},
            {"pairs_checked", t.residual.pairs_checked},
            {"finiteness_mismatches", t.residual.finiteness_mismatches}}},
          {"diagnostics", t.diagnostics},
          {"series", series}};
}

json toolkit_json(const ToolkitReport& t) {
  json items = json::array();
  for (const auto& it : t.items) {
    json ij = {{"id", it.id},
               {"statement", it.statement},
               {"exact_claim", it.exact_claim},
               {"checked", it.checked},
               {"violations", it.violations},
               {"worst", to_string(it.worst)}};
    if (!it.witness.empty()) ij["witness"] = points_json(it.witness);
    items.push_back(ij);
  }
  return {{"precondition_ok", t.precondition_ok},
          {"precondition_failures", findings_json(t.precondition_failures)},
          {"superadditivity_gaps", t.superadditivity_gaps},
          {"items", items},
          {"exact_claims_hold", t.exact_claims_hold()}};
}

json engine_settings(const SandwichInstance& s) {
  return {{"mode", to_string(s.mode)},
          {"feasibility", to_string(s.feasibility)},
          {"tol", to_string(s.tol)},
          {"max_sweeps", s.max_sweeps},
          {"lambda_grid", rats_json(s.lambda_grid)}};
}

CommandOutcome cmd_sandwich(const InstanceFile& f, const RunOptions& o) {
  SandwichInstance s = engine_instance(f, o);
  CommandOutcome out;
  out.report["settings"] = engine_settings(s);
  ValidationReport v = validate_instance(s);
  out.report["validation"] = validation_json(v);
  if (!v.ok()) {
    out.exit_code = kExitFailure;
    return out;
  }
  SandwichProblem pb(s);
  SandwichResult res;
  try {
    res = iterate_sandwich(pb, {nullptr, false});
  } catch (const std::logic_error& e) {
    out.report["invariant_failure"] = e.what();
    out.exit_code = kExitFailure;
    return out;
  }
  ToolkitReport tk = verify_toolkit(pb, res.values);
  out.report["carrier_rays"] = pb.ray_count();
  out.report["q_star"] = ray_table_json(pb.carrier().rays, res.values.rays);
  out.report["sandwich_holds"] = res.sandwich_holds;
  out.report["trace"] = trace_json(res.trace);
  out.report["toolkit"] = toolkit_json(tk);
  bool ok = res.sandwich_holds && (s.feasibility == Feasibility::Exploratory || tk.exact_claims_hold());
  out.exit_code = ok ? kExitOk : kExitFailure;
  return out;
}

CommandOutcome cmd_extend(const InstanceFile& f, const RunOptions& o) {
  SandwichInstance s = engine_instance(f, o, false);
  if (!f.ell) throw InputError("/ell", "extend needs an 'ell' functional");
  if (!f.domain) throw InputError("/domain", "extend needs a 'domain' cone");
  CommandOutcome out;
  out.report["settings"] = engine_settings(s);
  out.report["domain"] = f.domain->describe();
  try {
    ExtensionResult r = extend_functional(s, f.functional(*f.ell), *f.domain);
    Carrier closed = close_carrier(s.carrier, s.relation);
    out.report["q_star"] = ray_table_json(closed.rays, r.run.values.rays);
    out.report["dominates_ell"] = r.dominates_ell;
    out.report["below_upper"] = r.below_upper;
    out.report["failures"] = findings_json(r.failures);
    out.report["trace"] = trace_json(r.run.trace);
    out.exit_code = r.dominates_ell && r.below_upper ? kExitOk : kExitFailure;
  } catch (const ValidationError& e) {
    out.report["validation"] = validation_json(e.report());
    out.exit_code = kExitFailure;
  }
  return out;
}

CommandOutcome cmd_envelope(const InstanceFile& f, const RunOptions& o) {
  SandwichInstance s = engine_instance(f, o, false);
  CommandOutcome out;
  out.report["settings"] = engine_settings(s);
  EnvelopeResult r = envelope(s);
  json members = json::array();
  json series = {{"ray", json::array()}, {"upper", json::array()}, {"member", json::array()}};
  for (const auto& m : r.members) {
    members.push_back({{"ray", to_json(m.ray)},
                       {"upper_value", to_json(m.upper_value)},
                       {"member_value", to_json(m.member_value)},
                       {"attains", m.attains},
                       {"below_upper", m.below_upper},
                       {"converged", m.converged}});
    series["ray"].push_back(to_json(m.ray));
    series["upper"].push_back(to_json(m.upper_value));
    series["member"].push_back(to_json(m.member_value));
  }
  out.report["members"] = members;
  out.report["skipped"] = points_json(r.skipped);
  out.report["envelope_matches"] = r.envelope_matches;
  out.report["failures"] = findings_json(r.failures);
  out.report["series"] = series;
  out.exit_code = r.envelope_matches && r.failures.empty() ? kExitOk : kExitFailure;
  return out;
}

// ---- comonotone verbs ------------------------------------------------------

const ComonoSection& comono_section(const InstanceFile& f) {
  if (!f.comono) throw InputError("/comono", "this command needs a 'comono' section");
  return *f.comono;
}

json pl_json(const PiecewiseLinear& p) { return {{"knots", rats_json(p.knots)}, {"values", rats_json(p.values)}}; }

CommandOutcome cmd_decompose(const InstanceFile& f) {
  const auto& c = comono_section(f);
  if (!c.x) throw InputError("/comono/x", "decompose needs points x and y");
  if (c.x->size() != c.y->size()) throw InputError("/comono/y", "x and y differ in dimension");
  CommandOutcome out;
  out.report["comonotone"] = is_comonotonic(*c.x, *c.y);
  out.report["strictly_comonotone"] = is_strictly_comonotonic(*c.x, *c.y);
  CharacterizationReport ch = check_strict_characterization(*c.x, *c.y);
  out.report["characterization"] = {{"predicate", ch.predicate},       {"proportional", ch.proportional},
                                    {"z_injective", ch.z_injective},   {"h_injective", ch.h_injective},
                                    {"g_injective", ch.g_injective},   {"characterization", ch.characterization},
                                    {"agree", ch.agree},               {"note", ch.note}};
  if (!is_comonotonic(*c.x, *c.y)) {
    for (std::size_t i = 0; i < c.x->size(); ++i)
      for (std::size_t j = i + 1; j < c.x->size(); ++j)
        if (((*c.x)[i] - (*c.x)[j]) * ((*c.y)[i] - (*c.y)[j]) < 0 && !out.report.contains("witness"))
          out.report["witness"] = {{"coordinates", {i, j}}};
    out.exit_code = kExitFailure;
    return out;
  }
  Decomposition d = comonotone_decompose(*c.x, *c.y);
  out.report["z"] = to_json(d.z);
  out.report["h"] = pl_json(d.h);
  out.report["g"] = pl_json(d.g);
  out.exit_code = ch.agree ? kExitOk : kExitFailure;
  return out;
}

json grid_json(const GridFunction& g) {
  return {{"lo", to_string(g.lo)}, {"hi", to_string(g.hi)}, {"values", rats_json(g.values)}};
}

CommandOutcome cmd_approx(const InstanceFile& f) {
  const auto& c = comono_section(f);
  if (!c.grid_x) throw InputError("/comono/grid", "approx needs grid functions x and y");
  std::vector<Rational> eps = c.eps;
  if (eps.empty()) eps = {Rational(1, 4), Rational(1, 8), Rational(1, 16)};
  CommandOutcome out;
  try {
    LadderReport lad = strict_pair_ladder(*c.grid_x, *c.grid_y, eps);
    json rungs = json::array();
    json series = {{"eps", json::array()}, {"distance", json::array()}, {"bound", json::array()}};
    for (const auto& r : lad.rungs) {
      rungs.push_back({{"eps", to_string(r.eps)},
                       {"eps_perturbation", to_string(r.eps_perturbation)},
                       {"distance", to_string(r.distance)},
                       {"bound", to_string(r.bound)},
                       {"short_circuit", r.short_circuit},
                       {"strictly_comonotone", r.strictly_comonotone},
                       {"proportional", r.proportional}});
      series["eps"].push_back(to_string(r.eps));
      series["distance"].push_back(to_string(r.distance));
      series["bound"].push_back(to_string(r.bound));
    }
    out.report["rungs"] = rungs;
    out.report["series"] = series;
    out.report["all_strict"] = lad.all_strict;
    out.report["distance_non_increasing"] = lad.distance_non_increasing;
    if (!lad.rungs.empty()) {
      out.report["finest"] = {{"x", grid_json(lad.rungs.back().x)}, {"y", grid_json(lad.rungs.back().y)}};
    }
    out.exit_code = lad.all_strict && lad.distance_non_increasing ? kExitOk : kExitFailure;
  } catch (const ComonotoneError& e) {
    out.report["error_stage"] = e.stage();
    out.report["error"] = e.what();
    out.exit_code = kExitFailure;
  }
  return out;
}

std::vector<std::pair<std::string, Capacity>> section_capacities(const InstanceFile& f, const ComonoSection& c) {
  std::vector<std::pair<std::string, Capacity>> caps;
  if (c.capacities.empty())
    for (const auto& [n, cap] : f.capacities) caps.emplace_back(n, cap);
  else
    for (const auto& n : c.capacities) caps.emplace_back(n, f.capacities.at(n));
  return caps;
}

CommandOutcome cmd_choquet(const InstanceFile& f) {
  const auto& c = comono_section(f);
  auto caps = section_capacities(f, c);
  if (caps.empty() && !c.subadditive) throw InputError("/capacities", "choquet needs at least one capacity");
  if (c.points.empty()) throw InputError("/comono/points", "choquet needs evaluation points");
  const std::vector<Rational> scales = {Rational(1, 3), Rational(1, 2), Rational(2), Rational(5, 2), Rational(7)};
  CommandOutcome out;
  bool ok = true;
  json per = json::array();
  for (const auto& [name, cap] : caps) {
    json values = json::array();
    std::size_t add_checked = 0, add_fail = 0, hom_fail = 0;
    for (const auto& p : c.points) {
      if (p.size() != cap.size()) throw InputError("/comono/points", "point dimension differs from capacity '" + name + "'");
      Rational v = choquet_integral(p, cap);
      values.push_back(to_string(v));
      for (const auto& s : scales)
        if (choquet_integral(s * p, cap) != s * v) ++hom_fail;
    }
    for (const auto& p : c.points)
      for (const auto& q : c.points) {
        if (!is_comonotonic(p, q)) continue;
        ++add_checked;
        if (choquet_integral(p + q, cap) != choquet_integral(p, cap) + choquet_integral(q, cap)) ++add_fail;
      }
    ok = ok && add_fail == 0 && hom_fail == 0;
    per.push_back({{"capacity", name},
                   {"monotone", cap.is_monotone()},
                   {"normalized", cap.is_normalized()},
                   {"values", values},
                   {"comonotone_pairs_checked", add_checked},
                   {"additivity_failures", add_fail},
                   {"homogeneity_failures", hom_fail}});
  }
  out.report["points"] = points_json(c.points);
  out.report["capacities"] = per;
  if (c.subadditive) {
    std::vector<std::pair<Point, Point>> pairs;
    for (const auto& p : c.points)
      for (const auto& q : c.points) pairs.emplace_back(p, q);
    SubadditivityReport s = check_comono_subadditive(f.functional(*c.subadditive), pairs);
    out.report["subadditivity"] = {{"functional", *c.subadditive},
                                   {"checked", s.checked},
                                   {"skipped", s.skipped},
                                   {"failures", s.failures},
                                   {"equality_everywhere", s.equality_everywhere},
                                   {"witness", points_json(s.witness)},
                                   {"worst", to_string(s.worst)}};
    ok = ok && s.pass();
  }
  out.exit_code = ok ? kExitOk : kExitFailure;
  return out;
}

CommandOutcome cmd_comono_envelope(const InstanceFile& f) {
  const auto& c = comono_section(f);
  auto caps = section_capacities(f, c);
  if (caps.empty()) throw InputError("/capacities", "envelope needs at least one capacity");
  if (c.points.empty()) throw InputError("/comono/points", "envelope needs carrier points");
  std::vector<Capacity> members;
  for (const auto& [n, cap] : caps) {
    for (const auto& p : c.points)
      if (p.size() != cap.size()) throw InputError("/comono/points", "point dimension differs from capacity '" + n + "'");
    members.push_back(cap);
  }
  ComonoEnvelopeReport r = comono_envelope_check(members, c.points);
  json ms = json::array();
  bool additive = true;
  for (const auto& m : r.members) {
    ms.push_back({{"capacity", caps[m.index].first},
                  {"attained", m.attained},
                  {"below_everywhere", m.below_everywhere},
                  {"comonotone_additive", m.comonotone_additive}});
    additive = additive && m.comonotone_additive;
  }
  json never = json::array();
  for (auto i : r.never_attaining) never.push_back(caps[i].first);
  CommandOutcome out;
  out.report = {{"points", r.points},
                {"members", ms},
                {"never_attaining", never},
                {"unattained_points", points_json(r.unattained_points)},
                {"envelope_exact", r.envelope_exact}};
  out.exit_code = r.envelope_exact && additive ? kExitOk : kExitFailure;
  return out;
}

// ---- probe -----------------------------------------------------------------

CommandOutcome cmd_probe(const InstanceFile& f, const RunOptions& o) {
  ProbeSection p = f.probe.value_or(ProbeSection{});
  std::size_t trials = o.trials.value_or(p.trials);
  std::uint64_t seed = o.seed.value_or(f.seed);
  ProbeReport r;
  try {
    r = conjecture_probe(p.config, trials, seed);
  } catch (const std::invalid_argument& e) {
    throw InputError("/probe", e.what());
  }
  json cands = json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"trial", c.trial}, {"conjecture", c.conjecture}, {"witness", points_json(c.witness)},
                     {"reason", c.reason}});
  CommandOutcome out;
  out.report = {{"relation", to_string(p.config.relation)},
                {"family", to_string(p.config.family)},
                {"dimension", p.config.dimension},
                {"seed", seed},
                {"trials", r.trials},
                {"lp_solves", r.lp_solves},
                {"sandwich_feasible", r.sandwich_feasible},
                {"rays_checked", r.rays_checked},
                {"rays_attained", r.rays_attained},
                {"candidates", cands},
                {"caveats", r.caveats}};
  out.exit_code = kExitOk;  // candidates are findings, not failures
  return out;
}

std::optional<std::string> getenv_string(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

CommandOutcome run_command(const std::string& verb, const InstanceFile& f, const RunOptions& o) {
  CommandOutcome out;
  if (verb == "check-preorder") out = check_preorder(f, o);
  else if (verb == "sandwich") out = cmd_sandwich(f, o);
  else if (verb == "extend") out = cmd_extend(f, o);
  else if (verb == "envelope") out = cmd_envelope(f, o);
  else if (verb == "probe") out = cmd_probe(f, o);
  else if (verb == "comono decompose") out = cmd_decompose(f);
  else if (verb == "comono approx") out = cmd_approx(f);
  else if (verb == "comono choquet") out = cmd_choquet(f);
  else if (verb == "comono envelope") out = cmd_comono_envelope(f);
  else throw InputError("/command", "unknown command '" + verb + "'");
  return out;
}

std::string resolve_instance_path(const std::string& name) {
  namespace fs = std::filesystem;
  std::vector<std::string> names = {name};
  if (fs::path(name).extension() != ".json") names.push_back(name + ".json");
  for (const auto& n : names)
    if (fs::is_regular_file(n)) return n;
  std::vector<std::string> dirs;
  if (auto env = getenv_string("SANDWICH_FIXTURES")) dirs.push_back(*env);
  if (*SANDWICH_DEFAULT_FIXTURE_DIR) dirs.push_back(SANDWICH_DEFAULT_FIXTURE_DIR);
  for (const auto& d : dirs)
    for (const auto& n : names) {
      fs::path p = fs::path(d) / n;
      if (fs::is_regular_file(p)) return p.string();
    }
  return name;  // let loading report the error
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relation-restricted sandwich theorem toolkit: preorder checks, the sandwich engine, "
               "extension and envelope corollaries, comonotone algorithms and a conjecture probe."};
  app.name(args.empty() ? "sandwich-cli" : args[0]);
  app.require_subcommand(1);
  app.footer(
      "Instance files are JSON with \"format\": \"sandwich-instance/1\". A bare name is looked up\n"
      "under $SANDWICH_FIXTURES and then the bundled fixture directory.\n"
      "Exit codes: 0 success, 1 mathematical or validation failure (witness in the report),\n"
      "2 input, schema or usage error.");

  std::string file, out_path;
  std::size_t sample_size = 0, trials = 0;
  std::uint64_t seed = 0;
  std::string tol, mode, feasibility;
  bool timing = false;
  std::string verb;
  CLI::App* active = nullptr;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", file, "instance file or fixture name")->required();
    sub->add_option("--sample-size", sample_size, "random sample points added to the file's sample");
    sub->add_option("--trials", trials, "probe trials");
    sub->add_option("--seed", seed, "random seed (overrides the file)");
    sub->add_option("--tol", tol, "comparison tolerance, a rational such as 1/1000");
    sub->add_option("--mode", mode, "engine mode")->check(CLI::IsMember({"conic", "summand"}));
    sub->add_option("--feasibility", feasibility, "engine feasibility")
        ->check(CLI::IsMember({"certified", "exploratory"}));
    sub->add_option("--out", out_path, "write the report to this file");
    sub->add_flag("--timing", timing, "add wall-clock timing to the report");
    sub->callback([&verb, &active, sub] {
      active = sub;
      verb = sub->get_parent()->get_name() == "comono" ? "comono " + sub->get_name() : sub->get_name();
    });
  };
  common(app.add_subcommand("check-preorder", "check the preorder axioms on a sample"));
  common(app.add_subcommand("sandwich", "run the sandwich engine and verify the toolkit inequalities"));
  common(app.add_subcommand("extend", "extend a relation-linear functional dominated by H"));
  common(app.add_subcommand("envelope", "represent H as the envelope of its ray functionals"));
  common(app.add_subcommand("probe", "random search for candidate counterexamples to the conjectures"));
  common(app.add_subcommand("run", "run the command named in the file's 'command' field"));
  CLI::App* comono = app.add_subcommand("comono", "comonotone algorithms");
  comono->require_subcommand(1);
  common(comono->add_subcommand("decompose", "decompose a comonotone pair as x = h(z), y = g(z)"));
  common(comono->add_subcommand("approx", "strictly comonotone approximation ladder"));
  common(comono->add_subcommand("choquet", "Choquet integrals and comonotone additivity"));
  common(comono->add_subcommand("envelope", "envelope check for a max of Choquet integrals"));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  RunOptions opts;
  auto given = [&](const char* name) { return active && active->count(name) > 0; };
  opts.timing = timing;
  json report = {{"format", kReportFormat}};
  auto started = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (given("--sample-size")) opts.sample_size = sample_size;
    if (given("--trials")) opts.trials = trials;
    if (given("--seed")) opts.seed = seed;
    if (given("--tol")) {
      try {
        opts.tol = parse_rational(tol);
      } catch (const std::exception& e) {
        throw InputError("--tol", e.what());
      }
      if (*opts.tol < 0) throw InputError("--tol", "tolerance must be nonnegative");
    }
    if (given("--mode")) opts.mode = mode == "conic" ? EngineMode::Conic : EngineMode::Summand;
    if (given("--feasibility"))
      opts.feasibility = feasibility == "certified" ? Feasibility::Certified : Feasibility::Exploratory;

    InstanceFile inst = load_instance(resolve_instance_path(file));
    if (verb == "run") {
      if (!inst.command) throw InputError("/command", "file names no command to run");
      verb = *inst.command;
    }
    report["command"] = verb;
    report["instance"] = {{"name", inst.name}, {"digest", instance_digest(inst)}};
    CommandOutcome res = run_command(verb, inst, opts);
    report["result"] = res.report;
    code = res.exit_code;
  } catch (const InputError& e) {
    report["command"] = verb;
    report["error"] = {{"location", e.location()}, {"message", e.message()}};
    err << "error: " << e.what() << "\n";
    code = kExitInputError;
  } catch (const CarrierCapExceeded& e) {
    report["command"] = verb;
    report["error"] = {{"location", "/carrier"}, {"message", e.what()}};
    err << "error: " << e.what() << "\n";
    code = kExitInputError;
  } catch (const std::invalid_argument& e) {
    report["command"] = verb;
    report["error"] = {{"location", ""}, {"message", e.what()}};
    err << "error: " << e.what() << "\n";
    code = kExitInputError;
  }
  report["exit_code"] = code;
  report["status"] = code == kExitOk ? "ok" : code == kExitFailure ? "failure" : "error";
  if (opts.timing)
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

  std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream o(out_path, std::ios::binary);
    if (!o) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitInputError;
    }
    o << text;
    out << report["status"].get<std::string>() << " (exit " << code << "), report written to " << out_path << "\n";
  } else {
    out << text;
  }
  return code;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace sandwich
