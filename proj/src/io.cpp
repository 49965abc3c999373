#include "sandwich/io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace sandwich {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InputError(path.empty() ? "/" : path, message);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

const json* maybe(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(child(path, it.key()), "unknown field");
}

std::string str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

long integer(const json& j, const std::string& path, long lo, long hi) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  long v = j.get<long>();
  if (v < lo || v > hi) fail(path, "value " + std::to_string(v) + " out of range");
  return v;
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

Rational rat(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  if (!j.is_string()) fail(path, "expected a rational (string \"p/q\" or number)");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

ExtReal ext(const json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "-inf") return ExtReal::neg_inf();
  return rat(j, path);
}

std::vector<Rational> rats(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rat(j[i], child(path, i)));
  return out;
}

Point point(const json& j, const std::string& path, std::size_t dim) {
  Point p(rats(j, path));
  if (dim != 0 && p.size() != dim)
    fail(path, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(p.size()));
  return p;
}

std::vector<Point> points(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) fail(path, "expected an array of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], child(path, i), dim));
  return out;
}

Capacity parse_capacity(const json& j, const std::string& path) {
  only_keys(j, {"ground", "values", "additive"}, path);
  try {
    if (auto* a = maybe(j, "additive")) return Capacity::additive(rats(*a, child(path, "additive")));
    std::size_t n = static_cast<std::size_t>(integer(need(j, "ground", path), child(path, "ground"), 1, 20));
    const json& vals = need(j, "values", path);
    if (!vals.is_object()) fail(child(path, "values"), "expected an object of mask -> value");
    std::map<std::uint64_t, Rational> table;
    for (auto it = vals.begin(); it != vals.end(); ++it) {
      std::uint64_t mask = 0;
      try {
        std::size_t used = 0;
        mask = std::stoull(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        fail(child(child(path, "values"), it.key()), "mask keys must be decimal integers");
      }
      table[mask] = rat(it.value(), child(child(path, "values"), it.key()));
    }
    if (!table.count(0)) table[0] = 0;
    return Capacity::from_table(n, table);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

ConeSpec parse_cone(const json& j, const std::string& path, std::size_t dim) {
  only_keys(j, {"kind", "direction"}, path);
  std::string kind = str(need(j, "kind", path), child(path, "kind"));
  if (kind == "ray") {
    Point d = point(need(j, "direction", path), child(path, "direction"), dim);
    if (d.is_zero()) fail(child(path, "direction"), "ray direction must be nonzero");
    return ConeSpec::ray(d);
  }
  if (kind == "orthant") return ConeSpec::orthant(dim);
  if (kind == "whole") return ConeSpec::whole(dim);
  fail(child(path, "kind"), "unknown cone kind '" + kind + "'");
}

RelationSpec parse_relation(const json& j, const std::string& path, std::size_t dim) {
  only_keys(j, {"kind", "e", "weights", "classes", "pairs", "symmetric"}, path);
  std::string kind = str(need(j, "kind", path), child(path, "kind"));
  try {
    switch (relation_kind_from_string(kind)) {
      case RelationKind::Full: return RelationSpec::full(dim);
      case RelationKind::RayD: return RelationSpec::ray_d(dim);
      case RelationKind::StrictComonotone: return RelationSpec::strict_comonotone(dim);
      case RelationKind::EquivalentMeasures: return RelationSpec::equivalent_measures(dim);
      case RelationKind::Phi: return RelationSpec::phi(dim);
      case RelationKind::Affinity: return RelationSpec::affinity(point(need(j, "e", path), child(path, "e"), dim));
      case RelationKind::Corr: {
        std::vector<Rational> w;
        if (auto* p = maybe(j, "weights")) w = rats(*p, child(path, "weights"));
        return RelationSpec::corr(dim, w);
      }
      case RelationKind::Extensional: {
        if (auto* c = maybe(j, "classes")) {
          if (!c->is_array()) fail(child(path, "classes"), "expected an array of classes");
          std::vector<std::vector<Point>> classes;
          for (std::size_t i = 0; i < c->size(); ++i)
            classes.push_back(points((*c)[i], child(child(path, "classes"), i), dim));
          return RelationSpec::extensional_classes(dim, classes);
        }
        const json& p = need(j, "pairs", path);
        if (!p.is_array()) fail(child(path, "pairs"), "expected an array of pairs");
        std::vector<std::pair<Point, Point>> pairs;
        for (std::size_t i = 0; i < p.size(); ++i) {
          auto two = points(p[i], child(child(path, "pairs"), i), dim);
          if (two.size() != 2) fail(child(child(path, "pairs"), i), "a pair needs exactly two points");
          pairs.emplace_back(two[0], two[1]);
        }
        bool sym = true;
        if (auto* s = maybe(j, "symmetric")) sym = boolean(*s, child(path, "symmetric"));
        return RelationSpec::extensional_pairs(dim, pairs, sym);
      }
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "unreachable");
}

Carrier parse_carrier(const json& j, const std::string& path, std::size_t dim) {
  only_keys(j, {"rays", "scales", "closure_depth", "include_origin", "ray_cap"}, path);
  auto rays = points(need(j, "rays", path), child(path, "rays"), dim);
  std::vector<Rational> scales;
  if (auto* s = maybe(j, "scales")) scales = rats(*s, child(path, "scales"));
  int depth = 2;
  if (auto* d = maybe(j, "closure_depth")) depth = static_cast<int>(integer(*d, child(path, "closure_depth"), 0, 16));
  std::size_t cap = 4096;
  if (auto* c = maybe(j, "ray_cap")) cap = static_cast<std::size_t>(integer(*c, child(path, "ray_cap"), 1, 1 << 20));
  bool origin = false;
  if (auto* o = maybe(j, "include_origin")) origin = boolean(*o, child(path, "include_origin"));
  try {
    return make_carrier(dim, rays, scales, depth, cap, origin);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

// Resolves functionals by name, parsing each definition once.
class FunctionalParser {
 public:
  FunctionalParser(const json* defs, const std::map<std::string, Capacity>& caps, std::size_t dim)
      : defs_(defs), caps_(caps), dim_(dim) {}

  Functional named(const std::string& name, const std::string& path) {
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    if (!defs_ || !defs_->contains(name)) fail(path, "unknown functional '" + name + "'");
    if (!active_.insert(name).second) fail(path, "functional '" + name + "' refers to itself");
    Functional f = parse((*defs_)[name], "/functionals/" + name);
    active_.erase(name);
    done_.emplace(name, f);
    return f;
  }

  Functional parse(const json& j, const std::string& path) {
    if (j.is_string()) return named(j.get<std::string>(), path);
    std::string kind = str(need(j, "kind", path), child(path, "kind"));
    try {
      if (kind == "linear") {
        only_keys(j, {"kind", "weights"}, path);
        return Functional::linear(point(need(j, "weights", path), child(path, "weights"), dim_));
      }
      if (kind == "max-rows" || kind == "min-rows") {
        only_keys(j, {"kind", "rows"}, path);
        auto rows = points(need(j, "rows", path), child(path, "rows"), dim_);
        if (rows.empty()) fail(child(path, "rows"), "need at least one row");
        return kind == "max-rows" ? Functional::max_of_rows(rows) : Functional::min_of_rows(rows);
      }
      if (kind == "max" || kind == "min") {
        only_keys(j, {"kind", "of"}, path);
        const json& of = need(j, "of", path);
        if (!of.is_array() || of.empty()) fail(child(path, "of"), "expected a nonempty array");
        std::vector<Functional> parts;
        for (std::size_t i = 0; i < of.size(); ++i) parts.push_back(parse(of[i], child(child(path, "of"), i)));
        return kind == "max" ? Functional::max_of(parts) : Functional::min_of(parts);
      }
      if (kind == "choquet") {
        only_keys(j, {"kind", "capacity"}, path);
        const json& c = need(j, "capacity", path);
        if (c.is_string()) {
          auto it = caps_.find(c.get<std::string>());
          if (it == caps_.end()) fail(child(path, "capacity"), "unknown capacity '" + c.get<std::string>() + "'");
          return Functional::choquet(it->second);
        }
        return Functional::choquet(parse_capacity(c, child(path, "capacity")));
      }
      if (kind == "ray-table") {
        only_keys(j, {"kind", "dimension", "values", "origin", "overrides"}, path);
        std::size_t n = dim_;
        if (auto* d = maybe(j, "dimension")) n = static_cast<std::size_t>(integer(*d, child(path, "dimension"), 1, 64));
        if (n == 0) fail(path, "ray-table needs a dimension");
        auto entries = [&](const char* key) {
          std::vector<std::pair<Point, ExtReal>> out;
          const json* arr = maybe(j, key);
          if (!arr) return out;
          if (!arr->is_array()) fail(child(path, key), "expected an array of {ray, value}");
          for (std::size_t i = 0; i < arr->size(); ++i) {
            std::string p = child(child(path, key), i);
            only_keys((*arr)[i], {"ray", "value"}, p);
            out.emplace_back(point(need((*arr)[i], "ray", p), child(p, "ray"), n),
                             ext(need((*arr)[i], "value", p), child(p, "value")));
          }
          return out;
        };
        ExtReal origin = 0;
        if (auto* o = maybe(j, "origin")) origin = ext(*o, child(path, "origin"));
        return Functional::ray_table(n, entries("values"), origin, entries("overrides"));
      }
      if (kind == "minus-inf-extension") {
        only_keys(j, {"kind", "inner", "domain"}, path);
        Functional inner = parse(need(j, "inner", path), child(path, "inner"));
        return Functional::minus_inf_extension(inner,
                                               parse_cone(need(j, "domain", path), child(path, "domain"), inner.dimension()));
      }
      if (kind == "scaled") {
        only_keys(j, {"kind", "factor", "inner"}, path);
        return Functional::scaled(rat(need(j, "factor", path), child(path, "factor")),
                                  parse(need(j, "inner", path), child(path, "inner")));
      }
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
    fail(child(path, "kind"), "unknown functional kind '" + kind + "'");
  }

 private:
  const json* defs_;
  const std::map<std::string, Capacity>& caps_;
  std::size_t dim_;
  std::map<std::string, Functional> done_;
  std::set<std::string> active_;
};

GridFunction parse_grid(const json& g, const std::string& path, const char* key) {
  GridFunction f;
  f.values = rats(need(g, key, path), child(path, key));
  if (auto* lo = maybe(g, "lo")) f.lo = rat(*lo, child(path, "lo"));
  if (auto* hi = maybe(g, "hi")) f.hi = rat(*hi, child(path, "hi"));
  if (f.values.size() < 2) fail(child(path, key), "a grid function needs at least two nodes");
  if (!(f.lo < f.hi)) fail(path, "grid needs lo < hi");
  return f;
}

ComonoSection parse_comono(const json& j, const std::string& path, const std::map<std::string, Capacity>& caps) {
  only_keys(j, {"x", "y", "grid", "eps", "capacities", "points", "subadditive"}, path);
  ComonoSection c;
  if (auto* x = maybe(j, "x")) c.x = point(*x, child(path, "x"), 0);
  if (auto* y = maybe(j, "y")) c.y = point(*y, child(path, "y"), c.x ? c.x->size() : 0);
  if (c.x.has_value() != c.y.has_value()) fail(path, "x and y must be given together");
  if (auto* g = maybe(j, "grid")) {
    std::string gp = child(path, "grid");
    only_keys(*g, {"lo", "hi", "x", "y"}, gp);
    c.grid_x = parse_grid(*g, gp, "x");
    c.grid_y = parse_grid(*g, gp, "y");
    if (c.grid_x->values.size() != c.grid_y->values.size()) fail(gp, "x and y need the same number of nodes");
  }
  if (auto* e = maybe(j, "eps")) {
    c.eps = rats(*e, child(path, "eps"));
    for (std::size_t i = 0; i < c.eps.size(); ++i)
      if (c.eps[i] <= 0) fail(child(child(path, "eps"), i), "eps must be positive");
  }
  if (auto* cs = maybe(j, "capacities")) {
    if (!cs->is_array()) fail(child(path, "capacities"), "expected an array of capacity names");
    for (std::size_t i = 0; i < cs->size(); ++i) {
      std::string name = str((*cs)[i], child(child(path, "capacities"), i));
      if (!caps.count(name)) fail(child(child(path, "capacities"), i), "unknown capacity '" + name + "'");
      c.capacities.push_back(name);
    }
  }
  if (auto* p = maybe(j, "points")) c.points = points(*p, child(path, "points"), 0);
  if (auto* s = maybe(j, "subadditive")) c.subadditive = str(*s, child(path, "subadditive"));
  return c;
}

ProbeSection parse_probe(const json& j, const std::string& path) {
  only_keys(j, {"relation", "dimension", "rays", "members", "family", "max_entry", "scales", "closure_depth", "trials",
                "max_pivots"},
            path);
  ProbeSection p;
  try {
    if (auto* r = maybe(j, "relation")) p.config.relation = relation_kind_from_string(str(*r, child(path, "relation")));
    if (auto* f = maybe(j, "family")) p.config.family = upper_family_from_string(str(*f, child(path, "family")));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  if (auto* d = maybe(j, "dimension")) p.config.dimension = static_cast<std::size_t>(integer(*d, child(path, "dimension"), 1, 6));
  if (auto* r = maybe(j, "rays")) p.config.rays = static_cast<std::size_t>(integer(*r, child(path, "rays"), 1, 64));
  if (auto* m = maybe(j, "members")) p.config.members = static_cast<std::size_t>(integer(*m, child(path, "members"), 1, 16));
  if (auto* m = maybe(j, "max_entry")) p.config.max_entry = static_cast<int>(integer(*m, child(path, "max_entry"), 1, 1000));
  if (auto* s = maybe(j, "scales")) p.config.scales = rats(*s, child(path, "scales"));
  if (auto* c = maybe(j, "closure_depth")) p.config.closure_depth = static_cast<int>(integer(*c, child(path, "closure_depth"), 0, 4));
  if (auto* t = maybe(j, "trials")) p.trials = static_cast<std::size_t>(integer(*t, child(path, "trials"), 0, 1000000));
  if (auto* m = maybe(j, "max_pivots"))
    p.config.max_pivots = static_cast<std::size_t>(integer(*m, child(path, "max_pivots"), 1, 100000000));
  return p;
}

std::string location_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

// ---- parsing ---------------------------------------------------------------

const Functional& InstanceFile::functional(const std::string& fname) const {
  auto it = functionals.find(fname);
  if (it == functionals.end()) throw InputError("/functionals", "unknown functional '" + fname + "'");
  return it->second;
}

SandwichInstance InstanceFile::sandwich_instance(bool need_lower) const {
  if (!carrier) throw InputError("/carrier", "instance has no carrier");
  if (!relation) throw InputError("/relation", "instance has no relation");
  if (need_lower && !lower) throw InputError("/lower", "instance names no lower functional");
  if (!upper) throw InputError("/upper", "instance names no upper functional");
  SandwichInstance s{*carrier, *relation, functional(lower ? *lower : *upper), functional(*upper)};
  if (lambda_grid) s.lambda_grid = *lambda_grid;
  s.mode = mode;
  s.n_max = n_max;
  s.feasibility = feasibility;
  s.tol = tol;
  s.max_sweeps = max_sweeps;
  return s;
}

InstanceFile parse_instance_json(const json& j) {
  only_keys(j, {"format", "name", "description", "command", "dimension", "seed", "carrier", "relation", "capacities",
                "functionals", "lower", "upper", "ell", "domain", "order", "lambda_grid", "mode", "n_max",
                "feasibility", "tol", "max_sweeps", "sample", "sample_scales", "axioms", "random_sample", "comono",
                "probe"},
            "");
  const std::string fmt = str(need(j, "format", ""), "/format");
  if (fmt != kInstanceFormat) fail("/format", "unsupported format '" + fmt + "', expected " + kInstanceFormat);

  InstanceFile f;
  if (auto* n = maybe(j, "name")) f.name = str(*n, "/name");
  if (auto* c = maybe(j, "command")) f.command = str(*c, "/command");
  if (auto* d = maybe(j, "dimension")) f.dimension = static_cast<std::size_t>(integer(*d, "/dimension", 1, 64));
  if (auto* s = maybe(j, "seed")) {
    if (!s->is_number_unsigned()) fail("/seed", "expected a nonnegative integer");
    f.seed = s->get<std::uint64_t>();
  }
  auto need_dim = [&](const std::string& where) {
    if (f.dimension == 0) fail(where, "a top-level 'dimension' is required");
  };

  if (auto* c = maybe(j, "carrier")) {
    need_dim("/carrier");
    f.carrier = parse_carrier(*c, "/carrier", f.dimension);
  }
  if (auto* r = maybe(j, "relation")) {
    need_dim("/relation");
    f.relation = parse_relation(*r, "/relation", f.dimension);
  }
  if (auto* caps = maybe(j, "capacities")) {
    if (!caps->is_object()) fail("/capacities", "expected an object of name -> capacity");
    for (auto it = caps->begin(); it != caps->end(); ++it)
      f.capacities.emplace(it.key(), parse_capacity(it.value(), "/capacities/" + it.key()));
  }
  const json* defs = maybe(j, "functionals");
  if (defs && !defs->is_object()) fail("/functionals", "expected an object of name -> functional");
  FunctionalParser fp(defs, f.capacities, f.dimension);
  if (defs)
    for (auto it = defs->begin(); it != defs->end(); ++it) {
      Functional fn = fp.named(it.key(), "/functionals/" + it.key());
      if (f.dimension != 0 && fn.dimension() != f.dimension)
        fail("/functionals/" + it.key(), "dimension " + std::to_string(fn.dimension()) + " does not match the instance");
      f.functionals.emplace(it.key(), fn);
    }
  auto ref = [&](const char* key) -> std::optional<std::string> {
    const json* v = maybe(j, key);
    if (!v) return std::nullopt;
    std::string name = str(*v, std::string("/") + key);
    if (!f.functionals.count(name)) fail(std::string("/") + key, "unknown functional '" + name + "'");
    return name;
  };
  f.lower = ref("lower");
  f.upper = ref("upper");
  f.ell = ref("ell");
  if (auto* d = maybe(j, "domain")) {
    need_dim("/domain");
    f.domain = parse_cone(*d, "/domain", f.dimension);
  }
  if (auto* o = maybe(j, "order"))
    if (str(*o, "/order") != "componentwise") fail("/order", "only the componentwise order is supported");
  if (auto* l = maybe(j, "lambda_grid")) f.lambda_grid = rats(*l, "/lambda_grid");
  if (auto* m = maybe(j, "mode")) {
    std::string s = str(*m, "/mode");
    if (s == "conic") f.mode = EngineMode::Conic;
    else if (s == "summand") f.mode = EngineMode::Summand;
    else fail("/mode", "expected 'conic' or 'summand'");
  }
  if (auto* n = maybe(j, "n_max")) f.n_max = static_cast<int>(integer(*n, "/n_max", 1, 64));
  if (auto* fe = maybe(j, "feasibility")) {
    std::string s = str(*fe, "/feasibility");
    if (s == "certified") f.feasibility = Feasibility::Certified;
    else if (s == "exploratory") f.feasibility = Feasibility::Exploratory;
    else fail("/feasibility", "expected 'certified' or 'exploratory'");
  }
  if (auto* t = maybe(j, "tol")) {
    f.tol = rat(*t, "/tol");
    if (f.tol < 0) fail("/tol", "tolerance must be nonnegative");
  }
  if (auto* m = maybe(j, "max_sweeps")) f.max_sweeps = static_cast<int>(integer(*m, "/max_sweeps", 1, 100000));
  if (auto* s = maybe(j, "sample")) f.sample = points(*s, "/sample", f.dimension);
  if (auto* s = maybe(j, "sample_scales")) f.sample_scales = rats(*s, "/sample_scales");
  if (auto* a = maybe(j, "axioms")) {
    f.axioms = str(*a, "/axioms");
    if (f.axioms != "ccsp" && f.axioms != "summand") fail("/axioms", "expected 'ccsp' or 'summand'");
  }
  if (auto* r = maybe(j, "random_sample"))
    f.random_sample = static_cast<std::size_t>(integer(*r, "/random_sample", 0, 4096));
  if (auto* c = maybe(j, "comono")) f.comono = parse_comono(*c, "/comono", f.capacities);
  if (f.comono && f.comono->subadditive && !f.functionals.count(*f.comono->subadditive))
    fail("/comono/subadditive", "unknown functional '" + *f.comono->subadditive + "'");
  if (auto* p = maybe(j, "probe")) f.probe = parse_probe(*p, "/probe");
  return f;
}

InstanceFile parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(location_of(text, e.byte), msg);
  }
  return parse_instance_json(j);
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.location(), e.message());
  }
}

// ---- serialization ---------------------------------------------------------

json to_json(const ExtReal& v) { return to_string(v); }

json to_json(const Point& p) {
  json a = json::array();
  for (const auto& c : p.coords()) a.push_back(to_string(c));
  return a;
}

json to_json(const Capacity& c) {
  json values = json::object();
  for (std::uint64_t m = 1; m < c.table().size(); ++m) values[std::to_string(m)] = to_string(c(m));
  return {{"ground", c.size()}, {"values", values}};
}

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

json cone_json(const ConeSpec& c) {
  switch (c.kind) {
    case ConeSpec::Kind::Ray: return {{"kind", "ray"}, {"direction", to_json(c.direction)}};
    case ConeSpec::Kind::Orthant: return {{"kind", "orthant"}};
    case ConeSpec::Kind::Whole: return {{"kind", "whole"}};
  }
  return nullptr;
}

json relation_json(const RelationSpec& r) {
  json j = {{"kind", to_string(r.kind)}};
  if (r.affinity_e) j["e"] = to_json(*r.affinity_e);
  if (!r.corr_weights.empty()) j["weights"] = rats_json(r.corr_weights);
  if (!r.classes.empty()) {
    json cs = json::array();
    for (const auto& c : r.classes) cs.push_back(points_json(c));
    j["classes"] = cs;
  } else if (r.kind == RelationKind::Extensional) {
    json ps = json::array();
    for (const auto& [a, b] : r.pairs) ps.push_back(json::array({to_json(a), to_json(b)}));
    j["pairs"] = ps;
    j["symmetric"] = false;
  }
  return j;
}

json carrier_json(const Carrier& c) {
  return {{"rays", points_json(c.rays)},
          {"scales", rats_json(c.scales)},
          {"closure_depth", c.closure_depth},
          {"include_origin", c.include_origin},
          {"ray_cap", c.ray_cap}};
}

json table_entries(const std::map<Point, ExtReal>& m) {
  json a = json::array();
  for (const auto& [ray, v] : m) a.push_back({{"ray", to_json(ray)}, {"value", to_json(v)}});
  return a;
}

}  // namespace

json to_json(const Functional& f) {
  return std::visit(
      [&](const auto& form) -> json {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, Functional::Linear>) {
          return {{"kind", "linear"}, {"weights", to_json(form.weights)}};
        } else if constexpr (std::is_same_v<T, Functional::Max> || std::is_same_v<T, Functional::Min>) {
          json parts = json::array();
          for (const auto& p : form.parts) parts.push_back(to_json(p));
          return {{"kind", std::is_same_v<T, Functional::Max> ? "max" : "min"}, {"of", parts}};
        } else if constexpr (std::is_same_v<T, Functional::Choquet>) {
          return {{"kind", "choquet"}, {"capacity", to_json(form.capacity)}};
        } else if constexpr (std::is_same_v<T, Functional::RayTable>) {
          return {{"kind", "ray-table"},
                  {"dimension", f.dimension()},
                  {"values", table_entries(form.values)},
                  {"origin", to_json(form.origin)},
                  {"overrides", table_entries(form.overrides)}};
        } else if constexpr (std::is_same_v<T, Functional::MinusInfExtension>) {
          return {{"kind", "minus-inf-extension"}, {"inner", to_json(form.inner[0])}, {"domain", cone_json(form.domain)}};
        } else {
          return {{"kind", "scaled"}, {"factor", to_string(form.factor)}, {"inner", to_json(form.inner[0])}};
        }
      },
      f.form());
}

json to_json(const InstanceFile& f) {
  json j = {{"format", kInstanceFormat}, {"name", f.name}, {"seed", f.seed}};
  if (f.command) j["command"] = *f.command;
  if (f.dimension) j["dimension"] = f.dimension;
  if (f.carrier) j["carrier"] = carrier_json(*f.carrier);
  if (f.relation) j["relation"] = relation_json(*f.relation);
  if (!f.capacities.empty()) {
    json caps = json::object();
    for (const auto& [name, c] : f.capacities) caps[name] = to_json(c);
    j["capacities"] = caps;
  }
  if (!f.functionals.empty()) {
    json defs = json::object();
    for (const auto& [name, fn] : f.functionals) defs[name] = to_json(fn);
    j["functionals"] = defs;
  }
  if (f.lower) j["lower"] = *f.lower;
  if (f.upper) j["upper"] = *f.upper;
  if (f.ell) j["ell"] = *f.ell;
  if (f.domain) j["domain"] = cone_json(*f.domain);
  j["order"] = "componentwise";
  if (f.lambda_grid) j["lambda_grid"] = rats_json(*f.lambda_grid);
  j["mode"] = to_string(f.mode);
  j["n_max"] = f.n_max;
  j["feasibility"] = to_string(f.feasibility);
  j["tol"] = to_string(f.tol);
  j["max_sweeps"] = f.max_sweeps;
  if (!f.sample.empty()) j["sample"] = points_json(f.sample);
  if (!f.sample_scales.empty()) j["sample_scales"] = rats_json(f.sample_scales);
  j["axioms"] = f.axioms;
  j["random_sample"] = f.random_sample;
  if (f.comono) {
    const auto& c = *f.comono;
    json cj = json::object();
    if (c.x) {
      cj["x"] = to_json(*c.x);
      cj["y"] = to_json(*c.y);
    }
    if (c.grid_x)
      cj["grid"] = {{"lo", to_string(c.grid_x->lo)},
                    {"hi", to_string(c.grid_x->hi)},
                    {"x", rats_json(c.grid_x->values)},
                    {"y", rats_json(c.grid_y->values)}};
    if (!c.eps.empty()) cj["eps"] = rats_json(c.eps);
    if (!c.capacities.empty()) cj["capacities"] = c.capacities;
    if (!c.points.empty()) cj["points"] = points_json(c.points);
    if (c.subadditive) cj["subadditive"] = *c.subadditive;
    j["comono"] = cj;
  }
  if (f.probe) {
    const auto& p = f.probe->config;
    j["probe"] = {{"relation", to_string(p.relation)},
                  {"dimension", p.dimension},
                  {"rays", p.rays},
                  {"members", p.members},
                  {"family", to_string(p.family)},
                  {"max_entry", p.max_entry},
                  {"scales", rats_json(p.scales)},
                  {"closure_depth", p.closure_depth},
                  {"max_pivots", p.max_pivots},
                  {"trials", f.probe->trials}};
  }
  return j;
}

std::string canonical_dump(const InstanceFile& inst) { return to_json(inst).dump(); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string instance_digest(const InstanceFile& inst) { return fnv1a_hex(canonical_dump(inst)); }

}  // namespace sandwich
