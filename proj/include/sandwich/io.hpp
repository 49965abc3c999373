#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sandwich/capacity.hpp"
#include "sandwich/comonotone.hpp"
#include "sandwich/engine.hpp"
#include "sandwich/probe.hpp"

namespace sandwich {

inline constexpr const char* kInstanceFormat = "sandwich-instance/1";
inline constexpr const char* kReportFormat = "sandwich-report/1";

/// Malformed input. `location` is "line L, column C" for syntax errors and a
/// JSON pointer for schema errors.
class InputError : public std::runtime_error {
 public:
  InputError(std::string location, const std::string& message)
      : std::runtime_error(location.empty() ? message : location + ": " + message),
        location_(std::move(location)),
        message_(message) {}
  const std::string& location() const { return location_; }
  const std::string& message() const { return message_; }

 private:
  std::string location_;
  std::string message_;
};

struct ComonoSection {
  std::optional<Point> x, y;                   // decompose
  std::optional<GridFunction> grid_x, grid_y;  // approx
  std::vector<Rational> eps;                   // approx ladder
  std::vector<std::string> capacities;         // choquet, envelope
  std::vector<Point> points;                   // choquet, envelope
  std::optional<std::string> subadditive;      // functional name for the subadditivity check
};

struct ProbeSection {
  ProbeConfig config;
  std::size_t trials = 0;
};

/// Everything a command may need. Only the sections a command uses must be
/// present.
struct InstanceFile {
  std::string name;
  std::optional<std::string> command;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;

  std::optional<Carrier> carrier;
  std::optional<RelationSpec> relation;
  std::map<std::string, Capacity> capacities;
  std::map<std::string, Functional> functionals;
  std::optional<std::string> lower, upper, ell;
  std::optional<ConeSpec> domain;

  std::optional<std::vector<Rational>> lambda_grid;
  EngineMode mode = EngineMode::Conic;
  int n_max = 4;
  Feasibility feasibility = Feasibility::Certified;
  Rational tol = 0;
  int max_sweeps = 50;

  std::vector<Point> sample;
  std::vector<Rational> sample_scales;
  std::string axioms = "ccsp";  // or "summand"
  std::size_t random_sample = 0;

  std::optional<ComonoSection> comono;
  std::optional<ProbeSection> probe;

  const Functional& functional(const std::string& name) const;
  /// Requires carrier, relation and upper, and lower when `need_lower`.
  /// A missing lower is replaced by the upper functional; extension and
  /// envelope runs overwrite it.
  SandwichInstance sandwich_instance(bool need_lower = true) const;
};

InstanceFile parse_instance(const std::string& text);
InstanceFile parse_instance_json(const nlohmann::json& j);
InstanceFile load_instance(const std::string& path);

nlohmann::json to_json(const InstanceFile& inst);
nlohmann::json to_json(const Functional& f);
nlohmann::json to_json(const Capacity& c);
nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const ExtReal& v);

/// Canonical compact dump and its 64-bit FNV-1a hash as 16 hex digits.
std::string canonical_dump(const InstanceFile& inst);
std::string instance_digest(const InstanceFile& inst);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace sandwich
