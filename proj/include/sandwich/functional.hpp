#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sandwich/capacity.hpp"
#include "sandwich/carrier.hpp"
#include "sandwich/ext_real.hpp"
#include "sandwich/relation.hpp"

namespace sandwich {

/// Raised when a RayTable is queried off its stored rays.
class RayNotInCarrier : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cone given by a membership test.
struct ConeSpec {
  enum class Kind { Ray, Orthant, Whole };
  Kind kind = Kind::Whole;
  Point direction;  // Ray only; stored normalized
  std::size_t dimension = 0;

  static ConeSpec ray(const Point& x);
  static ConeSpec orthant(std::size_t n) { return {Kind::Orthant, {}, n}; }
  static ConeSpec whole(std::size_t n) { return {Kind::Whole, {}, n}; }

  /// The ray cone is the open ray {λx : λ > 0}.
  bool contains(const Point& x) const;
  std::string describe() const;
};

/// A positively homogeneous map Q^n → Q ∪ {-inf}.
class Functional {
 public:
  struct Linear {
    Point weights;
  };
  struct Max {
    std::vector<Functional> parts;
  };
  struct Min {
    std::vector<Functional> parts;
  };
  struct Choquet {
    Capacity capacity;
  };
  /// Values at unit (L1-normalized) rays, extended homogeneously. Exact
  /// point overrides take precedence; they exist to build deliberately
  /// non-homogeneous test inputs.
  struct RayTable {
    std::map<Point, ExtReal> values;
    ExtReal origin = ExtReal(0);
    std::map<Point, ExtReal> overrides;
  };
  struct MinusInfExtension {
    std::vector<Functional> inner;  // exactly one element
    ConeSpec domain;
  };
  struct Scale {
    Rational factor;
    std::vector<Functional> inner;  // exactly one element
  };
  using Form = std::variant<Linear, Max, Min, Choquet, RayTable, MinusInfExtension, Scale>;

  Functional() = default;

  static Functional linear(Point weights);
  static Functional max_of(std::vector<Functional> parts);
  static Functional min_of(std::vector<Functional> parts);
  static Functional max_of_rows(const std::vector<Point>& rows);
  static Functional min_of_rows(const std::vector<Point>& rows);
  static Functional choquet(Capacity capacity);
  /// Keys need not be normalized; they are normalized and their values
  /// rescaled to the unit representative.
  static Functional ray_table(std::size_t n, const std::vector<std::pair<Point, ExtReal>>& values,
                              ExtReal origin = ExtReal(0), const std::vector<std::pair<Point, ExtReal>>& overrides = {});
  static Functional minus_inf_extension(Functional inner, ConeSpec domain);
  static Functional scaled(Rational factor, Functional inner);

  ExtReal operator()(const Point& x) const;
  std::size_t dimension() const { return dimension_; }
  const Form& form() const { return *form_; }
  std::string kind_name() const;

 private:
  Functional(std::size_t n, Form form);
  std::size_t dimension_ = 0;
  std::shared_ptr<const Form> form_;
};

inline ExtReal eval(const Functional& f, const Point& x) { return f(x); }

struct FunctionalReport {
  std::string property;
  bool pass = true;
  std::vector<Point> witness;     // first violation
  std::optional<Rational> scale;  // homogeneity: offending λ
  Rational residual = 0;          // largest finite violation size
  bool infinite_residual = false; // a finite value met -inf where equality was required
  std::size_t checked = 0;
  std::size_t failures = 0;
};

FunctionalReport check_pos_homogeneous(const Functional& f, const Carrier& carrier);

enum class AdditivityMode { Sub, Super, Exact };
std::string to_string(AdditivityMode mode);

/// Pairs that are not related are skipped.
FunctionalReport check_relation_additivity(const Functional& f, const RelationSpec& relation,
                                           std::span<const std::pair<Point, Point>> pairs, AdditivityMode mode);

/// All ordered pairs of carrier points (and the origin, when included).
FunctionalReport check_monotone(const Functional& f, const Carrier& carrier, const OrderSpec& order = {});

/// Every point of the carrier: s·r for each ray and scale, then the origin.
std::vector<Point> carrier_points(const Carrier& carrier);

/// Related pairs among the given points, in index order.
std::vector<std::pair<Point, Point>> related_pairs(const RelationSpec& relation, std::span<const Point> points);

/// ℓ on Y, -inf elsewhere.
Functional extend_minus_infinity(const Functional& ell, const ConeSpec& domain);

/// ℓ on the ray of x with ℓ(λx) = λ H(x). Throws if H(x) = -inf.
Functional ray_functional(const Point& x, const Functional& h);

}  // namespace sandwich
