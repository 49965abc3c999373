#pragma once

#include <optional>
#include <string>

#include "sandwich/rational.hpp"

namespace sandwich {

/// A rational or negative infinity. There is no +inf: functionals here
/// take values in R ∪ {-inf}. Convention: 0 · (-inf) = 0.
class ExtReal {
 public:
  ExtReal() : value_(Rational(0)) {}
  ExtReal(const Rational& v) : value_(v) {}  // NOLINT(implicit)
  ExtReal(long v) : value_(Rational(v)) {}   // NOLINT(implicit)
  ExtReal(int v) : value_(Rational(v)) {}    // NOLINT(implicit)

  static ExtReal neg_inf() {
    ExtReal e;
    e.value_.reset();
    return e;
  }

  bool is_neg_inf() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }

  /// Throws std::logic_error on -inf.
  const Rational& value() const;

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const Rational& b);
  friend bool operator==(const ExtReal& a, const ExtReal& b);
  friend bool operator<(const ExtReal& a, const ExtReal& b);
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

 private:
  std::optional<Rational> value_;
};

/// lambda · a with lambda ≥ 0; 0 · (-inf) = 0.
ExtReal scale(const Rational& lambda, const ExtReal& a);

inline ExtReal ext_add(const ExtReal& a, const ExtReal& b) { return a + b; }
inline ExtReal ext_scale(const Rational& lambda, const ExtReal& a) { return scale(lambda, a); }

inline ExtReal ext_max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
inline ExtReal ext_min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

std::string to_string(const ExtReal& e);

/// Accepts everything parse_rational does plus "-inf".
ExtReal parse_ext_real(std::string_view text);

}  // namespace sandwich
