#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sandwich {

using Rational = mpq_class;

/// Thrown when textual input cannot be turned into a value.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts "p/q", integers and finite decimals such as "-0.125" or "3e-2".
/// Decimals are converted exactly; the result is canonicalized.
Rational parse_rational(std::string_view text);

/// Exact conversion of a finite double.
Rational rational_from_double(double value);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

inline Rational rabs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace sandwich
