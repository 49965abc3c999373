#include "sandwich/ext_real.hpp"

#include <stdexcept>

namespace sandwich {

const Rational& ExtReal::value() const {
  if (!value_) throw std::logic_error("value() called on -inf");
  return *value_;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  return ExtReal(Rational(*a.value_ + *b.value_));
}

ExtReal operator-(const ExtReal& a, const Rational& b) {
  if (a.is_neg_inf()) return a;
  return ExtReal(Rational(*a.value_ - b));
}

bool operator==(const ExtReal& a, const ExtReal& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return a.is_neg_inf() == b.is_neg_inf();
  return *a.value_ == *b.value_;
}

bool operator<(const ExtReal& a, const ExtReal& b) {
  if (b.is_neg_inf()) return false;
  if (a.is_neg_inf()) return true;
  return *a.value_ < *b.value_;
}

ExtReal scale(const Rational& lambda, const ExtReal& a) {
  if (lambda < 0) throw std::invalid_argument("scale: negative factor");
  if (lambda == 0) return ExtReal(0);
  if (a.is_neg_inf()) return a;
  return ExtReal(Rational(lambda * a.value()));
}

std::string to_string(const ExtReal& e) { return e.is_neg_inf() ? "-inf" : to_string(e.value()); }

ExtReal parse_ext_real(std::string_view text) {
  if (text == "-inf" || text == "-Infinity") return ExtReal::neg_inf();
  return ExtReal(parse_rational(text));
}

}  // namespace sandwich
