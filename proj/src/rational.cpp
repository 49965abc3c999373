#include "sandwich/rational.hpp"

#include <cctype>
#include <cmath>

namespace sandwich {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational pow10(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational literal");

  bool negative = false;
  std::string_view body = s;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed rational literal '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    result = Rational(mpz_class(std::string(num), 10), d);
  } else {
    long exponent = 0;
    std::string_view mantissa = body;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = body.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6)
        throw ParseError("malformed exponent in '" + std::string(text) + "'");
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      mantissa = body.substr(0, e);
    }
    std::string digits;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      auto whole = mantissa.substr(0, dot);
      auto frac = mantissa.substr(dot + 1);
      if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
          (whole.empty() && frac.empty()))
        throw ParseError("malformed decimal literal '" + std::string(text) + "'");
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      if (!all_digits(mantissa)) throw ParseError("malformed rational literal '" + std::string(text) + "'");
      digits = std::string(mantissa);
    }
    result = Rational(mpz_class(digits, 10)) * pow10(exponent);
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw ParseError("non-finite number cannot be made exact");
  Rational q(value);  // exact: doubles are dyadic rationals
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace sandwich
