#include "sandwich/point.hpp"

#include <algorithm>
#include <stdexcept>

namespace sandwich {

namespace {
void require_same_size(const Point& a, const Point& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
}
}  // namespace

bool Point::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

Rational Point::l1_norm() const {
  Rational sum = 0;
  for (const auto& c : coords_) sum += rabs(c);
  return sum;
}

Point operator+(const Point& a, const Point& b) {
  require_same_size(a, b);
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Point operator-(const Point& a, const Point& b) {
  require_same_size(a, b);
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Point operator*(const Rational& s, const Point& a) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

bool operator<(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.coords_.begin(), a.coords_.end(), b.coords_.begin(), b.coords_.end());
}

Point normalize_l1(const Point& x) {
  Rational n = x.l1_norm();
  if (n == 0) throw std::invalid_argument("cannot normalize the zero vector");
  return Rational(1 / n) * x;
}

bool componentwise_leq(const Point& x, const Point& y) {
  require_same_size(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i]) return false;
  return true;
}

Rational dot(const Point& a, const Point& b) {
  require_same_size(a, b);
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string to_string(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += to_string(p[i]);
  }
  return out + ")";
}

}  // namespace sandwich
