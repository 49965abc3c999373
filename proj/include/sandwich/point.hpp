#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "sandwich/rational.hpp"

namespace sandwich {

/// A point of Q^n. Ordering (operator<) is lexicographic; it is only used
/// for canonical sorting, never as the mathematical order.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dimension) : coords_(dimension, Rational(0)) {}
  explicit Point(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Rational> coords) : coords_(coords) {}

  std::size_t size() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  Rational l1_norm() const;

  friend Point operator+(const Point& a, const Point& b);
  friend Point operator-(const Point& a, const Point& b);
  friend Point operator*(const Rational& s, const Point& a);
  friend bool operator==(const Point& a, const Point& b);
  friend bool operator<(const Point& a, const Point& b);

 private:
  std::vector<Rational> coords_;
};

/// x / |x|_1. Throws on the zero vector.
Point normalize_l1(const Point& x);

/// Componentwise order x ⪯ y.
bool componentwise_leq(const Point& x, const Point& y);

Rational dot(const Point& a, const Point& b);

std::string to_string(const Point& p);

/// The order on the ambient space. Only the componentwise order is needed;
/// the struct exists so files can name it.
struct OrderSpec {
  enum class Kind { Componentwise };
  Kind kind = Kind::Componentwise;
  bool leq(const Point& x, const Point& y) const { return componentwise_leq(x, y); }
};

inline bool leq_order(const Point& x, const Point& y, const OrderSpec& ord = {}) { return ord.leq(x, y); }

}  // namespace sandwich
