#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sandwich/point.hpp"

namespace sandwich {

/// A set function on the subsets of {0..n-1}, indexed by bitmask.
/// Bit i of a mask stands for coordinate i.
class Capacity {
 public:
  Capacity() = default;

  /// Every mask must be listed; nu(empty) must be 0.
  static Capacity from_table(std::size_t n, const std::map<std::uint64_t, Rational>& table);
  /// nu(A) = sum of weights over A.
  static Capacity additive(const std::vector<Rational>& weights);

  std::size_t size() const { return n_; }
  const Rational& operator()(std::uint64_t mask) const { return table_.at(mask); }
  const std::vector<Rational>& table() const { return table_; }

  bool is_monotone() const;
  bool is_normalized() const { return table_.back() == 1; }

 private:
  std::size_t n_ = 0;
  std::vector<Rational> table_;
};

/// Layer-cake Choquet integral of x with respect to nu:
/// sum_{i<n} (x_(i) - x_(i+1)) nu(A_i) + x_(n) nu(Omega), coordinates
/// sorted decreasingly and A_i holding the i largest. Valid for signed x.
Rational choquet_integral(const Point& x, const Capacity& nu);

}  // namespace sandwich
