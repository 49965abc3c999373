#include "sandwich/capacity.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sandwich {

namespace {
constexpr std::size_t kMaxCells = 20;
}

Capacity Capacity::from_table(std::size_t n, const std::map<std::uint64_t, Rational>& table) {
  if (n == 0 || n > kMaxCells) throw std::invalid_argument("capacity size must be in 1.." + std::to_string(kMaxCells));
  const std::uint64_t count = std::uint64_t{1} << n;
  Capacity c;
  c.n_ = n;
  c.table_.assign(count, Rational(0));
  std::vector<char> seen(count, 0);
  for (const auto& [mask, value] : table) {
    if (mask >= count) throw std::invalid_argument("capacity mask " + std::to_string(mask) + " out of range");
    c.table_[mask] = value;
    seen[mask] = 1;
  }
  for (std::uint64_t m = 1; m < count; ++m)
    if (!seen[m]) throw std::invalid_argument("capacity table is missing mask " + std::to_string(m));
  if (c.table_[0] != 0) throw std::invalid_argument("capacity of the empty set must be 0");
  return c;
}

Capacity Capacity::additive(const std::vector<Rational>& weights) {
  const std::size_t n = weights.size();
  if (n == 0 || n > kMaxCells) throw std::invalid_argument("capacity size must be in 1.." + std::to_string(kMaxCells));
  Capacity c;
  c.n_ = n;
  c.table_.assign(std::uint64_t{1} << n, Rational(0));
  for (std::uint64_t m = 1; m < c.table_.size(); ++m) {
    // lowest set bit plus the rest
    std::size_t bit = static_cast<std::size_t>(__builtin_ctzll(m));
    c.table_[m] = c.table_[m & (m - 1)] + weights[bit];
  }
  return c;
}

bool Capacity::is_monotone() const {
  for (std::uint64_t m = 0; m < table_.size(); ++m)
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t bigger = m | (std::uint64_t{1} << i);
      if (table_[m] > table_[bigger]) return false;
    }
  return true;
}

Rational choquet_integral(const Point& x, const Capacity& nu) {
  const std::size_t n = x.size();
  if (n != nu.size())
    throw std::invalid_argument("Choquet integral: point has dimension " + std::to_string(n) + ", capacity has " +
                                std::to_string(nu.size()) + " cells");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Decreasing by value; ties by index keep the result deterministic (the
  // integral itself does not depend on the tie order).
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  Rational sum = 0;
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mask |= std::uint64_t{1} << order[i];
    sum += (x[order[i]] - x[order[i + 1]]) * nu(mask);
  }
  mask |= std::uint64_t{1} << order[n - 1];
  sum += x[order[n - 1]] * nu(mask);
  return sum;
}

}  // namespace sandwich
