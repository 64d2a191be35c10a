#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gowerslab {

using Point = std::vector<std::int64_t>;

/// Closed integer interval [lo, hi]. Empty when hi < lo.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  bool empty() const { return hi < lo; }
  std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(std::int64_t n) const { return lo <= n && n <= hi; }
  std::string to_string() const { return std::to_string(lo) + ".." + std::to_string(hi); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// {start + k*step : 0 <= k < length}. step may be negative; step == 0 only for length <= 1.
struct Progression {
  std::int64_t start = 0;
  std::int64_t step = 1;
  std::int64_t length = 0;

  std::int64_t at(std::int64_t k) const { return start + k * step; }
  std::int64_t min() const { return step >= 0 ? start : at(length - 1); }
  std::int64_t max() const { return step >= 0 ? at(length - 1) : start; }
  bool contains(std::int64_t n) const {
    if (length <= 0) return false;
    if (step == 0) return n == start;
    const std::int64_t d = n - start;
    if (d % step != 0) return false;
    const std::int64_t k = d / step;
    return 0 <= k && k < length;
  }
  std::vector<std::int64_t> elements() const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(length > 0 ? length : 0));
    for (std::int64_t k = 0; k < length; ++k) out.push_back(at(k));
    return out;
  }
  std::string to_string() const {
    return std::to_string(start) + "," + std::to_string(step) + "," + std::to_string(length);
  }
  friend bool operator==(const Progression&, const Progression&) = default;
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 multiplication overflow");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 addition overflow");
  return r;
}

}  // namespace gowerslab
