#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gowerslab {

/// Pairwise (cascade) sum; the grouping depends only on the length.
template <typename T>
T pairwise_sum(std::span<const T> x) {
  constexpr std::size_t kLeaf = 16;
  if (x.size() <= kLeaf) {
    T s{};
    for (const auto& v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& x) {
  return pairwise_sum(std::span<const T>(x));
}

/// Worker count used when a call does not pass one. Defaults to the hardware
/// concurrency; 0 restores that default.
void set_default_jobs(unsigned jobs);
unsigned default_jobs();

/// Runs body(i) for i in [0, n). Items are claimed dynamically by up to `jobs`
/// threads; callers write results into per-item slots so the combined value
/// does not depend on the thread count. The first exception is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace gowerslab
