#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace gowerslab {

/// Seeded generator used for every corpus in the project.
///
/// Algorithm "mt19937_64/v1": the engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard. Derived draws never go through the
/// standard distributions (their algorithms are implementation-defined):
///   uniform01()      = (next() >> 11) * 2^-53
///   uniform_int(a,b) = next() % span, rejecting the biased tail
/// so a seed reproduces the same corpus on every conforming toolchain.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % span);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream for item `index` of a corpus seeded by `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace gowerslab
