#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// shares code with the library paths it checks.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

/// Rank over Q by textbook Gaussian elimination on rationals.
inline std::size_t rational_rank(std::vector<std::vector<mpq_class>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline std::vector<std::vector<mpq_class>> to_rational(const std::vector<std::vector<std::int64_t>>& m) {
  std::vector<std::vector<mpq_class>> out;
  for (const auto& row : m) {
    std::vector<mpq_class> r;
    for (auto x : row) r.emplace_back(static_cast<long>(x));
    out.push_back(std::move(r));
  }
  return out;
}

/// psi_target is outside the span of the rows listed in `cls`.
inline bool omits(const std::vector<std::vector<std::int64_t>>& forms, const std::vector<std::size_t>& cls,
                  std::size_t target) {
  std::vector<std::vector<std::int64_t>> rows;
  for (auto j : cls) rows.push_back(forms[j]);
  const std::size_t base = rational_rank(to_rational(rows));
  rows.push_back(forms[target]);
  return rational_rank(to_rational(rows)) > base;
}

/// Cauchy-Schwarz complexity by trying every labelling of the other forms
/// with at most m labels (m^m labellings, so keep t small).
inline int brute_cs_complexity(const std::vector<std::vector<std::int64_t>>& forms) {
  const std::size_t t = forms.size();
  int worst = 0;
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < t; ++j)
      if (j != i) others.push_back(j);
    const std::size_t m = others.size();
    std::size_t total = 1;
    for (std::size_t k = 0; k < m; ++k) total *= m;
    int best = 1 << 20;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::vector<std::size_t>> classes(m);
      std::size_t rest = code;
      for (std::size_t k = 0; k < m; ++k) {
        classes[rest % m].push_back(others[k]);
        rest /= m;
      }
      int used = 0;
      bool ok = true;
      for (const auto& cls : classes) {
        if (cls.empty()) continue;
        ++used;
        if (!omits(forms, cls, i)) {
          ok = false;
          break;
        }
      }
      if (ok) best = std::min(best, used);
    }
    worst = std::max(worst, best - 1);
  }
  return worst;
}

using Complex = std::complex<double>;

/// Literal Gowers sum over Z: every x and h in Z^{s+1} with all corners in
/// [lo, lo + values.size()), each of the 2^{s+1} corners multiplied out.
inline Complex literal_gowers_sum(std::int64_t lo, const std::vector<Complex>& values, int s,
                                  std::uint64_t* config_count = nullptr) {
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  const int dims = s + 1;
  auto f = [&](std::int64_t x) -> Complex { return (x < lo || x >= lo + n) ? Complex{} : values[x - lo]; };
  Complex total = 0;
  std::uint64_t count = 0;
  std::vector<std::int64_t> h(static_cast<std::size_t>(dims));
  for (std::int64_t x = lo; x < lo + n; ++x) {
    std::int64_t combos = 1;
    for (int d = 0; d < dims; ++d) combos *= 2 * n - 1;
    for (std::int64_t c = 0; c < combos; ++c) {
      std::int64_t rest = c;
      for (int d = 0; d < dims; ++d) {
        h[static_cast<std::size_t>(d)] = rest % (2 * n - 1) - (n - 1);
        rest /= 2 * n - 1;
      }
      Complex prod = 1;
      bool inside = true;
      for (int w = 0; w < (1 << dims); ++w) {
        std::int64_t pos = x;
        int weight = 0;
        for (int d = 0; d < dims; ++d)
          if (w & (1 << d)) {
            pos += h[static_cast<std::size_t>(d)];
            ++weight;
          }
        const Complex v = f(pos);
        if (v == Complex{}) inside = false;
        prod *= (weight % 2) ? std::conj(v) : v;
      }
      if (inside) ++count;
      total += prod;
    }
  }
  if (config_count) *config_count = count;
  return total;
}

/// Brute-force cyclic Gowers norm: E over x, h in Z_N^{s+1}.
inline double brute_cyclic_norm(const std::vector<Complex>& f, int s) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  const int dims = s + 1;
  std::int64_t combos = 1;
  for (int d = 0; d < dims; ++d) combos *= n;
  Complex total = 0;
  std::vector<std::int64_t> h(static_cast<std::size_t>(dims));
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t c = 0; c < combos; ++c) {
      std::int64_t rest = c;
      for (int d = 0; d < dims; ++d) {
        h[static_cast<std::size_t>(d)] = rest % n;
        rest /= n;
      }
      Complex prod = 1;
      for (int w = 0; w < (1 << dims); ++w) {
        std::int64_t pos = x;
        int weight = 0;
        for (int d = 0; d < dims; ++d)
          if (w & (1 << d)) {
            pos += h[static_cast<std::size_t>(d)];
            ++weight;
          }
        const Complex v = f[static_cast<std::size_t>(pos % n)];
        prod *= (weight % 2) ? std::conj(v) : v;
      }
      total += prod;
    }
  const double mean = total.real() / static_cast<double>(combos * n);
  return std::pow(std::max(mean, 0.0), 1.0 / static_cast<double>(1 << dims));
}

}  // namespace oracle
