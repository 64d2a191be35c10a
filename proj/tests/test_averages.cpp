#include <cmath>
#include <numeric>

#include "doctest.h"
#include "gowerslab/averages.hpp"
#include "gowerslab/fft.hpp"
#include "gowerslab/random.hpp"

using namespace gowerslab;

namespace {

Series random_series(std::uint64_t seed, Interval w, GeneratorKind kind = GeneratorKind::random_unimodular) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  return generate(spec, w);
}

// E over (x, y) in the K of (x, x+y, x+2y) by two plain loops.
Complex ap3_average(const std::vector<Series>& f, std::int64_t n, std::int64_t c) {
  Complex total = 0;
  std::int64_t count = 0;
  for (std::int64_t x = -n; x <= n; ++x)
    for (std::int64_t y = -n; y <= n; ++y) {
      if (std::abs(x + y) > n || std::abs(x + 2 * y) > n) continue;
      total += f[0](x + c) * f[1](x + y + c) * f[2](x + 2 * y + c);
      ++count;
    }
  return total / static_cast<double>(count);
}

// E_{x,d} f1(x) f2(x+d) f3(x+2d) on Z_N via sum_xi F1(xi) F2(-2 xi) F3(xi) / N^3.
Complex fourier_ap3(const std::vector<std::vector<Complex>>& f) {
  const std::size_t n = f[0].size();
  const auto a = dft(f[0]), b = dft(f[1]), c = dft(f[2]);
  Complex total = 0;
  for (std::size_t xi = 0; xi < n; ++xi) total += a[xi] * b[(2 * n - 2 * xi % n) % n] * c[xi];
  return total / std::pow(static_cast<double>(n), 3);
}

}  // namespace

TEST_CASE("multilinear averages") {
  const auto ap3 = arithmetic_progression_system(3);
  const std::int64_t n = 32;
  const auto k = preimage_region(ap3, n);
  std::vector<Series> ones(3, Series::indicator(Interval{-n, n}));
  CHECK(std::abs(multilinear_average(ap3, ones, k, 0).value - Complex(1, 0)) < 1e-15);
  auto with_zero = ones;
  with_zero[1] = Series(-n, std::vector<Complex>(static_cast<std::size_t>(2 * n + 1)));
  CHECK(multilinear_average(ap3, with_zero, k, 0).value == Complex{});

  std::vector<Series> f;
  for (std::uint64_t i = 0; i < 3; ++i) f.push_back(random_series(100 + i, {-n + 3, n + 3}, GeneratorKind::random_pm1));
  const auto avg = multilinear_average(ap3, f, k, 3);
  CHECK(std::abs(avg.value - ap3_average(f, n, 3)) < 1e-12);
  CHECK(multilinear_average(ap3, f, k, 3, 1).value == multilinear_average(ap3, f, k, 3, 4).value);

  CHECK_THROWS_AS(multilinear_average(ap3, {f[0]}, k, 0), std::invalid_argument);
  const LatticeRegion empty(std::vector<Interval>{{1, 0}, {0, 1}});
  CHECK_THROWS_AS(multilinear_average(ap3, f, empty, 0), std::invalid_argument);
}

TEST_CASE("reduction pipeline identity") {
  const std::int64_t n = 16;
  for (const auto& rows : std::vector<std::vector<std::vector<std::int64_t>>>{
           {{1, 0}, {1, 1}, {1, 2}, {1, 3}}, {{1}, {-1}}, {{1, 0}, {0, 1}, {1, -1}}, {{2, 1}, {1, -1}, {1, 3}}}) {
    const auto sys = LinearSystem::from_rows(rows);
    std::vector<Series> f;
    for (std::size_t i = 0; i < sys.size(); ++i) f.push_back(random_series(7 * i + 1, {-n, n}));
    const auto r = reduction_pipeline(sys, f, n);
    REQUIRE(r.trace.has_value());
    CHECK(r.trace->identity_holds);
    CHECK(r.trace->identity_error <= 1e-12);
    CHECK(r.trace->bound_holds);
    CHECK(r.trace->boundary_term == 0.0);
    CHECK(is_translation_invariant(r.trace->flag.rescaled));
  }
  const auto anti = reduction_pipeline(LinearSystem::from_rows({{1}, {-1}}),
                                       {random_series(1, {-n, n}), random_series(2, {-n, n})}, n);
  CHECK(anti.trace->flag.a == std::vector<std::int64_t>{-1, 1});
  const auto ap = reduction_pipeline(arithmetic_progression_system(3),
                                     {random_series(3, {-n, n}), random_series(4, {-n, n}), random_series(5, {-n, n})}, n);
  CHECK(ap.trace->flag.a == std::vector<std::int64_t>{1, 1, 1});
  CHECK(ap.trace->original == ap.trace->rescaled);
}

TEST_CASE("small-N chain") {
  const std::int64_t n = 32;
  for (int k : {3, 4}) {
    const auto sys = arithmetic_progression_system(k);
    const std::int64_t c = (n + 1) / 2;
    const auto region = preimage_region(sys, std::vector<Interval>(2, Interval{-n, n}), Interval{1, n}, c);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      std::vector<Series> f;
      for (int i = 0; i < k; ++i) f.push_back(random_series(seed * 10 + static_cast<std::uint64_t>(i), {1, n}));
      const auto chain = small_n_chain(sys, f, region, c, n, k - 2);
      for (const auto& l : chain.links) {
        INFO(l.name, " ", l.lhs, " ", l.rhs);
        CHECK(l.holds);
      }
      CHECK(chain.norms[chain.j] == *std::min_element(chain.norms.begin(), chain.norms.end()));
    }
    std::vector<Series> zero(static_cast<std::size_t>(k), Series(1, std::vector<Complex>(static_cast<std::size_t>(n))));
    const auto chain = small_n_chain(sys, zero, region, c, n, k - 2);
    for (const auto& l : chain.links) {
      CHECK(l.lhs == 0.0);
      CHECK(l.holds);
    }
  }
}

TEST_CASE("cyclic progression averages") {
  const std::size_t n = 31;
  std::vector<std::vector<Complex>> chars(3, std::vector<Complex>(n));
  // xi = (1, -2, 1) makes x - 2(x+d) + (x+2d) vanish
  const int xi[3] = {1, -2, 1};
  for (int i = 0; i < 3; ++i)
    for (std::size_t x = 0; x < n; ++x)
      chars[static_cast<std::size_t>(i)][x] = e(static_cast<long double>(xi[i] * static_cast<int>(x)) / 31.0L);
  const auto extremal = cyclic_ap_average(chars);
  CHECK(std::abs(extremal.average) == doctest::Approx(1.0));
  CHECK(extremal.min_norm == doctest::Approx(1.0));
  CHECK(extremal.holds);

  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<Complex>> f;
    for (int i = 0; i < 3; ++i) f.push_back(random_series(rng.next(), {0, 30}).values());
    const auto r = cyclic_ap_average(f);
    CHECK(std::abs(r.average - fourier_ap3(f)) < 1e-12);
    CHECK(r.holds);
  }
  std::vector<std::vector<Complex>> four;
  for (int i = 0; i < 4; ++i) four.push_back(random_series(rng.next(), {0, 30}).values());
  CHECK(cyclic_ap_average(four).holds);
  CHECK_THROWS_AS(cyclic_ap_average(std::vector<std::vector<Complex>>(3, std::vector<Complex>(30, 1.0))),
                  std::invalid_argument);
  CHECK_THROWS_AS(cyclic_ap_average(std::vector<std::vector<Complex>>(2, std::vector<Complex>(31, 1.0))),
                  std::invalid_argument);
}

TEST_CASE("interval von Neumann measurements") {
  const std::int64_t n = 64;
  const auto ap3 = arithmetic_progression_system(3);
  std::vector<Series> random, phase;
  for (std::uint64_t i = 0; i < 3; ++i) random.push_back(random_series(50 + i, {-n, n}));
  GeneratorSpec lin;
  lin.kind = GeneratorKind::polynomial_phase;
  // e(a x) e(-2a(x+y)) e(a(x+2y)) = 1
  lin.coefficients = {0.1};
  GeneratorSpec lin2 = lin;
  lin2.coefficients = {-0.2};
  phase = {generate(lin, {-n, n}), generate(lin2, {-n, n}), generate(lin, {-n, n})};
  const auto r = interval_vn_check(ap3, random, n);
  CHECK(r.s == 1);
  CHECK(r.abs_average < 0.2);
  CHECK(r.min_norm < 0.5);
  const auto p = interval_vn_check(ap3, phase, n);
  CHECK(p.abs_average == doctest::Approx(1.0));
  CHECK(p.min_norm > 0.7);
}
