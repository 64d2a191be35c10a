#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "doctest.h"
#include "gowerslab/series.hpp"

using namespace gowerslab;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gowerslab_test_" + name);
}

}  // namespace

TEST_CASE("generators") {
  GeneratorSpec one;
  const auto ind = generate(one, {1, 10});
  CHECK(ind == Series::indicator(Interval{1, 10}));

  GeneratorSpec quad;
  quad.kind = GeneratorKind::polynomial_phase;
  quad.coefficients = {0.0, 0.5};
  const auto q = generate(quad, {1, 4});
  CHECK(std::abs(q(1) - Complex(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(q(2) - Complex(1.0, 0.0)) < 1e-15);

  GeneratorSpec pm;
  pm.kind = GeneratorKind::random_pm1;
  pm.seed = 7;
  const auto r1 = generate(pm, {-50, 50});
  const auto r2 = generate(pm, {-50, 50});
  CHECK(r1 == r2);
  for (const auto& z : r1.values()) CHECK((z == Complex(1.0, 0.0) || z == Complex(-1.0, 0.0)));

  CHECK_THROWS_AS(generate(one, Interval{3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(generator_kind_from_string("sawtooth"), std::invalid_argument);
  CHECK(generator_kind_from_string("bracket_phase") == GeneratorKind::bracket_phase);
}

TEST_CASE("every generator is 1-bounded and deterministic") {
  for (auto kind : {GeneratorKind::constant, GeneratorKind::random_unimodular, GeneratorKind::random_pm1,
                    GeneratorKind::polynomial_phase, GeneratorKind::bracket_phase, GeneratorKind::indicator}) {
    GeneratorSpec spec;
    spec.kind = kind;
    spec.seed = 99;
    spec.coefficients = {0.1234, std::sqrt(2.0), 1.0 / 3.0};
    spec.alpha = std::sqrt(3.0);
    spec.beta = std::sqrt(5.0);
    spec.value = Complex(0.6, 0.8);
    spec.set = Progression{-20, 3, 10};
    const auto f = generate(spec, {-300, 300});
    CHECK(f.is_one_bounded());
    for (const auto& z : f.values()) CHECK(std::abs(z) <= 1.0 + kBoundednessSlack);
    CHECK(f == generate(spec, {-300, 300}));
  }
}

TEST_CASE("bracket phase matches the direct formula") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::bracket_phase;
  spec.alpha = 0.3;
  spec.beta = 0.7;
  const auto f = generate(spec, {-10, 10});
  for (std::int64_t n = -10; n <= 10; ++n) {
    const double x = 0.3 * static_cast<double>(n) * std::floor(0.7 * static_cast<double>(n));
    const Complex expect{std::cos(2 * M_PI * x), std::sin(2 * M_PI * x)};
    CHECK(std::abs(f(n) - expect) < 1e-12);
  }
}

TEST_CASE("dilate_embed") {
  const std::int64_t n = 8;
  GeneratorSpec spec;
  spec.kind = GeneratorKind::random_unimodular;
  spec.seed = 3;
  const auto f = generate(spec, {-n, n});

  const auto shift = dilate_embed(f, 1, 1, n);
  for (std::int64_t x = 0; x <= 2 * n; ++x) CHECK(shift(x) == f(x - n));

  const auto ind = Series::indicator(Interval{-n, n});
  const auto even = dilate_embed(ind, 2, 2, n);
  CHECK(even.window() == Interval{0, 4 * n});
  for (std::int64_t x = 0; x <= 4 * n; ++x) CHECK(even(x) == Complex(x % 2 == 0 ? 1.0 : 0.0, 0.0));

  for (std::int64_t ai : {-3, -2, -1, 1, 2, 3}) {
    const auto g = dilate_embed(f, ai, 3, n);
    std::map<std::pair<double, double>, int> lhs, rhs;
    for (std::int64_t m = -n; m <= n; ++m) {
      CHECK(g(ai * m + 3 * n) == f(m));
      ++rhs[{f(m).real(), f(m).imag()}];
    }
    for (std::int64_t x = 0; x <= 6 * n; ++x) {
      if ((x - 3 * n) % ai != 0 || std::abs((x - 3 * n) / ai) > n) {
        CHECK(g(x) == Complex{});
        continue;
      }
      ++lhs[{g(x).real(), g(x).imag()}];
    }
    CHECK(lhs == rhs);
  }

  CHECK_THROWS_AS(dilate_embed(f, 0, 1, n), std::invalid_argument);
  CHECK_THROWS_AS(dilate_embed(f, 3, 2, n), std::invalid_argument);
  CHECK_THROWS_AS(dilate_embed(f, 1, 1, n - 1), std::invalid_argument);
}

TEST_CASE("modulate") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::random_unimodular;
  const auto f = generate(spec, {-5, 5});
  CHECK(modulate(f, 0.0) == f);
  const auto g = modulate(f, 0.5);
  for (std::int64_t n = -5; n <= 5; ++n) CHECK(std::abs(g(n) - (n % 2 == 0 ? f(n) : -f(n))) < 1e-15);
}

TEST_CASE("series files round-trip") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::random_unimodular;
  spec.seed = 12;
  const auto f = generate(spec, {-17, 40});
  for (auto format : {SeriesFormat::csv, SeriesFormat::json}) {
    const auto path = temp_path(format == SeriesFormat::csv ? "rt.csv" : "rt.json");
    write_series(f, path, format);
    CHECK(read_series(path, format, true) == f);
    CHECK(series_format_for(path) == format);
    std::filesystem::remove(path);
  }
}

TEST_CASE("malformed series files are rejected") {
  const auto path = temp_path("bad.csv");
  auto write = [&](const std::string& text) {
    std::ofstream(path) << text;
  };
  write("");
  CHECK_THROWS_AS(read_series(path, SeriesFormat::csv), std::runtime_error);
  write("1,2.0,0\n");
  CHECK_NOTHROW(read_series(path, SeriesFormat::csv));
  CHECK_THROWS_AS(read_series(path, SeriesFormat::csv, true), std::runtime_error);
  write("1,0.5\n");
  CHECK_THROWS_AS(read_series(path, SeriesFormat::csv), std::runtime_error);
  write("1,nan,0\n");
  CHECK_THROWS_AS(read_series(path, SeriesFormat::csv), std::runtime_error);
  write("2,0,0\n1,0,0\n");
  CHECK_THROWS_AS(read_series(path, SeriesFormat::csv), std::runtime_error);
  write("n,re,im\n1,1,0\n3,0,1\n");
  const auto gaps = read_series(path, SeriesFormat::csv);
  CHECK(gaps.window() == Interval{1, 3});
  CHECK(gaps(2) == Complex{});
  write("{\"support_start\": 0, \"values\": [[1, 0], [2]]}");
  CHECK_THROWS_AS(read_series(path, SeriesFormat::json), std::runtime_error);
  std::filesystem::remove(path);
}
