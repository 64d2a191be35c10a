#include "doctest.h"
#include "gowerslab/exact.hpp"
#include "gowerslab/random.hpp"
#include "oracles.hpp"

using namespace gowerslab;

namespace {

IntMatrix matrix(const std::vector<std::vector<std::int64_t>>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = static_cast<long>(rows[i][j]);
  return m;
}

}  // namespace

TEST_CASE("rank of small matrices") {
  CHECK(rank(matrix({{1, 2}, {2, 4}})) == 1);
  CHECK(rank(matrix({{1, 0, 1}, {0, 1, 1}, {1, 1, 2}})) == 2);
  CHECK(rank(matrix({{0, 0}, {0, 0}})) == 0);
  CHECK(rank(matrix({{0, 3}, {5, 0}})) == 2);
}

TEST_CASE("Bareiss rank agrees with rational elimination on random matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rows = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto cols = static_cast<std::size_t>(rng.uniform_int(1, 6));
    std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(cols));
    // Build low-rank matrices often so the degenerate paths get exercised.
    const auto target = rng.uniform_int(1, static_cast<std::int64_t>(std::min(rows, cols)));
    std::vector<std::vector<std::int64_t>> gens(static_cast<std::size_t>(target), std::vector<std::int64_t>(cols));
    for (auto& g : gens)
      for (auto& x : g) x = rng.uniform_int(-4, 4);
    for (auto& r : m) {
      for (const auto& g : gens) {
        const auto c = rng.uniform_int(-3, 3);
        for (std::size_t j = 0; j < cols; ++j) r[j] += c * g[j];
      }
    }
    CHECK(rank(matrix(m)) == oracle::rational_rank(oracle::to_rational(m)));
  }
}

TEST_CASE("row space basis spans the original rows") {
  auto m = matrix({{2, 4, 6}, {1, 1, 1}, {3, 5, 7}});
  auto basis = row_space_basis(m);
  CHECK(basis.size() == 2);
  for (std::size_t i = 0; i < m.rows(); ++i) CHECK(in_span(basis, m.row(i)));
  CHECK_FALSE(in_span(basis, IntVector{1, 0, 0}));
}

TEST_CASE("kernel basis vectors are annihilated and primitive") {
  auto m = matrix({{1, 1, -1, 0}, {0, 2, 4, 2}});
  auto ker = kernel_basis(m);
  CHECK(ker.size() == 2);
  for (const auto& v : ker) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      BigInt dot = 0;
      for (std::size_t j = 0; j < m.cols(); ++j) dot += m(i, j) * v[j];
      CHECK(dot == 0);
    }
    CHECK(make_primitive(v) == v);
    for (const auto& x : v)
      if (x != 0) {
        CHECK(x > 0);
        break;
      }
  }
}

TEST_CASE("in_span of the empty family is the zero vector only") {
  CHECK(in_span({}, IntVector{0, 0}));
  CHECK_FALSE(in_span({}, IntVector{0, 1}));
}

TEST_CASE("make_primitive divides out the content") {
  CHECK(make_primitive(IntVector{6, -9, 0}) == IntVector{2, -3, 0});
  CHECK(make_primitive(IntVector{0, 0}) == IntVector{0, 0});
}
