#include <cmath>
#include <set>

#include "doctest.h"
#include "gowerslab/random.hpp"
#include "gowerslab/regions.hpp"

using namespace gowerslab;

namespace {

// Count by scanning the whole box and testing each constraint directly.
std::uint64_t brute_count(const LatticeRegion& r) {
  std::uint64_t c = 0;
  const auto& box = r.box();
  const std::size_t d = box.size();
  Point x(d);
  for (std::size_t j = 0; j < d; ++j) x[j] = box[j].lo;
  while (true) {
    bool ok = true;
    for (const auto& h : r.halfspaces()) {
      std::int64_t v = 0;
      for (std::size_t j = 0; j < d; ++j) v += h.g[j] * x[j];
      if (v > h.beta) ok = false;
    }
    if (r.coset())
      for (std::size_t j = 0; j < d; ++j)
        if (((x[j] - r.coset()->r[j]) % r.coset()->q + r.coset()->q) % r.coset()->q != 0) ok = false;
    if (ok) ++c;
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (++x[j] <= box[j].hi) break;
      x[j] = box[j].lo;
      if (j == 0) return c;
    }
  }
}

}  // namespace

TEST_CASE("preimage regions") {
  const auto ap3 = arithmetic_progression_system(3);
  const auto k = preimage_region(ap3, 5);
  std::uint64_t expect = 0;
  for (int x = -5; x <= 5; ++x)
    for (int y = -5; y <= 5; ++y)
      if (std::abs(x + y) <= 5 && std::abs(x + 2 * y) <= 5) ++expect;
  CHECK(k.count() == expect);
  CHECK(k.face_count() == 4 + 6);

  const auto footnote = LinearSystem::from_rows({{-1, 0}, {-1, -1}, {-1, -2}});
  const std::int64_t n = 10;
  const auto empty = preimage_region(footnote, {Interval{1, n}, Interval{1, n}}, Interval{1, n});
  CHECK(empty.count() == 0);
  CHECK(empty.enumerate().empty());

  // |K| / (2N+1)^D settles as N grows
  std::vector<double> ratios;
  for (std::int64_t m : {16, 32, 64}) {
    const auto r = preimage_region(arithmetic_progression_system(4), m);
    ratios.push_back(static_cast<double>(r.count()) / static_cast<double>(r.box_size()));
  }
  CHECK(ratios[0] > 0.2);
  CHECK(std::abs(ratios[2] - ratios[1]) < std::abs(ratios[1] - ratios[0]) + 1e-3);
}

TEST_CASE("enumeration order and constraints") {
  const auto line = LatticeRegion::cube(1, 2);
  const auto pts = line.enumerate();
  REQUIRE(pts.size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(pts[static_cast<std::size_t>(k)] == Point{k - 2});

  const auto contradictory = LatticeRegion::cube(2, 4).with_halfspace({{1, 0}, -1}).with_halfspace({{-1, 0}, -1});
  CHECK(contradictory.count() == 0);

  Rng rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 3));
    std::vector<Interval> box;
    for (std::size_t j = 0; j < d; ++j) {
      const auto lo = rng.uniform_int(-6, 2);
      box.push_back({lo, lo + rng.uniform_int(0, 8)});
    }
    std::vector<Halfspace> hs;
    for (int k = 0; k < rng.uniform_int(0, 3); ++k) {
      Halfspace h;
      for (std::size_t j = 0; j < d; ++j) h.g.push_back(rng.uniform_int(-3, 3));
      h.beta = rng.uniform_int(-5, 10);
      hs.push_back(h);
    }
    std::optional<Coset> coset;
    if (rng.coin()) {
      Coset c{rng.uniform_int(1, 3), {}};
      for (std::size_t j = 0; j < d; ++j) c.r.push_back(rng.uniform_int(-3, 3));
      coset = c;
    }
    const LatticeRegion r(box, hs, coset);
    const auto all = r.enumerate();
    CHECK(all.size() == brute_count(r));
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(r.contains(all[i]));
      if (i > 0) CHECK(all[i - 1] < all[i]);
    }
  }
}

TEST_CASE("region size agrees with a Monte Carlo estimate") {
  const auto k = preimage_region(LinearSystem::from_rows({{1, 1}, {2, -1}, {1, 3}}), 40);
  const double exact = static_cast<double>(k.count());
  const double box = static_cast<double>(k.box_size());
  Rng rng(404);
  const int samples = 200000;
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const Point x{rng.uniform_int(-40, 40), rng.uniform_int(-40, 40)};
    if (k.contains(x)) ++hits;
  }
  const double p = exact / box;
  const double sigma = std::sqrt(p * (1 - p) / samples);
  CHECK(std::abs(static_cast<double>(hits) / samples - p) <= 3 * sigma);
}

TEST_CASE("cube packing is an exact partition") {
  // 17 = 4 * 4 + 1: closed hulls [-8,-4], ..., [4,8] tile the box and the
  // points with a coordinate equal to 8 are left over
  const auto full = LatticeRegion::cube(2, 8);
  const auto part = pack_cubes(full, 1, 0.5, 8);
  CHECK(part.side_count == 4);
  CHECK(part.cells.size() == 16);
  CHECK(part.boundary.size() == 33);
  for (const auto& x : part.boundary) CHECK((x[0] == 8 || x[1] == 8));

  for (std::int64_t q : {1, 2, 3})
    for (double eps : {0.25, 0.125}) {
      const auto k = preimage_region(arithmetic_progression_system(3), 32);
      const auto p = pack_cubes(k, q, eps, 32);
      const auto check = verify_partition(k, p);
      CHECK(check.exact());
      CHECK(check.region_points == k.count());
      CHECK(p.cell_points() + p.boundary.size() == check.region_points);
      for (const auto& cell : p.cells)
        for (const auto& x : cell.points()) CHECK(k.contains(x));
    }
  CHECK_THROWS_AS(pack_cubes(full, 1, 0.1, 8), std::invalid_argument);
  CHECK_THROWS_AS(pack_cubes(full, 0, 0.5, 8), std::invalid_argument);
}

TEST_CASE("subprogressions of cells") {
  const DilatedCube cell{{0, 0}, 1, 4};
  const auto p = extract_subprogression(cell, LinearForm({1, 2}), 0);
  CHECK(p.elements() == std::vector<std::int64_t>{0, 1, 2, 3});

  const auto k = preimage_region(arithmetic_progression_system(3), 24);
  const auto part = pack_cubes(k, 3, 0.125, 24);
  REQUIRE(!part.cells.empty());
  const auto sys = arithmetic_progression_system(4);
  for (const auto& c : part.cells)
    for (const auto& form : sys.forms()) {
      const auto sub = extract_subprogression(c, form, 5);
      CHECK(sub.length == part.side_count);
      std::set<std::int64_t> image;
      for (const auto& x : c.points()) image.insert(form(x) + 5);
      for (auto n : sub.elements()) {
        CHECK(image.count(n) == 1);
        CHECK(floor_mod(n - sub.start, 3) == 0);
      }
    }
}

TEST_CASE("incidence counts") {
  const auto sys = LinearSystem::from_rows({{1, 0}, {1, 1}, {2, -1}});
  const auto k = preimage_region(sys, 32);
  for (std::int64_t q : {1, 2}) {
    const auto part = pack_cubes(k, q, 0.25, 32);
    for (const auto& form : sys.forms()) {
      std::uint64_t best = 0;
      for (std::int64_t n = -110; n <= 110; ++n) {
        std::uint64_t brute = 0;
        for (const auto& cell : part.cells) {
          bool hit = false;
          for (const auto& x : cell.points()) hit = hit || form(x) + 3 == n;
          brute += hit ? 1 : 0;
        }
        CHECK(incidence_count(part, form, 3, n) == brute);
        best = std::max(best, brute);
      }
      CHECK(max_incidence(part, form, 3) == best);
    }
  }
  CHECK(incidence_count(pack_cubes(k, 1, 0.25, 32), LinearForm({1, 0}), 0, 1000) == 0);

  const auto line = preimage_region(LinearSystem::from_rows({{3}}), 64);
  const auto part1 = pack_cubes(line, 1, 0.125, 64);
  for (std::int64_t n = -200; n <= 200; ++n) CHECK(incidence_count(part1, LinearForm({3}), 0, n) <= 1);
}
