#include "gowerslab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace gowerslab {

bool Halfspace::satisfied_by(std::span<const std::int64_t> x) const {
  __int128 v = 0;
  for (std::size_t j = 0; j < g.size(); ++j) v += static_cast<__int128>(g[j]) * x[j];
  return v <= beta;
}

LatticeRegion::LatticeRegion(std::vector<Interval> box, std::vector<Halfspace> halfspaces, std::optional<Coset> coset)
    : box_(std::move(box)), halfspaces_(std::move(halfspaces)), coset_(std::move(coset)) {
  if (box_.empty()) throw std::invalid_argument("LatticeRegion: dimension must be at least 1");
  for (const auto& h : halfspaces_)
    if (h.g.size() != box_.size()) throw std::invalid_argument("LatticeRegion: halfspace normal has the wrong length");
  if (coset_) {
    if (coset_->q < 1) throw std::invalid_argument("LatticeRegion: coset modulus must be positive");
    if (coset_->r.size() != box_.size()) throw std::invalid_argument("LatticeRegion: coset residue has the wrong length");
  }
}

LatticeRegion LatticeRegion::cube(std::size_t d, std::int64_t n) {
  return LatticeRegion(std::vector<Interval>(d, Interval{-n, n}));
}

std::uint64_t LatticeRegion::box_size() const {
  std::uint64_t s = 1;
  for (const auto& b : box_) s *= static_cast<std::uint64_t>(b.size());
  return s;
}

bool LatticeRegion::contains(std::span<const std::int64_t> x) const {
  if (x.size() != box_.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!box_[j].contains(x[j])) return false;
    if (coset_ && floor_mod(x[j] - coset_->r[j], coset_->q) != 0) return false;
  }
  for (const auto& h : halfspaces_)
    if (!h.satisfied_by(x)) return false;
  return true;
}

Interval LatticeRegion::last_coordinate_range(const Point& x) const {
  const std::size_t last = box_.size() - 1;
  std::int64_t lo = box_[last].lo;
  std::int64_t hi = box_[last].hi;
  for (const auto& h : halfspaces_) {
    __int128 rest = 0;
    for (std::size_t j = 0; j < last; ++j) rest += static_cast<__int128>(h.g[j]) * x[j];
    const __int128 room = static_cast<__int128>(h.beta) - rest;
    const std::int64_t a = h.g[last];
    if (a == 0) {
      if (room < 0) return {};
      continue;
    }
    // a * y <= room
    const __int128 ar = a;
    if (a > 0) {
      __int128 q = room / ar;
      if (room % ar != 0 && room < 0) --q;
      if (q < hi) hi = static_cast<std::int64_t>(std::max<__int128>(q, static_cast<__int128>(lo) - 1));
    } else {
      // y >= room / a, rounded up
      __int128 q = room / ar;
      if (room % ar != 0 && ((room < 0) == (ar < 0))) ++q;
      if (q > lo) lo = static_cast<std::int64_t>(std::min<__int128>(q, static_cast<__int128>(hi) + 1));
    }
    if (hi < lo) return {};
  }
  if (coset_) lo += floor_mod(coset_->r[last] - lo, coset_->q);
  return {lo, hi};
}

void LatticeRegion::walk(Point& x, std::size_t pos, const std::function<void(const Point&)>& visit) const {
  const std::size_t last = box_.size() - 1;
  const std::int64_t step = coset_ ? coset_->q : 1;
  if (pos == last) {
    const Interval r = last_coordinate_range(x);
    for (std::int64_t y = r.lo; y <= r.hi; y += step) {
      x[last] = y;
      visit(x);
    }
    return;
  }
  std::int64_t start = box_[pos].lo;
  if (coset_) start += floor_mod(coset_->r[pos] - start, coset_->q);
  for (std::int64_t v = start; v <= box_[pos].hi; v += step) {
    x[pos] = v;
    walk(x, pos + 1, visit);
  }
}

void LatticeRegion::for_each_point(const std::function<void(const Point&)>& visit) const {
  Point x(box_.size(), 0);
  walk(x, 0, visit);
}

void LatticeRegion::for_each_point_with_first(std::int64_t x0, const std::function<void(const Point&)>& visit) const {
  if (!box_[0].contains(x0)) return;
  if (coset_ && floor_mod(x0 - coset_->r[0], coset_->q) != 0) return;
  Point x(box_.size(), 0);
  x[0] = x0;
  if (box_.size() == 1) {
    if (contains(x)) visit(x);
    return;
  }
  walk(x, 1, visit);
}

std::vector<Point> LatticeRegion::enumerate() const {
  std::vector<Point> out;
  for_each_point([&](const Point& p) { out.push_back(p); });
  return out;
}

std::uint64_t LatticeRegion::count() const {
  std::uint64_t c = 0;
  for_each_point([&](const Point&) { ++c; });
  return c;
}

LatticeRegion LatticeRegion::with_halfspace(Halfspace h) const {
  auto hs = halfspaces_;
  hs.push_back(std::move(h));
  return LatticeRegion(box_, std::move(hs), coset_);
}

LatticeRegion preimage_region(const LinearSystem& system, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("preimage_region: N must be positive");
  return preimage_region(system, std::vector<Interval>(system.dimension(), Interval{-n, n}), Interval{-n, n});
}

LatticeRegion preimage_region(const LinearSystem& system, const std::vector<Interval>& box, Interval target,
                              std::int64_t shift) {
  if (box.size() != system.dimension()) throw std::invalid_argument("preimage_region: box dimension mismatch");
  std::vector<Halfspace> hs;
  for (const auto& f : system.forms()) {
    std::vector<std::int64_t> g(f.coefficients().begin(), f.coefficients().end());
    std::vector<std::int64_t> neg(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) neg[j] = -g[j];
    hs.push_back({g, target.hi - shift});
    hs.push_back({neg, shift - target.lo});
  }
  return LatticeRegion(box, std::move(hs));
}

bool DilatedCube::contains(std::span<const std::int64_t> x) const {
  if (x.size() != anchor.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const std::int64_t d = x[j] - anchor[j];
    if (d < 0 || d % q != 0 || d / q >= side_count) return false;
  }
  return true;
}

std::uint64_t DilatedCube::size() const {
  std::uint64_t s = 1;
  for (std::size_t j = 0; j < anchor.size(); ++j) s *= static_cast<std::uint64_t>(side_count);
  return s;
}

std::vector<Point> DilatedCube::points() const {
  std::vector<Point> out;
  const std::size_t d = anchor.size();
  std::vector<std::int64_t> v(d, 0);
  while (true) {
    Point p(d);
    for (std::size_t j = 0; j < d; ++j) p[j] = anchor[j] + q * v[j];
    out.push_back(std::move(p));
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (++v[j] < side_count) break;
      v[j] = 0;
      if (j == 0) return out;
    }
    if (d == 0) return out;
  }
}

std::uint64_t CellPartition::cell_points() const {
  std::uint64_t s = 0;
  for (const auto& c : cells) s += c.size();
  return s;
}

CellPartition pack_cubes(const LatticeRegion& region, std::int64_t q, double eps, std::int64_t n) {
  if (q < 1) throw std::invalid_argument("pack_cubes: q must be positive");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("pack_cubes: eps must lie in (0, 1]");
  if (eps * static_cast<double>(n) < 1.0) throw std::invalid_argument("pack_cubes: eps N < 1 leaves no cube side");
  if (region.coset()) throw std::invalid_argument("pack_cubes: regions with a coset constraint are not supported");

  CellPartition out;
  out.q = q;
  out.eps = eps;
  out.n = n;
  out.side_count = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(eps * static_cast<double>(n))));
  const std::int64_t side = q * out.side_count;
  const std::size_t d = region.dimension();
  const auto& box = region.box();

  // Grid cubes per axis whose closed hull [lo, lo + side] fits inside the box.
  std::vector<std::int64_t> per_axis(d);
  for (std::size_t j = 0; j < d; ++j) per_axis[j] = (box[j].size() - 1) / side;

  std::set<std::vector<std::int64_t>> kept;
  std::vector<std::int64_t> idx(d, 0);
  bool any = true;
  for (std::size_t j = 0; j < d; ++j) any = any && per_axis[j] > 0;
  while (any) {
    Point lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = box[j].lo + idx[j] * side;
      hi[j] = lo[j] + side;
    }
    // The closed cube [lo, lo + side]^D is tested rather than its lattice
    // points, so the kept cubes scale exactly with N. A linear constraint is
    // maximized over a box at a corner.
    bool inside = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d) && inside; ++mask) {
      Point corner(d);
      for (std::size_t j = 0; j < d; ++j) corner[j] = (mask >> j) & 1 ? hi[j] : lo[j];
      for (const auto& h : region.halfspaces())
        if (!h.satisfied_by(corner)) {
          inside = false;
          break;
        }
    }
    if (inside) {
      kept.insert(idx);
      std::vector<std::int64_t> r(d, 0);
      while (true) {
        DilatedCube cell;
        cell.anchor.resize(d);
        for (std::size_t j = 0; j < d; ++j) cell.anchor[j] = lo[j] + r[j];
        cell.q = q;
        cell.side_count = out.side_count;
        out.cells.push_back(std::move(cell));
        std::size_t j = d;
        bool done = true;
        while (j > 0) {
          --j;
          if (++r[j] < q) {
            done = false;
            break;
          }
          r[j] = 0;
        }
        if (done) break;
      }
    }
    std::size_t j = d;
    bool done = true;
    while (j > 0) {
      --j;
      if (++idx[j] < per_axis[j]) {
        done = false;
        break;
      }
      idx[j] = 0;
    }
    if (done) break;
  }

  region.for_each_point([&](const Point& p) {
    std::vector<std::int64_t> cube(d);
    bool in_grid = true;
    for (std::size_t j = 0; j < d; ++j) {
      cube[j] = (p[j] - box[j].lo) / side;
      if (cube[j] >= per_axis[j]) in_grid = false;
    }
    if (!in_grid || !kept.count(cube)) out.boundary.push_back(p);
  });
  return out;
}

namespace {

struct PointHash {
  std::size_t operator()(const Point& p) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : p) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

PartitionCheck verify_partition(const LatticeRegion& region, const CellPartition& partition) {
  PartitionCheck r;
  r.cells_disjoint = true;
  r.cells_inside = true;
  r.boundary_disjoint = true;
  std::unordered_set<Point, PointHash> seen;
  for (const auto& cell : partition.cells)
    for (const auto& p : cell.points()) {
      ++r.cell_points;
      if (!seen.insert(p).second) r.cells_disjoint = false;
      if (!region.contains(p)) r.cells_inside = false;
    }
  for (const auto& p : partition.boundary) {
    ++r.boundary_points;
    if (!seen.insert(p).second) r.boundary_disjoint = false;
    if (!region.contains(p)) r.cells_inside = false;
  }
  r.covers = true;
  region.for_each_point([&](const Point& p) {
    ++r.region_points;
    if (!seen.count(p)) r.covers = false;
  });
  if (r.region_points != r.cell_points + r.boundary_points) r.covers = false;
  return r;
}

Progression extract_subprogression(const DilatedCube& cell, const LinearForm& form, std::int64_t c) {
  if (form.dimension() != cell.anchor.size()) throw std::invalid_argument("extract_subprogression: dimension mismatch");
  std::size_t j = 0;
  while (form.coefficient(j) == 0) ++j;
  return Progression{checked_add(form(cell.anchor), c), checked_mul(cell.q, form.coefficient(j)), cell.side_count};
}

namespace {

// Some v in [0, l)^k with sum g_j v_j = target.
bool solvable(const std::vector<std::int64_t>& g, std::size_t pos, std::int64_t target, std::int64_t l,
              const std::vector<std::int64_t>& suffix_min, const std::vector<std::int64_t>& suffix_max) {
  if (target < suffix_min[pos] || target > suffix_max[pos]) return false;
  if (pos + 1 == g.size()) return target % g[pos] == 0 && target / g[pos] >= 0 && target / g[pos] < l;
  for (std::int64_t v = 0; v < l; ++v)
    if (solvable(g, pos + 1, target - g[pos] * v, l, suffix_min, suffix_max)) return true;
  return false;
}

}  // namespace

std::uint64_t incidence_count(const CellPartition& partition, const LinearForm& form, std::int64_t c, std::int64_t n) {
  std::vector<std::int64_t> g;
  for (auto a : form.coefficients())
    if (a != 0) g.push_back(a);
  const std::int64_t l = partition.side_count;
  std::vector<std::int64_t> suffix_min(g.size() + 1, 0), suffix_max(g.size() + 1, 0);
  for (std::size_t j = g.size(); j-- > 0;) {
    suffix_min[j] = suffix_min[j + 1] + std::min<std::int64_t>(0, g[j] * (l - 1));
    suffix_max[j] = suffix_max[j + 1] + std::max<std::int64_t>(0, g[j] * (l - 1));
  }
  std::uint64_t count = 0;
  for (const auto& cell : partition.cells) {
    const std::int64_t t = n - c - form(cell.anchor);
    if (t % cell.q != 0) continue;
    if (solvable(g, 0, t / cell.q, l, suffix_min, suffix_max)) ++count;
  }
  return count;
}

std::uint64_t max_incidence(const CellPartition& partition, const LinearForm& form, std::int64_t c) {
  std::unordered_map<std::int64_t, std::uint64_t> hits;
  for (const auto& cell : partition.cells) {
    std::unordered_set<std::int64_t> image;
    for (const auto& p : cell.points()) image.insert(form(p) + c);
    for (auto v : image) ++hits[v];
  }
  std::uint64_t best = 0;
  for (const auto& [v, k] : hits) best = std::max(best, k);
  return best;
}

}  // namespace gowerslab
