#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gowerslab/core.hpp"
#include "gowerslab/linear_systems.hpp"

namespace gowerslab {

/// g . x <= beta
struct Halfspace {
  std::vector<std::int64_t> g;
  std::int64_t beta = 0;
  bool satisfied_by(std::span<const std::int64_t> x) const;
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

/// x_j = r_j (mod q) for every coordinate j.
struct Coset {
  std::int64_t q = 1;
  std::vector<std::int64_t> r;
  friend bool operator==(const Coset&, const Coset&) = default;
};

/// Integer points of a box cut by halfspaces and optionally a coset.
class LatticeRegion {
 public:
  LatticeRegion(std::vector<Interval> box, std::vector<Halfspace> halfspaces = {}, std::optional<Coset> coset = {});
  /// [-n, n]^d with no further constraints.
  static LatticeRegion cube(std::size_t d, std::int64_t n);

  std::size_t dimension() const { return box_.size(); }
  const std::vector<Interval>& box() const { return box_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::optional<Coset>& coset() const { return coset_; }
  /// Box facets plus halfspaces.
  std::size_t face_count() const { return 2 * box_.size() + halfspaces_.size(); }
  std::uint64_t box_size() const;

  bool contains(std::span<const std::int64_t> x) const;

  /// Visits every point once, in lexicographic order. The last coordinate is
  /// solved as an interval from the halfspaces instead of scanned.
  void for_each_point(const std::function<void(const Point&)>& visit) const;
  /// Same, restricted to points with first coordinate x0.
  void for_each_point_with_first(std::int64_t x0, const std::function<void(const Point&)>& visit) const;

  std::vector<Point> enumerate() const;
  std::uint64_t count() const;

  LatticeRegion with_halfspace(Halfspace h) const;

 private:
  // Feasible range of the last coordinate given the others.
  Interval last_coordinate_range(const Point& prefix) const;
  void walk(Point& x, std::size_t pos, const std::function<void(const Point&)>& visit) const;

  std::vector<Interval> box_;
  std::vector<Halfspace> halfspaces_;
  std::optional<Coset> coset_;
};

/// [-n, n]^D cut by |psi_i(x)| <= n for every form.
LatticeRegion preimage_region(const LinearSystem& system, std::int64_t n);

/// `box` cut by psi_i(x) + shift in `target` for every form.
LatticeRegion preimage_region(const LinearSystem& system, const std::vector<Interval>& box, Interval target,
                              std::int64_t shift = 0);

/// {anchor + q v : v in [0, side_count)^D}.
struct DilatedCube {
  Point anchor;
  std::int64_t q = 1;
  std::int64_t side_count = 1;

  bool contains(std::span<const std::int64_t> x) const;
  std::vector<Point> points() const;
  std::uint64_t size() const;
};

struct CellPartition {
  std::vector<DilatedCube> cells;
  std::vector<Point> boundary;  // S, lexicographic
  std::int64_t q = 1;
  double eps = 0;
  std::int64_t n = 0;
  std::int64_t side_count = 1;  // L = max(1, floor(eps n))
  std::uint64_t cell_points() const;
};

/// Grid of cubes of side q L anchored at the box's lower corner. A grid cube
/// whose closed hull [lo, lo + q L]^D lies in the box and satisfies every
/// halfspace at its corners is kept
/// and split into its q^D residue classes; every other point of the region
/// goes to the boundary set. Throws std::invalid_argument if eps n < 1,
/// eps is outside (0, 1], q < 1, or the region carries a coset.
CellPartition pack_cubes(const LatticeRegion& region, std::int64_t q, double eps, std::int64_t n);

struct PartitionCheck {
  bool cells_disjoint = false;
  bool cells_inside = false;
  bool boundary_disjoint = false;  // boundary meets no cell and has no repeats
  bool covers = false;             // every region point is in a cell or the boundary
  std::uint64_t region_points = 0;
  std::uint64_t cell_points = 0;
  std::uint64_t boundary_points = 0;
  bool exact() const { return cells_disjoint && cells_inside && boundary_disjoint && covers; }
};

/// Point-by-point check that the cells and the boundary partition the region.
PartitionCheck verify_partition(const LatticeRegion& region, const CellPartition& partition);

/// psi(anchor + q t e_j) + c for t in [0, L), j the first coordinate where psi
/// is nonzero.
Progression extract_subprogression(const DilatedCube& cell, const LinearForm& form, std::int64_t c);

/// Number of cells P with n in psi(P) + c, each decided by solving
/// sum_j q g_j v_j = n - c - psi(anchor) over the box v in [0, L)^D.
std::uint64_t incidence_count(const CellPartition& partition, const LinearForm& form, std::int64_t c, std::int64_t n);

/// max over n of incidence_count, from the distinct image values of each cell.
std::uint64_t max_incidence(const CellPartition& partition, const LinearForm& form, std::int64_t c);

}  // namespace gowerslab
