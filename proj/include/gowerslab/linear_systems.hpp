#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gowerslab/core.hpp"
#include "gowerslab/exact.hpp"
#include "gowerslab/random.hpp"

namespace gowerslab {

/// A nonzero integer linear form Z^D -> Z.
class LinearForm {
 public:
  /// Throws std::invalid_argument if `coeffs` is empty or identically zero.
  explicit LinearForm(std::vector<std::int64_t> coeffs);

  std::size_t dimension() const { return coeffs_.size(); }
  std::span<const std::int64_t> coefficients() const { return coeffs_; }
  std::int64_t coefficient(std::size_t j) const { return coeffs_[j]; }
  std::int64_t max_abs_coefficient() const;

  /// Exact value at `point`. Throws std::invalid_argument on a length mismatch.
  BigInt evaluate(std::span<const std::int64_t> point) const;

  /// int64 evaluation for hot loops; the caller guarantees no overflow.
  std::int64_t operator()(std::span<const std::int64_t> point) const {
    std::int64_t v = 0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) v += coeffs_[j] * point[j];
    return v;
  }

  LinearForm scaled(std::int64_t factor) const;

  friend bool operator==(const LinearForm&, const LinearForm&) = default;

 private:
  std::vector<std::int64_t> coeffs_;
};

BigInt evaluate(const LinearForm& form, std::span<const std::int64_t> point);

/// Ordered family of t >= 1 nonzero forms on a common Z^D.
class LinearSystem {
 public:
  explicit LinearSystem(std::vector<LinearForm> forms);
  static LinearSystem from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t size() const { return forms_.size(); }
  std::size_t dimension() const { return forms_.front().dimension(); }
  const LinearForm& form(std::size_t i) const { return forms_[i]; }
  const std::vector<LinearForm>& forms() const { return forms_; }
  std::int64_t max_abs_coefficient() const;

  /// t x D matrix of coefficients.
  IntMatrix coefficient_matrix() const;
  std::vector<std::vector<std::int64_t>> rows() const;

  /// Exact image Psi(x) in Z^t.
  IntVector evaluate(std::span<const std::int64_t> point) const;

  friend bool operator==(const LinearSystem&, const LinearSystem&) = default;

 private:
  std::vector<LinearForm> forms_;
};

/// (x, x+y, ..., x+(k-1)y) on Z^2.
LinearSystem arithmetic_progression_system(int k);

/// Span of {(psi_1(x)^k, ..., psi_t(x)^k) : x in Z^D} inside Q^t.
struct PowerSpan {
  int degree = 0;
  std::vector<IntVector> basis;  // integer-scaled, linearly independent
  std::size_t dim() const { return basis.size(); }
};

/// t x C(D+k-1, k) matrix whose row i holds the coefficients of psi_i^k in the
/// degree-k monomial basis (multinomial expansion, monomials in lex order).
IntMatrix power_matrix(const LinearSystem& system, int k);

PowerSpan power_span(const LinearSystem& system, int k);

/// Integer vectors c with sum_i c_i psi_i^k identically zero.
std::vector<IntVector> power_relations(const LinearSystem& system, int k);

/// Pairwise containments of the power spans up to a degree bound.
class FlagReport {
 public:
  FlagReport(int kmax, std::vector<char> containment, std::optional<std::pair<int, int>> first_violation);

  int kmax() const { return kmax_; }
  /// Psi^[k] is contained in Psi^[l], for 1 <= k < l <= kmax.
  bool contains(int k, int l) const;
  bool is_flag() const { return !first_violation_.has_value(); }
  const std::optional<std::pair<int, int>>& first_violation() const { return first_violation_; }

 private:
  int kmax_;
  std::vector<char> containment_;  // (kmax+1)^2, indexed [k * (kmax+1) + l]
  std::optional<std::pair<int, int>> first_violation_;
};

/// Flag condition checked up to degree kmax (>= 2). The first violation is
/// reported in lexicographic (k, l) order.
FlagReport is_flag(const LinearSystem& system, int kmax);

/// Least s >= 1 with dim Psi^[s+1] = t, searching s <= smax.
std::optional<int> independence_degree(const LinearSystem& system, int smax);

/// max(independence degree + 1, 2t), the degree bound used when the caller
/// does not choose one.
int default_flag_degree(const LinearSystem& system);

/// Largest system size accepted by cs_complexity (the partition search is 3^t).
inline constexpr std::size_t kMaxComplexitySystemSize = 12;

/// Cauchy-Schwarz complexity. Throws std::invalid_argument for t < 2,
/// std::domain_error if two forms are proportional, std::length_error for
/// t > kMaxComplexitySystemSize.
int cs_complexity(const LinearSystem& system);

/// (1,...,1) lies in Psi^[1].
bool is_translation_invariant(const LinearSystem& system);

struct Flagification {
  Point witness;                 // x0 with every psi_i(x0) != 0
  std::vector<std::int64_t> b;   // b_i = psi_i(x0)
  std::vector<std::int64_t> a;   // a_i proportional to prod_{j != i} b_j, gcd-reduced
  LinearSystem rescaled;         // (a_i psi_i)
  std::int64_t common_value() const { return a.front() * b.front(); }
  std::int64_t max_abs_scalar() const;
};

/// Rescaling built from a given witness x0. Throws std::invalid_argument if
/// some psi_i(x0) = 0.
Flagification flagify_at(const LinearSystem& system, std::span<const std::int64_t> witness);

/// Searches x0 by increasing sup-norm up to `search_bound`. Within a shell,
/// points are compared lexicographically with coordinates ordered
/// 0, 1, -1, 2, -2, ... . Throws std::runtime_error if no witness exists
/// within the bound (a bound >= t always suffices).
Flagification flagify(const LinearSystem& system, int search_bound);

struct NonFlagSearch {
  std::size_t dimension = 2;
  std::size_t min_forms = 3;
  std::size_t max_forms = 6;
  std::int64_t max_coeff = 3;
  int kmax = 5;
  std::size_t attempts = 100000;
};

/// Random search for a system failing the flag condition below kmax, with
/// pairwise non-proportional forms. Returns nullopt if the attempts run out.
std::optional<LinearSystem> search_non_flag_system(Rng& rng, const NonFlagSearch& options);

/// Some form is a rational multiple of another.
bool has_proportional_pair(const LinearSystem& system);

}  // namespace gowerslab
