#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gowerslab/core.hpp"
#include "gowerslab/series.hpp"

namespace gowerslab {

/// Unnormalized Gowers sum over Z,
///   S_{s+1}(f) = sum_{x, h in Z^{s+1}} prod_{w in {0,1}^{s+1}} C^{|w|} f(x + w.h),
/// together with the number of configurations whose corners all lie in the
/// support of f (the same sum for the support indicator).
struct ParallelepipedSum {
  int order = 0;  // s + 1
  Complex value{};
  std::uint64_t config_count = 0;
};

enum class NormMethod { oracle, fast };
std::string to_string(NormMethod method);

/// Work budget shared by the guards below.
inline constexpr double kSumBudget = 1e9;

/// Configurations visited by the direct enumeration on a support of width w:
/// w^{s+2} 2^{s+1} / (s+2)!.
double oracle_cost(std::int64_t width, int s);

/// Direct enumeration: s nested difference levels, then the double loop over
/// (x, h_{s+1}). Throws std::length_error if oracle_cost exceeds kSumBudget.
ParallelepipedSum pp_sum_oracle(const Series& f, int s, unsigned jobs = 0);

/// Difference recursion to depth s-1, then the U^2 sum from the FFT of the
/// zero-padded function (sum_h |ac(h)|^2 = P^{-1} sum_k |F_k|^4 for padding
/// P >= 2 width). Supports confined to a coset c + dZ are first rescaled to
/// step 1, which leaves the sum unchanged. Throws std::length_error if
/// width^s exceeds kSumBudget.
ParallelepipedSum pp_sum_fast(const Series& f, int s, unsigned jobs = 0);

ParallelepipedSum pp_sum(const Series& f, int s, NormMethod method, unsigned jobs = 0);

/// max(Re S, 0)^{1/2^{s+1}}.
double root_of_sum(const ParallelepipedSum& sum);

/// Finite subset of Z: a progression or an explicit sorted list.
class FiniteSet {
 public:
  static FiniteSet progression(const Progression& p);
  static FiniteSet interval(Interval i);
  static FiniteSet elements(std::vector<std::int64_t> xs);

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<std::int64_t>& points() const { return points_; }
  bool contains(std::int64_t n) const;
  Series indicator() const;
  const std::string& description() const { return description_; }

 private:
  std::vector<std::int64_t> points_;
  std::string description_;
};

struct NormReport {
  double value = 0.0;
  int order = 0;
  std::string domain;
  NormMethod method = NormMethod::fast;
  Complex numerator{};     // S(f 1_A), or the cyclic sum
  double denominator = 1;  // S(1_A), or N^{s+2}
};

/// ||f||_{U^{s+1}(A)} = (S(f 1_A) / S(1_A))^{1/2^{s+1}}. Throws
/// std::invalid_argument for an empty set.
NormReport norm_subset(const Series& f, const FiniteSet& a, int s, NormMethod method = NormMethod::fast,
                       unsigned jobs = 0);

/// Gowers norm on Z_N of f given by its N values.
NormReport norm_cyclic(const std::vector<Complex>& f, int s, unsigned jobs = 0);

/// Trapezoid: 1 on |x| <= eps N/2, 0 on |x| > (1 + 1/sqrt N) eps N/2, linear
/// in between. Throws std::invalid_argument unless eps in (0,1] and eps N >= 4.
Series dlvp_kernel(double eps, std::int64_t n);

/// x -> kernel((x - c)/q) on x = c mod q, zero elsewhere.
Series dilated_smoother(double eps, std::int64_t n, std::int64_t q, std::int64_t c);

/// sum_xi |f^(xi)| on Z_M with f^(xi) = M^{-1} sum_x f(x) e(-x xi/M); f is
/// reduced mod M and must have a window of at most M points.
double fourier_l1(const Series& f, std::size_t m);

/// Embedding size used for the kernel's Fourier norm: the least power of two
/// >= 4 (1 + 1/sqrt N) eps N.
std::size_t dlvp_embedding_size(double eps, std::int64_t n);

/// |a - b| <= tol * max(1, |b|).
bool within_tolerance(double a, double b, double tol);
bool within_tolerance(Complex a, Complex b, double tol);

}  // namespace gowerslab
