#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gowerslab/gowers.hpp"
#include "gowerslab/linear_systems.hpp"
#include "gowerslab/regions.hpp"
#include "gowerslab/series.hpp"

namespace gowerslab {

struct NormAnnotation {
  std::size_t index = 0;
  int order = 0;
  double value = 0.0;
};

/// Substitution identity and box comparison behind the rescaled average.
struct PipelineTrace {
  Flagification flag;
  std::int64_t a = 0;  // max |a_i|
  std::int64_t n = 0;
  std::uint64_t region_size = 0;  // |K|
  std::uint64_t box_size = 0;     // (2N+1)^D
  Complex original{};             // E_K prod f_i(psi_i(x))
  Complex rescaled{};             // E_K prod f~_i(a_i psi_i(x) + aN)
  double identity_error = 0.0;
  bool identity_holds = false;
  Complex box_average{};          // E_box prod f_i(psi_i(x))
  double box_to_region = 0.0;     // C = |box| / |K|
  double boundary_term = 0.0;     // |box|^{-1} sum_{box \ K} |prod f_i(psi_i(x))|
  bool bound_holds = false;       // |E_box| <= (|K|/|box|) |E_K| + boundary_term
};

struct AverageReport {
  Complex value{};
  std::uint64_t region_size = 0;
  std::int64_t shift = 0;
  std::vector<NormAnnotation> norms;
  std::optional<PipelineTrace> trace;
};

/// E_{x in region} prod_i f_i(psi_i(x) + c). Slices of the first coordinate
/// are summed pairwise into fixed slots, so the value does not depend on the
/// thread count. Throws std::invalid_argument on an empty region or a
/// function count different from t.
AverageReport multilinear_average(const LinearSystem& system, const std::vector<Series>& functions,
                                  const LatticeRegion& region, std::int64_t c, unsigned jobs = 0);

/// For f_i on [-N, N]: K = preimage_region(system, N), flagification, the
/// rescaled functions, both sides of the substitution identity on K, and the
/// average over the full box (the returned value).
AverageReport reduction_pipeline(const LinearSystem& system, const std::vector<Series>& functions, std::int64_t n,
                                 double tolerance = 1e-12, unsigned jobs = 0);

struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool identity = false;  // compared with tolerance in both directions
  bool holds = false;
};

struct SmallNChain {
  std::size_t j = 0;
  int s = 0;
  std::int64_t n = 0;
  std::int64_t shift = 0;
  std::uint64_t region_size = 0;
  std::uint64_t max_multiplicity = 0;
  double c_b = 0.0;      // max_n #{x in K : psi_j(x)+c = n} N / |K|
  double c_mono = 0.0;   // ||f||_{U^2[N]} <= c_mono ||f||_{U^{s+1}[N]}
  double c_e = 0.0;      // final constant in front of N^{1/4}
  std::vector<double> norms;  // ||f_i||_{U^{s+1}[N]}
  std::vector<ChainLink> links;
  bool all_hold() const;
};

/// The small-N inequality chain for functions on [N] = [1, N] over the
/// region K (every point must map into [1, N] after the shift):
///   (a) |E_K prod f_i| <= (E_K |f_j(psi_j + c)|^2)^{1/2}
///   (b) E_K |f_j(psi_j + c)|^2 <= c_b E_{[N]} |f_j|^2
///   (c) (E_{[N]} |f_j|^2)^2 <= sum_h |E_n f_j(n) conj f_j(n+h)|^2
///   (d) sum_{n,h,h'} f_j(n) conj f_j(n+h) conj f_j(n+h') f_j(n+h+h')
///         = #{configurations in [N]} ||f_j||_{U^2[N]}^4          (identity)
///   (e) |E_K prod f_i| <= c_e N^{1/4} ||f_j||_{U^{s+1}[N]}
/// c_mono comes from cyclic monotonicity on Z_M, M = (s+2)N, where [N] embeds
/// without wraparound. j defaults to the first index of minimal U^{s+1} norm.
SmallNChain small_n_chain(const LinearSystem& system, const std::vector<Series>& functions, const LatticeRegion& region,
                          std::int64_t c, std::int64_t n, int s, std::optional<std::size_t> j = {},
                          double tolerance = 1e-9, unsigned jobs = 0);

struct CyclicApReport {
  Complex average{};
  std::vector<double> norms;  // ||f_i||_{U^{t-1}(Z_N)}
  double min_norm = 0.0;
  bool holds = false;         // |average| <= min_norm + tolerance
};

/// E_{x,d in Z_N} prod_i f_i(x + (i-1) d) by direct double loop. Throws
/// std::invalid_argument unless t >= 3, every f_i has N values, and
/// gcd(N, (t-1)!) = 1.
CyclicApReport cyclic_ap_average(const std::vector<std::vector<Complex>>& functions, double tolerance = 1e-9,
                                 unsigned jobs = 0);

struct VnIntervalReport {
  int s = 0;  // Cauchy-Schwarz complexity
  std::uint64_t region_size = 0;
  Complex average{};
  double abs_average = 0.0;
  std::vector<double> norms;  // ||f_i||_{U^{s+1}[-N,N]}
  double min_norm = 0.0;
};

/// |E_K prod f_i(psi_i(x))| next to min_i ||f_i||_{U^{s+1}[-N,N]}, s the
/// Cauchy-Schwarz complexity, K = preimage_region(system, N).
VnIntervalReport interval_vn_check(const LinearSystem& system, const std::vector<Series>& functions, std::int64_t n,
                                   unsigned jobs = 0);

}  // namespace gowerslab
