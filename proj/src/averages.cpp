#include "gowerslab/averages.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "gowerslab/summation.hpp"

namespace gowerslab {

namespace {

// Sum of term(x) over the region: one pairwise sum per first-coordinate
// slice, slices combined pairwise in order.
template <typename T, typename Term>
T region_sum(const LatticeRegion& region, unsigned jobs, Term term) {
  const Interval first = region.box()[0];
  std::vector<T> slots(static_cast<std::size_t>(first.size()));
  parallel_for(slots.size(), jobs, [&](std::size_t k) {
    std::vector<T> parts;
    region.for_each_point_with_first(first.lo + static_cast<std::int64_t>(k),
                                     [&](const Point& x) { parts.push_back(term(x)); });
    slots[k] = pairwise_sum(parts);
  });
  return pairwise_sum(slots);
}

void check_functions(const LinearSystem& system, const std::vector<Series>& functions) {
  if (functions.size() != system.size())
    throw std::invalid_argument("expected " + std::to_string(system.size()) + " functions, got " +
                                std::to_string(functions.size()));
}

bool at_most(double lhs, double rhs, double tol) { return lhs <= rhs + tol * std::max(1.0, std::abs(rhs)); }

}  // namespace

AverageReport multilinear_average(const LinearSystem& system, const std::vector<Series>& functions,
                                  const LatticeRegion& region, std::int64_t c, unsigned jobs) {
  check_functions(system, functions);
  if (region.dimension() != system.dimension()) throw std::invalid_argument("multilinear_average: dimension mismatch");
  const std::uint64_t size = region.count();
  if (size == 0) throw std::invalid_argument("multilinear_average: empty region");
  const Complex total = region_sum<Complex>(region, jobs, [&](const Point& x) {
    Complex p = 1.0;
    for (std::size_t i = 0; i < system.size(); ++i) p *= functions[i](system.form(i)(x) + c);
    return p;
  });
  AverageReport r;
  r.value = total / static_cast<double>(size);
  r.region_size = size;
  r.shift = c;
  return r;
}

AverageReport reduction_pipeline(const LinearSystem& system, const std::vector<Series>& functions, std::int64_t n,
                                 double tolerance, unsigned jobs) {
  check_functions(system, functions);
  PipelineTrace tr{flagify(system, std::max<int>(1, static_cast<int>(system.size())))};
  tr.n = n;
  const LatticeRegion k = preimage_region(system, n);
  for (auto ai : tr.flag.a) tr.a = std::max(tr.a, ai < 0 ? -ai : ai);

  std::vector<Series> rescaled;
  for (std::size_t i = 0; i < system.size(); ++i) rescaled.push_back(dilate_embed(functions[i], tr.flag.a[i], tr.a, n));

  const auto orig = multilinear_average(system, functions, k, 0, jobs);
  const auto resc = multilinear_average(tr.flag.rescaled, rescaled, k, tr.a * n, jobs);
  tr.region_size = orig.region_size;
  tr.original = orig.value;
  tr.rescaled = resc.value;
  tr.identity_error = std::abs(orig.value - resc.value);
  tr.identity_holds = within_tolerance(resc.value, orig.value, tolerance);

  const LatticeRegion box = LatticeRegion::cube(system.dimension(), n);
  const auto boxed = multilinear_average(system, functions, box, 0, jobs);
  tr.box_size = boxed.region_size;
  tr.box_average = boxed.value;
  tr.box_to_region = static_cast<double>(tr.box_size) / static_cast<double>(tr.region_size);
  const double outside = region_sum<double>(box, jobs, [&](const Point& x) {
    if (k.contains(x)) return 0.0;
    Complex p = 1.0;
    for (std::size_t i = 0; i < system.size(); ++i) p *= functions[i](system.form(i)(x));
    return std::abs(p);
  });
  tr.boundary_term = outside / static_cast<double>(tr.box_size);
  const double bound = std::abs(tr.original) / tr.box_to_region + tr.boundary_term;
  tr.bound_holds = at_most(std::abs(tr.box_average), bound, tolerance);

  AverageReport r = boxed;
  r.trace = std::move(tr);
  return r;
}

bool SmallNChain::all_hold() const {
  return std::all_of(links.begin(), links.end(), [](const ChainLink& l) { return l.holds; });
}

SmallNChain small_n_chain(const LinearSystem& system, const std::vector<Series>& functions, const LatticeRegion& region,
                          std::int64_t c, std::int64_t n, int s, std::optional<std::size_t> j, double tolerance,
                          unsigned jobs) {
  check_functions(system, functions);
  if (n < 1 || s < 1) throw std::invalid_argument("small_n_chain: need N >= 1 and s >= 1");
  const Interval window{1, n};
  for (const auto& f : functions) {
    const Interval span = f.nonzero_span();
    if (!span.empty() && (span.lo < 1 || span.hi > n))
      throw std::invalid_argument("small_n_chain: functions must be supported in [1, N]");
  }
  SmallNChain out;
  out.s = s;
  out.n = n;
  out.shift = c;
  const FiniteSet interval = FiniteSet::interval(window);
  for (const auto& f : functions) out.norms.push_back(norm_subset(f, interval, s, NormMethod::fast, jobs).value);
  out.j = j.value_or(static_cast<std::size_t>(std::min_element(out.norms.begin(), out.norms.end()) - out.norms.begin()));
  if (out.j >= functions.size()) throw std::invalid_argument("small_n_chain: index j out of range");
  const Series& fj = functions[out.j];
  const LinearForm& psi = system.form(out.j);

  const auto avg = multilinear_average(system, functions, region, c, jobs);
  out.region_size = avg.region_size;
  std::unordered_map<std::int64_t, std::uint64_t> mult;
  double sq_sum = 0.0;
  std::vector<double> sq;
  region.for_each_point([&](const Point& x) {
    for (std::size_t i = 0; i < system.size(); ++i)
      if (!window.contains(system.form(i)(x) + c))
        throw std::invalid_argument("small_n_chain: region point maps outside [1, N]");
    const std::int64_t v = psi(x) + c;
    ++mult[v];
    sq.push_back(std::norm(fj(v)));
  });
  sq_sum = pairwise_sum(sq);
  for (const auto& [v, m] : mult) out.max_multiplicity = std::max(out.max_multiplicity, m);
  const double size = static_cast<double>(out.region_size);
  const double mean_sq_k = sq_sum / size;
  out.c_b = static_cast<double>(out.max_multiplicity) * static_cast<double>(n) / size;

  std::vector<double> sq_n;
  for (std::int64_t m = 1; m <= n; ++m) sq_n.push_back(std::norm(fj(m)));
  const double mean_sq_n = pairwise_sum(sq_n) / static_cast<double>(n);

  std::vector<double> ac_terms;
  for (std::int64_t h = -(n - 1); h <= n - 1; ++h) {
    std::vector<Complex> terms;
    for (std::int64_t m = std::max<std::int64_t>(1, 1 - h); m <= std::min(n, n - h); ++m)
      terms.push_back(fj(m) * std::conj(fj(m + h)));
    ac_terms.push_back(std::norm(pairwise_sum(terms) / static_cast<double>(n)));
  }
  const double ac_sum = pairwise_sum(ac_terms);

  // literal triple loop for the U^2 configuration sum
  std::vector<Complex> rows;
  for (std::int64_t m = 1; m <= n; ++m) {
    std::vector<Complex> row;
    for (std::int64_t h = 1 - m; h <= n - m; ++h)
      for (std::int64_t h2 = 1 - m; h2 <= n - m; ++h2) {
        const std::int64_t top = m + h + h2;
        if (top < 1 || top > n) continue;
        row.push_back(fj(m) * std::conj(fj(m + h)) * std::conj(fj(m + h2)) * fj(top));
      }
    rows.push_back(pairwise_sum(row));
  }
  const double s2_literal = pairwise_sum(rows).real();
  const Series ind = Series::indicator(window);
  const double cc2 = static_cast<double>(pp_sum_fast(ind, 1, jobs).config_count);
  const double ccs = static_cast<double>(pp_sum_fast(ind, s, jobs).config_count);
  const double u2 = norm_subset(fj, interval, 1, NormMethod::fast, jobs).value;

  const double m_cyc = static_cast<double>((s + 2) * n);
  out.c_mono = std::pow(ccs / std::pow(m_cyc, s + 2), 1.0 / std::ldexp(1.0, s + 1)) *
               std::pow(m_cyc * m_cyc * m_cyc / cc2, 0.25);
  const double nd = static_cast<double>(n);
  out.c_e = std::sqrt(out.c_b) * std::pow(cc2 / (nd * nd * nd), 0.25) * out.c_mono;

  const double abs_avg = std::abs(avg.value);
  const double norm_j = out.norms[out.j];
  auto link = [&](std::string name, double lhs, double rhs, bool identity) {
    ChainLink l{std::move(name), lhs, rhs, identity, false};
    l.holds = identity ? within_tolerance(lhs, rhs, tolerance) : at_most(lhs, rhs, tolerance);
    out.links.push_back(std::move(l));
  };
  link("a", abs_avg, std::sqrt(mean_sq_k), false);
  link("b", mean_sq_k, out.c_b * mean_sq_n, false);
  link("c", mean_sq_n * mean_sq_n, ac_sum, false);
  link("d", s2_literal, cc2 * std::pow(u2, 4), true);
  link("monotonicity", u2, out.c_mono * norm_j, false);
  link("e", abs_avg, out.c_e * std::pow(nd, 0.25) * norm_j, false);
  return out;
}

CyclicApReport cyclic_ap_average(const std::vector<std::vector<Complex>>& functions, double tolerance, unsigned jobs) {
  const std::size_t t = functions.size();
  if (t < 3) throw std::invalid_argument("cyclic_ap_average: need t >= 3");
  const std::size_t n = functions.front().size();
  if (n == 0) throw std::invalid_argument("cyclic_ap_average: N must be positive");
  for (const auto& f : functions)
    if (f.size() != n) throw std::invalid_argument("cyclic_ap_average: functions have different lengths");
  for (std::size_t k = 2; k < t; ++k)
    if (std::gcd(n, k) != 1)
      throw std::invalid_argument("cyclic_ap_average: N must be coprime to " + std::to_string(k));

  std::vector<Complex> rows(n);
  parallel_for(n, jobs, [&](std::size_t x) {
    std::vector<Complex> terms(n);
    for (std::size_t d = 0; d < n; ++d) {
      Complex p = 1.0;
      for (std::size_t i = 0; i < t; ++i) p *= functions[i][(x + i * d) % n];
      terms[d] = p;
    }
    rows[x] = pairwise_sum(terms);
  });
  CyclicApReport r;
  r.average = pairwise_sum(rows) / static_cast<double>(n * n);
  for (const auto& f : functions) r.norms.push_back(norm_cyclic(f, static_cast<int>(t) - 2, jobs).value);
  r.min_norm = *std::min_element(r.norms.begin(), r.norms.end());
  r.holds = std::abs(r.average) <= r.min_norm + tolerance;
  return r;
}

VnIntervalReport interval_vn_check(const LinearSystem& system, const std::vector<Series>& functions, std::int64_t n,
                                   unsigned jobs) {
  check_functions(system, functions);
  VnIntervalReport r;
  r.s = cs_complexity(system);
  const auto avg = multilinear_average(system, functions, preimage_region(system, n), 0, jobs);
  r.region_size = avg.region_size;
  r.average = avg.value;
  r.abs_average = std::abs(avg.value);
  const FiniteSet window = FiniteSet::interval({-n, n});
  // s = 0 (independent forms) still uses U^2, the smallest norm defined here.
  const int order_s = std::max(1, r.s);
  for (const auto& f : functions) r.norms.push_back(norm_subset(f, window, order_s, NormMethod::fast, jobs).value);
  r.min_norm = *std::min_element(r.norms.begin(), r.norms.end());
  return r;
}

}  // namespace gowerslab
