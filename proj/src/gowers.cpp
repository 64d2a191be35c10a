#include "gowerslab/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gowerslab/fft.hpp"
#include "gowerslab/summation.hpp"

namespace gowerslab {

std::string to_string(NormMethod method) { return method == NormMethod::oracle ? "oracle" : "fast"; }

namespace {

// Values of a function on the consecutive integers start, start+1, ...
struct Window {
  std::int64_t start = 0;
  std::vector<Complex> v;
  std::int64_t len() const { return static_cast<std::int64_t>(v.size()); }
};

Window trim(Window w) {
  std::size_t first = 0;
  while (first < w.v.size() && w.v[first] == Complex{}) ++first;
  if (first == w.v.size()) return {};
  std::size_t last = w.v.size() - 1;
  while (w.v[last] == Complex{}) --last;
  if (first == 0 && last + 1 == w.v.size()) return w;
  Window out;
  out.start = w.start + static_cast<std::int64_t>(first);
  out.v.assign(w.v.begin() + static_cast<std::ptrdiff_t>(first), w.v.begin() + static_cast<std::ptrdiff_t>(last + 1));
  return out;
}

Window window_of(const Series& f) { return trim(Window{f.support_start(), f.values()}); }

// (Delta_h g)(x) = g(x) conj(g(x + h)), trimmed to its nonzero span.
Window difference(const Window& g, std::int64_t h) {
  const std::int64_t l = g.len();
  const std::int64_t lo = std::max<std::int64_t>(0, -h);
  const std::int64_t hi = std::min<std::int64_t>(l, l - h);
  Window out;
  if (hi <= lo) return out;
  out.start = g.start + lo;
  out.v.resize(static_cast<std::size_t>(hi - lo));
  for (std::int64_t k = lo; k < hi; ++k)
    out.v[static_cast<std::size_t>(k - lo)] = g.v[static_cast<std::size_t>(k)] * std::conj(g.v[static_cast<std::size_t>(k + h)]);
  return trim(std::move(out));
}

struct Partial {
  Complex value{};
  std::uint64_t count = 0;
};

Partial combine(const std::vector<Partial>& parts) {
  std::vector<Complex> values(parts.size());
  Partial out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    values[i] = parts[i].value;
    out.count += parts[i].count;
  }
  out.value = pairwise_sum(values);
  return out;
}

// ---- direct enumeration ----------------------------------------------------

// S_1(g) = sum_{x, y} g(x) conj(g(y)) as a literal double loop.
Partial oracle_base(const Window& g) {
  const std::size_t l = g.v.size();
  std::vector<Complex> rows(l);
  Partial out;
  for (std::size_t x = 0; x < l; ++x) {
    Complex row{};
    std::uint64_t cnt = 0;
    for (std::size_t y = 0; y < l; ++y) {
      row += g.v[x] * std::conj(g.v[y]);
      cnt += (g.v[x] != Complex{} && g.v[y] != Complex{}) ? 1 : 0;
    }
    rows[x] = row;
    out.count += cnt;
  }
  out.value = pairwise_sum(rows);
  return out;
}

Partial oracle_rec(const Window& g, int levels) {
  if (g.v.empty()) return {};
  if (levels == 0) return oracle_base(g);
  const std::int64_t l = g.len();
  std::vector<Partial> parts(static_cast<std::size_t>(2 * l - 1));
  for (std::int64_t h = -(l - 1); h <= l - 1; ++h)
    parts[static_cast<std::size_t>(h + l - 1)] = oracle_rec(difference(g, h), levels - 1);
  return combine(parts);
}

// ---- FFT engine --------------------------------------------------------------

// If every nonzero point lies in start + dZ with d > 1, keep only that coset.
Window compress(const Window& g) {
  std::int64_t d = 0;
  for (std::size_t k = 0; k < g.v.size(); ++k)
    if (g.v[k] != Complex{}) d = std::gcd(d, static_cast<std::int64_t>(k));
  if (d <= 1) return g;
  Window out;
  out.start = 0;
  for (std::size_t k = 0; k < g.v.size(); k += static_cast<std::size_t>(d)) out.v.push_back(g.v[k]);
  return out;
}

// sum_h (#{x : x, x+h in supp})^2 for a support pattern of length l.
std::uint64_t pair_count(const std::vector<char>& mask) {
  const std::size_t l = mask.size();
  if (std::all_of(mask.begin(), mask.end(), [](char c) { return c != 0; })) {
    // ac(h) = l - |h|
    unsigned __int128 total = static_cast<unsigned __int128>(l) * l;
    for (std::size_t k = 1; k < l; ++k) total += 2 * static_cast<unsigned __int128>(k) * k;
    return static_cast<std::uint64_t>(total);
  }
  std::vector<std::int64_t> ac(l, 0);
  if (l <= 256) {
    for (std::size_t h = 0; h < l; ++h)
      for (std::size_t x = 0; x + h < l; ++x) ac[h] += (mask[x] && mask[x + h]) ? 1 : 0;
  } else {
    const std::size_t p = next_pow2(2 * l);
    std::vector<Complex> buf(p);
    for (std::size_t k = 0; k < l; ++k) buf[k] = mask[k] ? 1.0 : 0.0;
    buf = dft(std::move(buf));
    for (auto& z : buf) z = std::norm(z);
    buf = dft(std::move(buf), true);
    for (std::size_t h = 0; h < l; ++h) ac[h] = std::llround(buf[h].real() / static_cast<double>(p));
  }
  unsigned __int128 total = static_cast<unsigned __int128>(ac[0]) * static_cast<unsigned __int128>(ac[0]);
  for (std::size_t h = 1; h < l; ++h) total += 2 * static_cast<unsigned __int128>(ac[h]) * static_cast<unsigned __int128>(ac[h]);
  return static_cast<std::uint64_t>(total);
}

Partial fast_base(const Window& raw) {
  if (raw.v.empty()) return {};
  const Window g = compress(raw);
  const std::size_t l = g.v.size();
  const std::size_t p = next_pow2(2 * l);
  std::vector<Complex> buf(p);
  std::copy(g.v.begin(), g.v.end(), buf.begin());
  buf = dft(std::move(buf));
  std::vector<double> fourth(p);
  for (std::size_t k = 0; k < p; ++k) {
    const double a = std::norm(buf[k]);
    fourth[k] = a * a;
  }
  Partial out;
  out.value = pairwise_sum(fourth) / static_cast<double>(p);
  std::vector<char> mask(l);
  for (std::size_t k = 0; k < l; ++k) mask[k] = g.v[k] != Complex{};
  out.count = pair_count(mask);
  return out;
}

Partial fast_rec(const Window& g, int levels) {
  if (g.v.empty()) return {};
  if (levels == 0) return fast_base(g);
  const std::int64_t l = g.len();
  std::vector<Partial> parts(static_cast<std::size_t>(2 * l - 1));
  for (std::int64_t h = -(l - 1); h <= l - 1; ++h)
    parts[static_cast<std::size_t>(h + l - 1)] = fast_rec(difference(g, h), levels - 1);
  return combine(parts);
}

// Splits the outermost difference level across threads; per-h results land
// in fixed slots, so the total is independent of the thread count.
template <typename Rec>
Partial run_levels(const Window& g, int levels, unsigned jobs, Rec rec) {
  if (g.v.empty()) return {};
  if (levels == 0) return rec(g, 0);
  const std::int64_t l = g.len();
  std::vector<Partial> parts(static_cast<std::size_t>(2 * l - 1));
  parallel_for(parts.size(), jobs, [&](std::size_t i) {
    const std::int64_t h = static_cast<std::int64_t>(i) - (l - 1);
    parts[i] = rec(difference(g, h), levels - 1);
  });
  return combine(parts);
}

void check_order(int s) {
  if (s < 1) throw std::invalid_argument("Gowers sums need s >= 1");
}

}  // namespace

double oracle_cost(std::int64_t width, int s) {
  double fact = 1.0;
  for (int k = 2; k <= s + 2; ++k) fact *= k;
  return std::pow(static_cast<double>(width), s + 2) * std::pow(2.0, s + 1) / fact;
}

ParallelepipedSum pp_sum_oracle(const Series& f, int s, unsigned jobs) {
  check_order(s);
  const Window g = window_of(f);
  const double cost = oracle_cost(g.len(), s);
  if (cost > kSumBudget)
    throw std::length_error("pp_sum_oracle: support width " + std::to_string(g.len()) + " at s=" + std::to_string(s) +
                            " needs ~" + std::to_string(cost) + " configurations (budget 1e9)");
  const Partial p = run_levels(g, s, jobs, oracle_rec);
  return {s + 1, p.value, p.count};
}

ParallelepipedSum pp_sum_fast(const Series& f, int s, unsigned jobs) {
  check_order(s);
  const Window g = compress(window_of(f));
  if (std::pow(static_cast<double>(g.len()), s) > kSumBudget)
    throw std::length_error("pp_sum_fast: support width " + std::to_string(g.len()) + " at s=" + std::to_string(s) +
                            " exceeds the budget");
  const Partial p = run_levels(g, s - 1, jobs, fast_rec);
  return {s + 1, p.value, p.count};
}

ParallelepipedSum pp_sum(const Series& f, int s, NormMethod method, unsigned jobs) {
  return method == NormMethod::oracle ? pp_sum_oracle(f, s, jobs) : pp_sum_fast(f, s, jobs);
}

double root_of_sum(const ParallelepipedSum& sum) {
  return std::pow(std::max(sum.value.real(), 0.0), 1.0 / std::ldexp(1.0, sum.order));
}

FiniteSet FiniteSet::progression(const Progression& p) {
  FiniteSet s;
  s.points_ = p.elements();
  std::sort(s.points_.begin(), s.points_.end());
  s.points_.erase(std::unique(s.points_.begin(), s.points_.end()), s.points_.end());
  s.description_ = "progression(" + p.to_string() + ")";
  return s;
}

FiniteSet FiniteSet::interval(Interval i) {
  FiniteSet s = progression(Progression{i.lo, 1, i.size()});
  s.description_ = "interval(" + i.to_string() + ")";
  return s;
}

FiniteSet FiniteSet::elements(std::vector<std::int64_t> xs) {
  FiniteSet s;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  s.points_ = std::move(xs);
  s.description_ = "set(" + std::to_string(s.points_.size()) + " points)";
  return s;
}

bool FiniteSet::contains(std::int64_t n) const { return std::binary_search(points_.begin(), points_.end(), n); }

Series FiniteSet::indicator() const {
  if (points_.empty()) return Series::bounded(0, {});
  std::vector<Complex> v(static_cast<std::size_t>(points_.back() - points_.front() + 1));
  for (auto x : points_) v[static_cast<std::size_t>(x - points_.front())] = 1.0;
  return Series::bounded(points_.front(), std::move(v), description_);
}

NormReport norm_subset(const Series& f, const FiniteSet& a, int s, NormMethod method, unsigned jobs) {
  if (a.empty()) throw std::invalid_argument("norm_subset: empty set");
  const Series ind = a.indicator();
  std::vector<Complex> v(ind.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    if (ind.values()[k] != Complex{}) v[k] = f(ind.support_start() + static_cast<std::int64_t>(k));
  const Series restricted(ind.support_start(), std::move(v));
  const auto num = pp_sum(restricted, s, method, jobs);
  const auto den = pp_sum(ind, s, method, jobs);
  NormReport r;
  r.order = s + 1;
  r.domain = a.description();
  r.method = method;
  r.numerator = num.value;
  r.denominator = den.value.real();
  r.value = std::pow(std::max(num.value.real(), 0.0) / r.denominator, 1.0 / std::ldexp(1.0, s + 1));
  return r;
}

namespace {

std::vector<Complex> cyclic_difference(const std::vector<Complex>& g, std::size_t h) {
  const std::size_t n = g.size();
  std::vector<Complex> out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = g[x] * std::conj(g[(x + h) % n]);
  return out;
}

Complex cyclic_base(const std::vector<Complex>& g) {
  const auto spec = dft(g);
  std::vector<double> fourth(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double a = std::norm(spec[k]);
    fourth[k] = a * a;
  }
  return pairwise_sum(fourth) / static_cast<double>(g.size());
}

Complex cyclic_rec(const std::vector<Complex>& g, int levels) {
  if (levels == 0) return cyclic_base(g);
  std::vector<Complex> parts(g.size());
  for (std::size_t h = 0; h < g.size(); ++h) parts[h] = cyclic_rec(cyclic_difference(g, h), levels - 1);
  return pairwise_sum(parts);
}

}  // namespace

NormReport norm_cyclic(const std::vector<Complex>& f, int s, unsigned jobs) {
  check_order(s);
  if (f.empty()) throw std::invalid_argument("norm_cyclic: N must be positive");
  const std::size_t n = f.size();
  if (std::pow(static_cast<double>(n), s) > kSumBudget) throw std::length_error("norm_cyclic: N^s exceeds the budget");
  Complex total;
  if (s == 1) {
    total = cyclic_base(f);
  } else {
    std::vector<Complex> parts(n);
    parallel_for(n, jobs, [&](std::size_t h) { parts[h] = cyclic_rec(cyclic_difference(f, h), s - 2); });
    total = pairwise_sum(parts);
  }
  NormReport r;
  r.order = s + 1;
  r.domain = "Z_" + std::to_string(n);
  r.method = NormMethod::fast;
  r.numerator = total;
  r.denominator = std::pow(static_cast<double>(n), s + 2);
  r.value = std::pow(std::max(total.real(), 0.0) / r.denominator, 1.0 / std::ldexp(1.0, s + 1));
  return r;
}

Series dlvp_kernel(double eps, std::int64_t n) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("dlvp_kernel: eps must lie in (0, 1]");
  if (n < 1 || eps * static_cast<double>(n) < 4.0) throw std::invalid_argument("dlvp_kernel: need eps N >= 4");
  const double inner = eps * static_cast<double>(n) / 2.0;
  const double outer = (1.0 + 1.0 / std::sqrt(static_cast<double>(n))) * inner;
  const auto reach = static_cast<std::int64_t>(std::floor(outer));
  std::vector<Complex> v(static_cast<std::size_t>(2 * reach + 1));
  for (std::int64_t x = -reach; x <= reach; ++x) {
    const double ax = static_cast<double>(x < 0 ? -x : x);
    double y;
    if (ax <= inner) y = 1.0;
    else if (ax > outer) y = 0.0;
    else y = (outer - ax) / (outer - inner);
    v[static_cast<std::size_t>(x + reach)] = y;
  }
  return Series::bounded(-reach, std::move(v), "dlvp_kernel");
}

Series dilated_smoother(double eps, std::int64_t n, std::int64_t q, std::int64_t c) {
  if (q < 1) throw std::invalid_argument("dilated_smoother: q must be positive");
  const Series k = dlvp_kernel(eps, n);
  const std::int64_t lo = c + q * k.support_start();
  std::vector<Complex> v(static_cast<std::size_t>(q * (static_cast<std::int64_t>(k.size()) - 1) + 1));
  for (std::size_t j = 0; j < k.size(); ++j) v[j * static_cast<std::size_t>(q)] = k.values()[j];
  return Series::bounded(lo, std::move(v), "dilated_smoother");
}

double fourier_l1(const Series& f, std::size_t m) {
  if (m == 0 || f.size() > m) throw std::invalid_argument("fourier_l1: window longer than the group");
  std::vector<Complex> buf(m);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::int64_t x = f.support_start() + static_cast<std::int64_t>(k);
    buf[static_cast<std::size_t>(floor_mod(x, static_cast<std::int64_t>(m)))] += f.values()[k];
  }
  buf = dft(std::move(buf));
  std::vector<double> mags(m);
  for (std::size_t k = 0; k < m; ++k) mags[k] = std::abs(buf[k]);
  return pairwise_sum(mags) / static_cast<double>(m);
}

std::size_t dlvp_embedding_size(double eps, std::int64_t n) {
  const double need = 4.0 * (1.0 + 1.0 / std::sqrt(static_cast<double>(n))) * eps * static_cast<double>(n);
  return next_pow2(static_cast<std::size_t>(std::ceil(need)));
}

bool within_tolerance(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

bool within_tolerance(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace gowerslab
