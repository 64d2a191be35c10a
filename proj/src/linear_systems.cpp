#include "gowerslab/linear_systems.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace gowerslab {

LinearForm::LinearForm(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("LinearForm: dimension must be at least 1");
  if (std::all_of(coeffs_.begin(), coeffs_.end(), [](std::int64_t c) { return c == 0; }))
    throw std::invalid_argument("LinearForm: form must be nonzero");
}

std::int64_t LinearForm::max_abs_coefficient() const {
  std::int64_t m = 0;
  for (auto c : coeffs_) m = std::max(m, c < 0 ? -c : c);
  return m;
}

BigInt LinearForm::evaluate(std::span<const std::int64_t> point) const {
  if (point.size() != coeffs_.size())
    throw std::invalid_argument("LinearForm::evaluate: point has length " + std::to_string(point.size()) +
                                ", form has dimension " + std::to_string(coeffs_.size()));
  BigInt v = 0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    BigInt term = static_cast<long>(coeffs_[j]);
    term *= static_cast<long>(point[j]);
    v += term;
  }
  return v;
}

LinearForm LinearForm::scaled(std::int64_t factor) const {
  std::vector<std::int64_t> c(coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = checked_mul(coeffs_[j], factor);
  return LinearForm(std::move(c));
}

BigInt evaluate(const LinearForm& form, std::span<const std::int64_t> point) { return form.evaluate(point); }

LinearSystem::LinearSystem(std::vector<LinearForm> forms) : forms_(std::move(forms)) {
  if (forms_.empty()) throw std::invalid_argument("LinearSystem: need at least one form");
  const std::size_t d = forms_.front().dimension();
  for (const auto& f : forms_)
    if (f.dimension() != d) throw std::invalid_argument("LinearSystem: forms have different dimensions");
}

LinearSystem LinearSystem::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  std::vector<LinearForm> forms;
  forms.reserve(rows.size());
  for (const auto& r : rows) forms.emplace_back(r);
  return LinearSystem(std::move(forms));
}

std::int64_t LinearSystem::max_abs_coefficient() const {
  std::int64_t m = 0;
  for (const auto& f : forms_) m = std::max(m, f.max_abs_coefficient());
  return m;
}

IntMatrix LinearSystem::coefficient_matrix() const {
  IntMatrix m(size(), dimension());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < dimension(); ++j) m(i, j) = static_cast<long>(forms_[i].coefficient(j));
  return m;
}

std::vector<std::vector<std::int64_t>> LinearSystem::rows() const {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& f : forms_) out.emplace_back(f.coefficients().begin(), f.coefficients().end());
  return out;
}

IntVector LinearSystem::evaluate(std::span<const std::int64_t> point) const {
  IntVector v;
  v.reserve(size());
  for (const auto& f : forms_) v.push_back(f.evaluate(point));
  return v;
}

LinearSystem arithmetic_progression_system(int k) {
  if (k < 1) throw std::invalid_argument("arithmetic_progression_system: k must be positive");
  std::vector<std::vector<std::int64_t>> rows;
  for (int i = 0; i < k; ++i) rows.push_back({1, i});
  return LinearSystem::from_rows(rows);
}

namespace {

// Exponent vectors of the degree-k monomials in `dim` variables, lex order
// with the first exponent descending.
std::vector<std::vector<int>> monomials(std::size_t dim, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(dim, 0);
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == dim) {
      alpha[pos] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      alpha[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  rec(rec, 0, k);
  return out;
}

BigInt factorial(int n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

}  // namespace

IntMatrix power_matrix(const LinearSystem& system, int k) {
  if (k < 1) throw std::invalid_argument("power_matrix: degree must be positive");
  const auto monos = monomials(system.dimension(), k);
  IntMatrix m(system.size(), monos.size());
  const BigInt kfact = factorial(k);
  for (std::size_t c = 0; c < monos.size(); ++c) {
    BigInt multinomial = kfact;
    for (int e : monos[c]) mpz_divexact(multinomial.get_mpz_t(), multinomial.get_mpz_t(), factorial(e).get_mpz_t());
    for (std::size_t i = 0; i < system.size(); ++i) {
      BigInt term = multinomial;
      for (std::size_t j = 0; j < monos[c].size(); ++j) {
        if (monos[c][j] == 0) continue;
        BigInt p;
        const BigInt base = static_cast<long>(system.form(i).coefficient(j));
        mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(monos[c][j]));
        term *= p;
      }
      m(i, c) = term;
    }
  }
  return m;
}

PowerSpan power_span(const LinearSystem& system, int k) {
  // Column space of the t x M power matrix = row space of its transpose.
  return PowerSpan{k, row_space_basis(power_matrix(system, k).transposed())};
}

std::vector<IntVector> power_relations(const LinearSystem& system, int k) {
  return kernel_basis(power_matrix(system, k).transposed());
}

FlagReport::FlagReport(int kmax, std::vector<char> containment, std::optional<std::pair<int, int>> first_violation)
    : kmax_(kmax), containment_(std::move(containment)), first_violation_(first_violation) {}

bool FlagReport::contains(int k, int l) const {
  if (k < 1 || l <= k || l > kmax_) throw std::out_of_range("FlagReport::contains: need 1 <= k < l <= kmax");
  return containment_[static_cast<std::size_t>(k * (kmax_ + 1) + l)] != 0;
}

FlagReport is_flag(const LinearSystem& system, int kmax) {
  if (kmax < 2) throw std::invalid_argument("is_flag: kmax must be at least 2");
  std::vector<PowerSpan> spans;
  spans.reserve(static_cast<std::size_t>(kmax));
  for (int k = 1; k <= kmax; ++k) spans.push_back(power_span(system, k));

  const std::size_t t = system.size();
  std::vector<char> containment(static_cast<std::size_t>((kmax + 1) * (kmax + 1)), 0);
  std::optional<std::pair<int, int>> first;
  for (int k = 1; k < kmax; ++k) {
    for (int l = k + 1; l <= kmax; ++l) {
      const auto& lower = spans[static_cast<std::size_t>(k - 1)].basis;
      const auto& upper = spans[static_cast<std::size_t>(l - 1)].basis;
      bool inside = true;
      if (upper.size() < t) {
        std::vector<IntVector> stacked = upper;
        stacked.insert(stacked.end(), lower.begin(), lower.end());
        inside = stacked.empty() || rank(IntMatrix::from_rows(stacked, t)) == upper.size();
      }
      containment[static_cast<std::size_t>(k * (kmax + 1) + l)] = inside ? 1 : 0;
      if (!inside && !first) first = std::make_pair(k, l);
    }
  }
  return FlagReport(kmax, std::move(containment), first);
}

std::optional<int> independence_degree(const LinearSystem& system, int smax) {
  if (smax < 1) throw std::invalid_argument("independence_degree: smax must be positive");
  for (int s = 1; s <= smax; ++s)
    if (power_span(system, s + 1).dim() == system.size()) return s;
  return std::nullopt;
}

int default_flag_degree(const LinearSystem& system) {
  const int t = static_cast<int>(system.size());
  const auto s = independence_degree(system, std::max(t, 1));
  return std::max(s ? *s + 1 : 2, 2 * t);
}

bool has_proportional_pair(const LinearSystem& system) {
  const std::size_t d = system.dimension();
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (std::size_t j = i + 1; j < system.size(); ++j) {
      // rank 1 iff every 2x2 minor vanishes
      bool proportional = true;
      for (std::size_t a = 0; a < d && proportional; ++a)
        for (std::size_t b = a + 1; b < d && proportional; ++b) {
          const __int128 lhs = static_cast<__int128>(system.form(i).coefficient(a)) * system.form(j).coefficient(b);
          const __int128 rhs = static_cast<__int128>(system.form(i).coefficient(b)) * system.form(j).coefficient(a);
          proportional = lhs == rhs;
        }
      if (proportional) return true;
    }
  }
  return false;
}

int cs_complexity(const LinearSystem& system) {
  const std::size_t t = system.size();
  if (t < 2) throw std::invalid_argument("cs_complexity: need at least two forms");
  if (t > kMaxComplexitySystemSize)
    throw std::length_error("cs_complexity: systems with more than " + std::to_string(kMaxComplexitySystemSize) +
                            " forms are unsupported");
  if (has_proportional_pair(system))
    throw std::domain_error("cs_complexity: proportional forms have no finite Cauchy-Schwarz complexity");

  const std::size_t d = system.dimension();
  auto coeffs = [&](std::size_t i) {
    IntVector v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = static_cast<long>(system.form(i).coefficient(j));
    return v;
  };

  int worst = 0;
  const std::size_t m = t - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < t; ++j)
      if (j != i) others.push_back(j);
    const IntVector target = coeffs(i);

    std::vector<char> allowed(full + 1, 0);
    allowed[0] = 1;
    for (std::size_t mask = 1; mask <= full; ++mask) {
      std::vector<IntVector> cls;
      for (std::size_t b = 0; b < m; ++b)
        if (mask & (std::size_t{1} << b)) cls.push_back(coeffs(others[b]));
      allowed[mask] = in_span(cls, target) ? 0 : 1;
    }

    constexpr int kInf = std::numeric_limits<int>::max() / 2;
    std::vector<int> classes(full + 1, kInf);
    classes[0] = 0;
    for (std::size_t mask = 1; mask <= full; ++mask) {
      const std::size_t low = mask & (~mask + 1);
      const std::size_t rest = mask ^ low;
      // submasks of `rest`, each joined with the lowest bit
      for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
        const std::size_t cls = sub | low;
        if (allowed[cls] && classes[mask ^ cls] + 1 < classes[mask]) classes[mask] = classes[mask ^ cls] + 1;
        if (sub == 0) break;
      }
    }
    worst = std::max(worst, classes[full] - 1);
  }
  return worst;
}

bool is_translation_invariant(const LinearSystem& system) {
  const std::size_t t = system.size();
  auto basis = power_span(system, 1).basis;
  return in_span(basis, IntVector(t, BigInt(1)));
}

std::int64_t Flagification::max_abs_scalar() const {
  std::int64_t m = 0;
  for (auto x : a) m = std::max(m, x < 0 ? -x : x);
  return m;
}

Flagification flagify_at(const LinearSystem& system, std::span<const std::int64_t> witness) {
  const std::size_t t = system.size();
  if (witness.size() != system.dimension()) throw std::invalid_argument("flagify_at: witness has wrong dimension");
  std::vector<std::int64_t> b(t);
  for (std::size_t i = 0; i < t; ++i) {
    const BigInt v = system.form(i).evaluate(witness);
    if (v == 0) throw std::invalid_argument("flagify_at: witness lies on the kernel of form " + std::to_string(i));
    if (!v.fits_slong_p()) throw std::overflow_error("flagify_at: form value exceeds int64");
    b[i] = v.get_si();
  }
  IntVector raw(t);
  for (std::size_t i = 0; i < t; ++i) {
    BigInt p = 1;
    for (std::size_t j = 0; j < t; ++j)
      if (j != i) p *= static_cast<long>(b[j]);
    raw[i] = p;
  }
  raw = make_primitive(std::move(raw));

  std::vector<std::int64_t> a(t);
  std::vector<LinearForm> rescaled;
  for (std::size_t i = 0; i < t; ++i) {
    if (!raw[i].fits_slong_p()) throw std::overflow_error("flagify_at: scalar exceeds int64");
    a[i] = raw[i].get_si();
    rescaled.push_back(system.form(i).scaled(a[i]));
  }
  Flagification out{Point(witness.begin(), witness.end()), std::move(b), std::move(a),
                    LinearSystem(std::move(rescaled))};

  for (std::size_t i = 1; i < t; ++i)
    if (checked_mul(out.a[i], out.b[i]) != out.common_value())
      throw std::logic_error("flagify_at: products a_i b_i are not constant");
  if (!is_translation_invariant(out.rescaled))
    throw std::logic_error("flagify_at: rescaled system is not translation invariant");
  return out;
}

Flagification flagify(const LinearSystem& system, int search_bound) {
  if (search_bound < 0) throw std::invalid_argument("flagify: search bound must be nonnegative");
  const std::size_t d = system.dimension();
  for (std::int64_t r = 0; r <= search_bound; ++r) {
    std::vector<std::int64_t> order{0};
    for (std::int64_t v = 1; v <= r; ++v) {
      order.push_back(v);
      order.push_back(-v);
    }
    // Odometer over order^d; the last coordinate turns fastest.
    const std::size_t base = order.size();
    std::size_t total = 1;
    for (std::size_t j = 0; j < d; ++j) total *= base;
    Point x(d, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      std::int64_t sup = 0;
      for (std::size_t j = d; j-- > 0;) {
        x[j] = order[rest % base];
        rest /= base;
        sup = std::max(sup, x[j] < 0 ? -x[j] : x[j]);
      }
      if (sup != r) continue;
      const bool all_nonzero = std::all_of(system.forms().begin(), system.forms().end(),
                                           [&](const LinearForm& f) { return f.evaluate(x) != 0; });
      if (all_nonzero) return flagify_at(system, x);
    }
  }
  throw std::runtime_error("flagify: no point with all forms nonzero within sup-norm " +
                           std::to_string(search_bound));
}

std::optional<LinearSystem> search_non_flag_system(Rng& rng, const NonFlagSearch& options) {
  for (std::size_t attempt = 0; attempt < options.attempts; ++attempt) {
    const auto t = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(options.min_forms), static_cast<std::int64_t>(options.max_forms)));
    std::vector<std::vector<std::int64_t>> rows(t, std::vector<std::int64_t>(options.dimension));
    bool ok = true;
    for (auto& r : rows) {
      bool nonzero = false;
      for (auto& c : r) {
        c = rng.uniform_int(-options.max_coeff, options.max_coeff);
        nonzero = nonzero || c != 0;
      }
      ok = ok && nonzero;
    }
    if (!ok) continue;
    LinearSystem sys = LinearSystem::from_rows(rows);
    if (has_proportional_pair(sys)) continue;
    if (!is_flag(sys, options.kmax).is_flag()) return sys;
  }
  return std::nullopt;
}

}  // namespace gowerslab
