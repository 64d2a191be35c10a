#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gowerslab/averages.hpp"
#include "gowerslab/gowers.hpp"
#include "gowerslab/io.hpp"
#include "gowerslab/linear_systems.hpp"
#include "gowerslab/random.hpp"
#include "gowerslab/regions.hpp"
#include "gowerslab/summation.hpp"
#include "gowerslab/workbench.hpp"

namespace gowerslab {

namespace {

// Builds one case record. In the case named by --inject-fault every bound's
// reference value is corrupted before the comparison, so the harness must
// report that case as failing.
class CaseBuilder {
 public:
  CaseBuilder(std::string id, bool faulted) : faulted_(faulted) { rec_.id = std::move(id); }

  nlohmann::json& inputs() { return rec_.inputs; }
  nlohmann::json& values() { return rec_.values; }

  void identity(const std::string& name, double lhs, double rhs, double tol, const std::string& provenance) {
    if (faulted_) rhs += 1.0 + std::abs(rhs);
    push({name, lhs, rhs, tol, "identity", provenance, std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs))});
  }

  void upper(const std::string& name, double lhs, double rhs, double tol, const std::string& provenance) {
    if (faulted_) rhs = lhs - 1.0 - std::abs(lhs);
    push({name, lhs, rhs, tol, "upper", provenance, lhs <= rhs + tol * std::max(1.0, std::abs(rhs))});
  }

  void exact(const std::string& name, double lhs, double rhs, const std::string& provenance) {
    if (faulted_) rhs += 1.0;
    push({name, lhs, rhs, 0.0, "flag", provenance, lhs == rhs});
  }

  void check(const std::string& name, bool ok, const std::string& provenance) {
    exact(name, ok ? 1.0 : 0.0, 1.0, provenance);
  }

  CaseRecord take() { return std::move(rec_); }

 private:
  void push(Bound b) { rec_.bounds.push_back(std::move(b)); }
  CaseRecord rec_;
  bool faulted_;
};

struct Context {
  const ExperimentSpec& spec;
  double tol;
  unsigned jobs;

  bool faulted(const std::string& id) const { return spec.inject_fault && *spec.inject_fault == id; }
  std::uint64_t seed(std::uint64_t stream, std::uint64_t index) const {
    return derive_seed(derive_seed(spec.seed, stream), index);
  }
};

template <typename T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback) {
  return given.empty() ? fallback : given;
}

std::vector<CaseRecord> run_cases(std::size_t n, unsigned jobs, const std::function<CaseRecord(std::size_t)>& make) {
  std::vector<CaseRecord> out(n);
  parallel_for(n, jobs, [&](std::size_t i) { out[i] = make(i); });
  return out;
}

std::string short_double(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

std::string padded(std::size_t i, int width = 3) {
  std::string s = std::to_string(i);
  return std::string(static_cast<std::size_t>(std::max<int>(0, width - static_cast<int>(s.size()))), '0') + s;
}

nlohmann::json cplx(Complex z) { return {z.real(), z.imag()}; }

// Corpus variants: 0 random modulus in [0,1] and phase (about 10% zeros),
// 1 random unimodular, 2 random +-1.
Series corpus_function(std::uint64_t seed, Interval w, int variant) {
  if (variant == 1 || variant == 2) {
    GeneratorSpec g;
    g.kind = variant == 1 ? GeneratorKind::random_unimodular : GeneratorKind::random_pm1;
    g.seed = seed;
    return generate(g, w);
  }
  Rng rng(seed);
  std::vector<Complex> v(static_cast<std::size_t>(w.size()));
  for (auto& x : v) {
    const double r = rng.uniform01() < 0.1 ? 0.0 : rng.uniform01();
    x = r * e(rng.uniform01());
  }
  return Series::bounded(w.lo, std::move(v), "random_bounded");
}

Series phase_series(Interval w, const std::function<long double(std::int64_t)>& phase, std::string label) {
  std::vector<Complex> v;
  v.reserve(static_cast<std::size_t>(w.size()));
  for (std::int64_t n = w.lo; n <= w.hi; ++n) v.push_back(e(phase(n)));
  return Series::bounded(w.lo, std::move(v), std::move(label));
}

LinearSystem random_system(Rng& rng, std::size_t d, std::size_t t, std::int64_t max_coeff) {
  std::vector<std::vector<std::int64_t>> rows;
  while (rows.size() < t) {
    std::vector<std::int64_t> r(d);
    bool zero = true;
    for (auto& c : r) {
      c = rng.uniform_int(-max_coeff, max_coeff);
      zero = zero && c == 0;
    }
    if (!zero) rows.push_back(std::move(r));
  }
  return LinearSystem::from_rows(rows);
}

// psi_i = lambda x_1 + phi_i(x_2, ..., x_D), then an integer change of
// variables with determinant 1 to hide the invariant direction.
LinearSystem random_translation_invariant_system(Rng& rng) {
  const std::size_t d = static_cast<std::size_t>(rng.uniform_int(2, 3));
  const std::size_t t = static_cast<std::size_t>(rng.uniform_int(3, 5));
  const std::int64_t lambda = rng.uniform_int(1, 2);
  std::vector<std::vector<std::int64_t>> rows(t, std::vector<std::int64_t>(d));
  for (auto& r : rows) {
    r[0] = lambda;
    for (std::size_t j = 1; j < d; ++j) r[j] = rng.uniform_int(-3, 3);
  }
  for (int step = 0; step < 3; ++step) {
    const std::size_t a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(d) - 1));
    std::size_t b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(d) - 2));
    if (b >= a) ++b;
    const std::int64_t m = rng.uniform_int(-1, 1);
    for (auto& r : rows) r[b] += m * r[a];  // column operation
  }
  return LinearSystem::from_rows(rows);
}

double percentile_nearest_rank(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(x.size())));
  return x[std::max<std::size_t>(rank, 1) - 1];
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

nlohmann::json load_shipped_nonflag(const ExperimentSpec& spec, std::string* bytes) {
  const auto path = spec.data_dir / "nonflag_system.json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing input file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  if (bytes) *bytes = ss.str();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& err) {
    throw std::runtime_error("'" + path.string() + "' is not valid JSON: " + err.what());
  }
}

// ---------------------------------------------------------------------------

void engine_equivalence(const Context& ctx, Report& r) {
  const auto sizes = or_default<std::int64_t>(ctx.spec.sizes, {16, 32, 64});
  const auto orders = or_default<int>(ctx.spec.orders, {1, 2, 3});
  const std::size_t per = ctx.spec.cases.value_or(50);
  struct Item {
    std::int64_t n;
    int s;
    std::size_t i;
  };
  std::vector<Item> items;
  for (auto n : sizes)
    for (int s : orders)
      for (std::size_t i = 0; i < per; ++i) items.push_back({n, s, i});
  r.parameters = {{"sizes", sizes}, {"orders", orders}, {"cases_per_config", per}, {"window", "[1, N]"}};
  r.cases = run_cases(items.size(), ctx.jobs, [&](std::size_t k) {
    const auto& it = items[k];
    const std::string id = "N" + std::to_string(it.n) + "-s" + std::to_string(it.s) + "-" + padded(it.i);
    CaseBuilder cb(id, ctx.faulted(id));
    const int variant = static_cast<int>(it.i % 3);
    const Series f = corpus_function(ctx.seed(1, k), {1, it.n}, variant);
    const auto oracle = pp_sum_oracle(f, it.s, 1);
    const auto fast = pp_sum_fast(f, it.s, 1);
    cb.inputs() = {{"N", it.n}, {"s", it.s}, {"variant", f.label()}, {"seed", ctx.seed(1, k)}};
    cb.values() = {{"oracle", cplx(oracle.value)},
                   {"fast", cplx(fast.value)},
                   {"config_count", oracle.config_count},
                   {"norm", root_of_sum(oracle)}};
    const double rel = std::abs(fast.value - oracle.value) / std::max(1.0, std::abs(oracle.value));
    cb.upper("relative_error", rel, 0.0, ctx.tol, "oracle");
    cb.exact("config_count", static_cast<double>(fast.config_count), static_cast<double>(oracle.config_count), "oracle");
    cb.upper("nonnegative", -oracle.value.real(), 0.0, ctx.tol, "theorem");
    return cb.take();
  });
}

void phase_invariance(const Context& ctx, Report& r) {
  const std::int64_t n = or_default<std::int64_t>(ctx.spec.sizes, {64}).front();
  const auto orders = or_default<int>(ctx.spec.orders, {1, 2});
  const std::size_t nf = ctx.spec.cases.value_or(10);
  constexpr std::size_t kThetas = 20;
  r.parameters = {{"N", n}, {"orders", orders}, {"functions", nf}, {"thetas", kThetas}, {"domain", "[1, N]"}};
  const auto domain = FiniteSet::interval({1, n});
  r.cases = run_cases(orders.size() * nf, ctx.jobs, [&](std::size_t k) {
    const int s = orders[k / nf];
    const std::size_t j = k % nf;
    const std::string id = "s" + std::to_string(s) + "-f" + padded(j, 2);
    CaseBuilder cb(id, ctx.faulted(id));
    const Series f = corpus_function(ctx.seed(2, j), {1, n}, static_cast<int>(j % 3));
    const double base = norm_subset(f, domain, s, NormMethod::fast, 1).value;
    Rng rng(ctx.seed(3, j));
    nlohmann::json thetas = nlohmann::json::array(), norms = nlohmann::json::array();
    for (std::size_t i = 0; i < kThetas; ++i) {
      const double theta = rng.uniform01();
      const double v = norm_subset(modulate(f, theta), domain, s, NormMethod::fast, 1).value;
      thetas.push_back(theta);
      norms.push_back(v);
      cb.upper("theta" + padded(i, 2), std::abs(v - base), 0.0, ctx.tol, "theorem");
    }
    cb.inputs() = {{"N", n}, {"s", s}, {"variant", f.label()}, {"thetas", thetas}};
    cb.values() = {{"norm", base}, {"modulated_norms", norms}};
    return cb.take();
  });
}

void freiman_rescale(const Context& ctx, Report& r) {
  const std::int64_t n = or_default<std::int64_t>(ctx.spec.sizes, {32}).front();
  const auto orders = or_default<int>(ctx.spec.orders, {1, 2});
  const std::vector<std::int64_t> scalars = {1, 2, 3, -2};
  const std::int64_t a = 3;
  const std::size_t nf = ctx.spec.cases.value_or(3);
  r.parameters = {{"N", n}, {"a", a}, {"a_i", scalars}, {"orders", orders}, {"functions", nf}};
  const std::size_t total = scalars.size() * orders.size() * nf;
  r.cases = run_cases(total, ctx.jobs, [&](std::size_t k) {
    const std::int64_t ai = scalars[k / (orders.size() * nf)];
    const int s = orders[(k / nf) % orders.size()];
    const std::size_t j = k % nf;
    const std::string id = "a" + std::to_string(ai) + "-s" + std::to_string(s) + "-f" + std::to_string(j);
    CaseBuilder cb(id, ctx.faulted(id));
    const Series f = corpus_function(ctx.seed(4, j), {-n, n}, static_cast<int>(j % 3));
    const Series g = dilate_embed(f, ai, a, n);
    const auto image = FiniteSet::progression({a * n - ai * n, ai, 2 * n + 1});
    const double lhs = norm_subset(g, image, s, NormMethod::oracle, 1).value;
    const double lhs_fast = norm_subset(g, image, s, NormMethod::fast, 1).value;
    const double rhs = norm_subset(f, FiniteSet::interval({-n, n}), s, NormMethod::oracle, 1).value;
    cb.inputs() = {{"N", n}, {"a_i", ai}, {"a", a}, {"s", s}, {"variant", f.label()}};
    cb.values() = {{"rescaled_norm", lhs}, {"rescaled_norm_fast", lhs_fast}, {"norm", rhs}};
    cb.upper("oracle", std::abs(lhs - rhs), 0.0, ctx.tol, "identity");
    cb.upper("fast", std::abs(lhs_fast - rhs), 0.0, ctx.tol, "identity");
    return cb.take();
  });
}

void emain_identity(const Context& ctx, Report& r) {
  const auto sizes = or_default<std::int64_t>(ctx.spec.sizes, {16, 32});
  const std::size_t count = ctx.spec.cases.value_or(20);
  const std::vector<std::pair<std::string, LinearSystem>> fixed = {
      {"3-AP", arithmetic_progression_system(3)},
      {"4-AP", arithmetic_progression_system(4)},
      {"x,2y,x+y", LinearSystem::from_rows({{1, 0}, {0, 2}, {1, 1}})},
      {"x+y,x-y,2x+3y", LinearSystem::from_rows({{1, 1}, {1, -1}, {2, 3}})},
      {"x,y,z,x+y+z", LinearSystem::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}})},
  };
  const std::size_t kinds = fixed.size() + 1;
  r.parameters = {{"sizes", sizes}, {"instances", count}};
  r.cases = run_cases(count, ctx.jobs, [&](std::size_t i) {
    const std::int64_t n = sizes[i % sizes.size()];
    std::string name;
    LinearSystem system = arithmetic_progression_system(3);
    if (i % kinds < fixed.size()) {
      name = fixed[i % kinds].first;
      system = fixed[i % kinds].second;
    } else {
      Rng rng(ctx.seed(5, i));
      name = "random";
      system = random_system(rng, 2, static_cast<std::size_t>(rng.uniform_int(3, 4)), 3);
    }
    const std::string id = "i" + padded(i, 2) + "-N" + std::to_string(n);
    CaseBuilder cb(id, ctx.faulted(id));
    std::vector<Series> fs;
    for (std::size_t k = 0; k < system.size(); ++k)
      fs.push_back(corpus_function(ctx.seed(6, i * 8 + k), {-n, n}, static_cast<int>((i + k) % 3)));
    const auto rep = reduction_pipeline(system, fs, n, ctx.tol, 1);
    const auto& tr = *rep.trace;
    const bool ti = is_translation_invariant(system);
    cb.inputs() = {{"N", n}, {"system_name", name}, {"system", system_to_json(system)}, {"translation_invariant", ti}};
    cb.values() = {{"witness", tr.flag.witness},
                   {"a", tr.flag.a},
                   {"region_size", tr.region_size},
                   {"original", cplx(tr.original)},
                   {"rescaled", cplx(tr.rescaled)},
                   {"box_average", cplx(tr.box_average)},
                   {"box_to_region", tr.box_to_region},
                   {"boundary_term", tr.boundary_term}};
    cb.upper("substitution", tr.identity_error, 0.0, ctx.tol, "identity");
    cb.upper("box_bound", std::abs(tr.box_average), std::abs(tr.rescaled) / tr.box_to_region + tr.boundary_term, ctx.tol,
             "identity");
    cb.check("rescaled_translation_invariant", is_translation_invariant(tr.flag.rescaled), "theorem");
    return cb.take();
  });
  std::size_t non_ti = 0;
  for (const auto& c : r.cases) non_ti += c.inputs["translation_invariant"].get<bool>() ? 0 : 1;
  CaseBuilder cov("coverage", ctx.faulted("coverage"));
  cov.values() = {{"non_translation_invariant", non_ti}};
  cov.upper("has_non_translation_invariant", 1.0, static_cast<double>(non_ti), 0.0, "identity");
  r.cases.push_back(cov.take());
}

void flag_algebra(const Context& ctx, Report& r, std::string* data_bytes) {
  const std::size_t random_count = ctx.spec.cases.value_or(100);
  const auto shipped = load_shipped_nonflag(ctx.spec, data_bytes);
  r.parameters = {{"ap_lengths", {3, 4, 5}}, {"ap_kmax", 6}, {"random_systems", random_count}, {"random_kmax", 5}};
  for (int k = 3; k <= 5; ++k) {
    const std::string id = std::to_string(k) + "-AP";
    CaseBuilder cb(id, ctx.faulted(id));
    const auto sys = arithmetic_progression_system(k);
    const auto flag = is_flag(sys, 6);
    const auto s = independence_degree(sys, 6);
    cb.inputs() = {{"system", system_to_json(sys)}};
    cb.values() = {{"flag", flag.is_flag()}, {"independence_degree", s ? nlohmann::json(*s) : nlohmann::json(nullptr)}};
    cb.check("flag_up_to_6", flag.is_flag(), "theorem");
    cb.exact("independence_degree", s ? *s : -1, k - 2, "theorem");
    r.cases.push_back(cb.take());
  }
  auto random_cases = run_cases(random_count, ctx.jobs, [&](std::size_t i) {
    Rng rng(ctx.seed(7, i));
    const auto sys = random_translation_invariant_system(rng);
    const std::string id = "ti-" + padded(i);
    CaseBuilder cb(id, ctx.faulted(id));
    cb.inputs() = {{"system", system_to_json(sys)}};
    const bool flag = is_flag(sys, 5).is_flag();
    cb.values() = {{"flag", flag}};
    cb.check("translation_invariant", is_translation_invariant(sys), "identity");
    cb.check("flag_up_to_5", flag, "theorem");
    return cb.take();
  });
  for (auto& c : random_cases) r.cases.push_back(std::move(c));

  const std::string id = "nonflag-shipped";
  CaseBuilder cb(id, ctx.faulted(id));
  const auto sys = system_from_json(shipped);
  const auto& search = shipped.at("search");
  NonFlagSearch opts;
  opts.dimension = search.at("dimension").get<std::size_t>();
  opts.min_forms = search.at("min_forms").get<std::size_t>();
  opts.max_forms = search.at("max_forms").get<std::size_t>();
  opts.max_coeff = search.at("max_coeff").get<std::int64_t>();
  opts.kmax = search.at("kmax").get<int>();
  opts.attempts = search.at("attempts").get<std::size_t>();
  Rng rng(search.at("seed").get<std::uint64_t>());
  const auto found = search_non_flag_system(rng, opts);
  const auto expected = shipped.at("first_violation").get<std::pair<int, int>>();
  cb.inputs() = {{"system", system_to_json(sys)}, {"search", search}};
  nlohmann::json violations = nlohmann::json::array();
  for (int kmax = opts.kmax; kmax <= 8; ++kmax) {
    const auto fr = is_flag(sys, kmax);
    const auto v = fr.first_violation();
    violations.push_back(v ? nlohmann::json{v->first, v->second} : nlohmann::json(nullptr));
    cb.check("violation_k_kmax" + std::to_string(kmax), v && v->first == expected.first, "oracle");
    cb.check("violation_l_kmax" + std::to_string(kmax), v && v->second == expected.second, "oracle");
  }
  const auto s = independence_degree(sys, 6);
  cb.values() = {{"first_violation_by_kmax", violations},
                 {"independence_degree", s ? nlohmann::json(*s) : nlohmann::json(nullptr)}};
  cb.check("search_reproduces", found && *found == sys, "oracle");
  cb.exact("independence_degree", s ? *s : -1, shipped.at("independence_degree").get<int>(), "oracle");
  r.cases.push_back(cb.take());
}

void flagify_suite(const Context& ctx, Report& r) {
  const std::size_t count = ctx.spec.cases.value_or(100);
  r.parameters = {{"systems", count}, {"max_forms", 5}, {"max_dimension", 3}, {"max_coeff", 3}};
  r.cases = run_cases(count, ctx.jobs, [&](std::size_t i) {
    Rng rng(ctx.seed(8, i));
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const auto t = static_cast<std::size_t>(rng.uniform_int(2, 5));
    const auto sys = random_system(rng, d, t, 3);
    const std::string id = "sys-" + padded(i);
    CaseBuilder cb(id, ctx.faulted(id));
    const auto fl = flagify(sys, static_cast<int>(t));
    bool nonzero = true, common = true;
    for (std::size_t k = 0; k < t; ++k) {
      nonzero = nonzero && fl.a[k] != 0 && fl.b[k] != 0;
      common = common && fl.a[k] * fl.b[k] == fl.common_value();
    }
    const auto s0 = independence_degree(sys, 6);
    const auto s1 = independence_degree(fl.rescaled, 6);
    cb.inputs() = {{"system", system_to_json(sys)}};
    cb.values() = {{"witness", fl.witness},
                   {"b", fl.b},
                   {"a", fl.a},
                   {"independence_degree", s0 ? nlohmann::json(*s0) : nlohmann::json(nullptr)}};
    cb.check("a_nonzero", nonzero, "theorem");
    cb.check("a_times_b_constant", common, "identity");
    cb.check("rescaled_translation_invariant", is_translation_invariant(fl.rescaled), "theorem");
    if (s0) cb.exact("independence_degree_preserved", s1 ? *s1 : -1, *s0, "theorem");
    return cb.take();
  });
}

void small_n(const Context& ctx, Report& r) {
  const std::int64_t n = or_default<std::int64_t>(ctx.spec.sizes, {32}).front();
  const std::size_t count = ctx.spec.cases.value_or(50);
  const std::int64_t c = (n + 1) / 2;
  r.parameters = {{"N", n}, {"instances", count}, {"shift", c}, {"domain", "[1, N]"}};
  r.cases = run_cases(count, ctx.jobs, [&](std::size_t i) {
    const int k = i < count / 2 ? 3 : 4;
    const int s = k - 2;
    const auto sys = arithmetic_progression_system(k);
    const auto region = preimage_region(sys, std::vector<Interval>(2, Interval{-n, n}), Interval{1, n}, c);
    std::vector<Series> fs;
    const int pattern = static_cast<int>(i % 4);
    for (std::size_t m = 0; m < sys.size(); ++m) {
      const auto seed = ctx.seed(9, i * 8 + m);
      if (pattern == 3) {
        // quadratic phases with a common frequency make the average large
        Rng rng(seed);
        const long double alpha = rng.uniform01();
        fs.push_back(phase_series({1, n}, [&](std::int64_t x) { return alpha * x * x; }, "quadratic_phase"));
      } else {
        fs.push_back(corpus_function(seed, {1, n}, pattern));
      }
    }
    const std::string id = std::to_string(k) + "-AP-" + padded(i, 2);
    CaseBuilder cb(id, ctx.faulted(id));
    const auto chain = small_n_chain(sys, fs, region, c, n, s, {}, ctx.tol, 1);
    cb.inputs() = {{"N", n}, {"k", k}, {"s", s}, {"variant", fs.front().label()}};
    nlohmann::json links = nlohmann::json::object();
    for (const auto& l : chain.links) {
      links[l.name] = {{"lhs", l.lhs}, {"rhs", l.rhs}};
      if (l.identity)
        cb.identity("link_" + l.name, l.lhs, l.rhs, ctx.tol, "identity");
      else
        cb.upper("link_" + l.name, l.lhs, l.rhs, ctx.tol, "theorem");
    }
    cb.values() = {{"j", chain.j},
                   {"region_size", chain.region_size},
                   {"max_multiplicity", chain.max_multiplicity},
                   {"c_b", chain.c_b},
                   {"c_mono", chain.c_mono},
                   {"c_e", chain.c_e},
                   {"norms", chain.norms},
                   {"links", links}};
    return cb.take();
  });
}

struct Shape {
  std::string name;
  std::function<LatticeRegion(std::int64_t)> region;
  LinearSystem forms;
};

std::vector<Shape> packing_shapes() {
  const auto ap3 = arithmetic_progression_system(3);
  const auto skew = LinearSystem::from_rows({{1, 1}, {1, -2}, {3, 1}});
  return {
      {"ap3", [ap3](std::int64_t n) { return preimage_region(ap3, n); }, ap3},
      {"box", [](std::int64_t n) { return LatticeRegion::cube(2, n); }, ap3},
      {"skew", [skew](std::int64_t n) { return preimage_region(skew, n); }, skew},
  };
}

void packing(const Context& ctx, Report& r) {
  const auto moduli = or_default<std::int64_t>(ctx.spec.moduli, {1, 2, 3});
  const auto epss = or_default<double>(ctx.spec.eps, {0.25, 0.125, 0.0625});
  const auto sizes = or_default<std::int64_t>(ctx.spec.sizes, {32, 64, 128});
  const auto shapes = packing_shapes();
  r.parameters = {{"moduli", moduli}, {"eps", epss}, {"sizes", sizes}, {"fit_size", sizes.front()}, {"D", 2}};
  Scatter sc;
  sc.name = "packing";
  sc.description =
      "shape: region K; q: modulus; eps: cube scale; N: box half-width\n"
      "boundary: |S|; c_boundary: |S| / (q eps N^D)\n"
      "max_incidence: max over forms and n of cells meeting psi^{-1}(n); c_incidence: max_incidence eps^{D-1}";
  sc.columns = {"shape", "q", "eps", "N", "cells", "boundary", "c_boundary", "max_incidence", "c_incidence"};
  const std::size_t per = sizes.size();
  const std::size_t total = shapes.size() * moduli.size() * epss.size();
  std::vector<std::vector<std::vector<Cell>>> rows(total);
  r.cases = run_cases(total, ctx.jobs, [&](std::size_t k) {
    const auto& shape = shapes[k / (moduli.size() * epss.size())];
    const std::int64_t q = moduli[(k / epss.size()) % moduli.size()];
    const double eps = epss[k % epss.size()];
    const std::string id = shape.name + "-q" + std::to_string(q) + "-eps" + short_double(eps);
    CaseBuilder cb(id, ctx.faulted(id));
    std::vector<double> cs(per), ci(per);
    nlohmann::json per_n = nlohmann::json::array();
    for (std::size_t m = 0; m < per; ++m) {
      const std::int64_t n = sizes[m];
      const auto region = shape.region(n);
      const auto part = pack_cubes(region, q, eps, n);
      const auto check = verify_partition(region, part);
      std::uint64_t inc = 0;
      for (const auto& form : shape.forms.forms()) inc = std::max(inc, max_incidence(part, form, 0));
      const double d = static_cast<double>(region.dimension());
      cs[m] = static_cast<double>(part.boundary.size()) / (static_cast<double>(q) * eps * std::pow(static_cast<double>(n), d));
      ci[m] = static_cast<double>(inc) * std::pow(eps, d - 1);
      cb.check("partition_exact_N" + std::to_string(n), check.exact(), "identity");
      per_n.push_back({{"N", n},
                       {"cells", part.cells.size()},
                       {"boundary", part.boundary.size()},
                       {"region_points", check.region_points},
                       {"c_boundary", cs[m]},
                       {"max_incidence", inc},
                       {"c_incidence", ci[m]}});
      rows[k].push_back({shape.name, q, eps, n, static_cast<std::int64_t>(part.cells.size()),
                         static_cast<std::int64_t>(part.boundary.size()), cs[m], static_cast<std::int64_t>(inc), ci[m]});
    }
    for (std::size_t m = 1; m < per; ++m) {
      cb.upper("c_boundary_N" + std::to_string(sizes[m]), cs[m], cs[0], ctx.tol, "fitted");
      cb.upper("c_incidence_N" + std::to_string(sizes[m]), ci[m], ci[0], ctx.tol, "fitted");
    }
    cb.inputs() = {{"shape", shape.name}, {"q", q}, {"eps", eps}, {"sizes", sizes}};
    cb.values() = {{"fitted_c_boundary", cs[0]}, {"fitted_c_incidence", ci[0]}, {"per_N", per_n}};
    return cb.take();
  });
  for (auto& rs : rows)
    for (auto& row : rs) sc.rows.push_back(std::move(row));
  r.scatters.push_back(std::move(sc));
}

void vn_cyclic(const Context& ctx, Report& r) {
  const std::int64_t n = or_default<std::int64_t>(ctx.spec.sizes, {31}).front();
  const std::size_t triples = ctx.spec.cases.value_or(100);
  const std::size_t quads = ctx.spec.cases ? *ctx.spec.cases : 25;
  r.parameters = {{"N", n}, {"triples", triples}, {"quadruples", quads}};
  Scatter sc;
  sc.name = "vn";
  sc.description = "t: progression length; min_norm: min_i ||f_i||_{U^{t-1}(Z_N)}; abs_average: |E_{x,d} prod f_i(x+(i-1)d)|";
  sc.columns = {"case", "t", "min_norm", "abs_average"};
  r.cases = run_cases(triples + quads, ctx.jobs, [&](std::size_t i) {
    const std::size_t t = i < triples ? 3 : 4;
    const std::string id = (t == 3 ? "triple-" : "quad-") + padded(t == 3 ? i : i - triples);
    CaseBuilder cb(id, ctx.faulted(id));
    Rng rng(ctx.seed(10, i));
    // every fourth case: phases of degree t-2 whose coefficients cancel along
    // progressions, so the average is 1 and the bound is tight
    const bool structured = i % 4 == 0;
    const std::vector<std::int64_t> relation = t == 3 ? std::vector<std::int64_t>{1, -2, 1} : std::vector<std::int64_t>{1, -3, 3, -1};
    const std::int64_t lambda = rng.uniform_int(1, n - 1);
    std::vector<std::vector<Complex>> fs(t, std::vector<Complex>(static_cast<std::size_t>(n)));
    for (std::size_t k = 0; k < t; ++k)
      for (std::int64_t x = 0; x < n; ++x) {
        Complex& v = fs[k][static_cast<std::size_t>(x)];
        if (structured) {
          const std::int64_t power = t == 3 ? x : x * x % n;
          v = e(static_cast<long double>(floor_mod(lambda * relation[k] * power, n)) / n);
        } else {
          v = rng.uniform01() * e(rng.uniform01());
        }
      }
    const auto rep = cyclic_ap_average(fs, ctx.tol, 1);
    cb.inputs() = {{"N", n}, {"t", t}, {"structured", structured}};
    cb.values() = {{"average", cplx(rep.average)}, {"norms", rep.norms}, {"min_norm", rep.min_norm}};
    cb.upper("von_neumann", std::abs(rep.average), rep.min_norm, ctx.tol, "theorem");
    return cb.take();
  });
  for (const auto& c : r.cases)
    sc.rows.push_back({c.id, c.inputs["t"].get<std::int64_t>(), c.values["min_norm"].get<double>(),
                       std::hypot(c.values["average"][0].get<double>(), c.values["average"][1].get<double>())});
  r.scatters.push_back(std::move(sc));
}

// ---------------------------------------------------------------------------

struct DemoItem {
  std::string system_name;
  std::size_t system_index;
  std::string kind;
  std::uint64_t seed;
  double alpha;
  double rho;
};

void theorem1_demo(const Context& ctx, Report& r, std::string* data_bytes) {
  const std::int64_t n = or_default<std::int64_t>(ctx.spec.sizes, {256}).front();
  if (n > 512) throw std::invalid_argument("theorem1-demo: N = " + std::to_string(n) + " exceeds 512");
  if (n < 8) throw std::invalid_argument("theorem1-demo: N must be at least 8");
  const auto shipped = load_shipped_nonflag(ctx.spec, data_bytes);
  const std::vector<std::pair<std::string, LinearSystem>> systems = {{"4-AP", arithmetic_progression_system(4)},
                                                                     {"nonflag", system_from_json(shipped)}};
  std::vector<int> degrees;
  std::vector<IntVector> quad_rel, lin_rel;
  for (const auto& [name, sys] : systems) {
    const auto s = independence_degree(sys, 4);
    if (!s) throw std::runtime_error("theorem1-demo: " + name + " has no independence degree below 5");
    degrees.push_back(*s);
    quad_rel.push_back(power_relations(sys, *s).at(0));
    lin_rel.push_back(power_relations(sys, 1).at(0));
  }
  const std::vector<double> alphas = {std::numbers::sqrt2, std::numbers::sqrt3, std::sqrt(5.0), std::numbers::phi - 1,
                                      std::numbers::pi / 7, std::numbers::e / 10};
  std::vector<DemoItem> items;
  for (std::size_t si = 0; si < systems.size(); ++si) {
    const auto& name = systems[si].first;
    for (std::size_t k = 0; k < 8; ++k) items.push_back({name, si, "random_unimodular", ctx.seed(11, items.size()), 0, 0});
    for (std::size_t k = 0; k < 8; ++k) items.push_back({name, si, "random_pm1", ctx.seed(11, items.size()), 0, 0});
    for (double a : alphas) items.push_back({name, si, "relation_phase", 0, a, 0});
    for (std::size_t k = 0; k < 4; ++k) items.push_back({name, si, "relation_linear", 0, alphas[k], 0});
    for (std::size_t k = 0; k < 2; ++k) items.push_back({name, si, "common_phase", 0, alphas[k], 0});
    for (double rho : {0.25, 0.5, 0.75})
      for (std::size_t k = 0; k < 2; ++k) items.push_back({name, si, "mixture", ctx.seed(11, items.size()), alphas[k], rho});
  }
  r.parameters = {{"N", n},
                  {"systems", {{{"name", "4-AP"}, {"s", degrees[0]}}, {{"name", "nonflag"}, {"s", degrees[1]}}}},
                  {"domain", "[-N, N]"},
                  {"average", "E over the box [-N, N]^D"},
                  {"cases", items.size()}};

  struct Measured {
    double min_norm = 0, max_u2 = 0, min_u2 = 0, min_norm_u2 = 0, abs_avg = 0;
  };
  std::vector<Measured> measured(items.size());
  auto cases = run_cases(items.size(), ctx.jobs, [&](std::size_t i) {
    const auto& it = items[i];
    const auto& sys = systems[it.system_index].second;
    const int s = degrees[it.system_index];
    const Interval w{-n, n};
    std::vector<Series> fs;
    for (std::size_t k = 0; k < sys.size(); ++k) {
      const long double ck = quad_rel[it.system_index][k].get_d();
      const long double lk = lin_rel[it.system_index][k].get_d();
      const long double alpha = it.alpha;
      if (it.kind == "random_unimodular" || it.kind == "random_pm1") {
        fs.push_back(corpus_function(derive_seed(it.seed, k), w, it.kind == "random_pm1" ? 2 : 1));
      } else if (it.kind == "relation_phase") {
        fs.push_back(phase_series(w, [&](std::int64_t x) {
          long double p = 1;
          for (int d = 1; d <= s; ++d) p *= x;
          return ck * alpha * p;
        }, it.kind));
      } else if (it.kind == "relation_linear") {
        fs.push_back(phase_series(w, [&](std::int64_t x) { return lk * alpha * x; }, it.kind));
      } else if (it.kind == "common_phase") {
        fs.push_back(phase_series(w, [&](std::int64_t x) { return alpha * x * x; }, it.kind));
      } else {
        const Series noise = corpus_function(derive_seed(it.seed, k), w, 1);
        const double cut = it.rho * static_cast<double>(n);
        fs.push_back(phase_series(w, [&](std::int64_t x) {
          if (std::abs(static_cast<double>(x)) <= cut) {
            long double p = 1;
            for (int d = 1; d <= s; ++d) p *= x;
            return ck * alpha * p;
          }
          return static_cast<long double>(std::arg(noise(x)) / (2 * std::numbers::pi));
        }, it.kind));
      }
    }
    const auto rep = reduction_pipeline(sys, fs, n, 1e-12, 1);
    std::vector<double> hi, u2;
    const auto dom = FiniteSet::interval(w);
    for (const auto& f : fs) {
      hi.push_back(norm_subset(f, dom, s, NormMethod::fast, 1).value);
      u2.push_back(norm_subset(f, dom, 1, NormMethod::fast, 1).value);
    }
    const auto jmin = static_cast<std::size_t>(std::min_element(hi.begin(), hi.end()) - hi.begin());
    Measured m{hi[jmin], *std::max_element(u2.begin(), u2.end()), *std::min_element(u2.begin(), u2.end()), u2[jmin],
               std::abs(rep.value)};
    measured[i] = m;
    const std::string id = it.system_name + "-" + padded(i);
    CaseBuilder cb(id, ctx.faulted(id));
    cb.inputs() = {{"system", it.system_name}, {"s", s}, {"kind", it.kind}, {"seed", it.seed}, {"alpha", it.alpha}, {"rho", it.rho}};
    cb.values() = {{"average", cplx(rep.value)},
                   {"abs_average", m.abs_avg},
                   {"norms_high", hi},
                   {"norms_u2", u2},
                   {"min_norm", m.min_norm},
                   {"substitution_error", rep.trace->identity_error}};
    cb.upper("substitution", rep.trace->identity_error, 0.0, 1e-12, "identity");
    return cb.take();
  });

  std::vector<double> mins, avgs, random_u2, random_avg;
  for (std::size_t i = 0; i < items.size(); ++i) {
    mins.push_back(measured[i].min_norm);
    avgs.push_back(measured[i].abs_avg);
    if (items[i].kind.rfind("random", 0) == 0) {
      random_u2.push_back(measured[i].min_u2);
      random_avg.push_back(measured[i].abs_avg);
    }
  }
  const double p10 = percentile_nearest_rank(mins, 10);
  const double med = median(avgs);
  const double random_u2_max = *std::max_element(random_u2.begin(), random_u2.end());
  const double random_avg_max = *std::max_element(random_avg.begin(), random_avg.end());
  std::size_t low = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    CaseRecord& c = cases[i];
    const bool faulted = ctx.faulted(c.id);
    CaseBuilder extra(c.id, faulted);
    if (measured[i].min_norm < p10) {
      ++low;
      extra.upper("below_p10_has_small_average", measured[i].abs_avg, med, 0.0, "fitted");
    }
    if (items[i].system_name == "4-AP" && items[i].kind == "relation_phase") {
      // min_i U^2 (the quantity a U^2 bound would use) at the level of random
      // functions, average above every random one
      extra.upper("u2_at_random_level", measured[i].min_u2, random_u2_max, 0.0, "fitted");
      extra.upper("average_above_random", random_avg_max, measured[i].abs_avg, 0.0, "fitted");
      extra.upper("average_above_median", med, measured[i].abs_avg, 0.0, "fitted");
    }
    for (auto& b : extra.take().bounds) c.bounds.push_back(std::move(b));
  }
  r.cases = std::move(cases);
  r.summary = {{"p10_min_norm", p10},
               {"median_abs_average", med},
               {"cases_below_p10", low},
               {"random_max_min_u2", random_u2_max},
               {"random_max_abs_average", random_avg_max}};

  Scatter sc;
  sc.name = "norm-vs-average";
  sc.description =
      "system: 4-AP or the shipped non-flag system; s: independence degree\n"
      "min_norm: min_i ||f_i||_{U^{s+1}[-N,N]}; u2_of_min: ||f_i||_{U^2[-N,N]} for that i\n"
      "min_u2, max_u2: min_i and max_i of ||f_i||_{U^2[-N,N]}\n"
      "abs_average: |E_{x in [-N,N]^D} prod f_i(psi_i(x))|";
  sc.columns = {"case", "system", "s", "kind", "min_norm", "u2_of_min", "min_u2", "max_u2", "abs_average"};
  for (std::size_t i = 0; i < items.size(); ++i)
    sc.rows.push_back({r.cases[i].id, items[i].system_name, static_cast<std::int64_t>(degrees[items[i].system_index]),
                       items[i].kind, measured[i].min_norm, measured[i].min_norm_u2, measured[i].min_u2, measured[i].max_u2,
                       measured[i].abs_avg});
  r.scatters.push_back(std::move(sc));
}

// ---------------------------------------------------------------------------

std::uint64_t smoothing_support(double eps, std::int64_t n, std::int64_t q, std::int64_t c) {
  const Series chi = dilated_smoother(eps, n, q, c);
  const auto half = static_cast<std::int64_t>(std::floor(eps * static_cast<double>(n) / 2.0));
  const Series ind = Series::indicator(Progression{c - q * half, q, 2 * half + 1});
  const std::int64_t lo = std::min(chi.support_start(), ind.support_start());
  const std::int64_t hi = std::max(chi.support_end(), ind.support_end());
  std::uint64_t count = 0;
  for (std::int64_t x = lo; x <= hi; ++x)
    if (std::abs(ind(x) - chi(x)) > 0) ++count;
  return count;
}

void dlvp(const Context& ctx, Report& r) {
  const auto epss = or_default<double>(ctx.spec.eps, {0.25, 0.125});
  const auto sizes = or_default<std::int64_t>(ctx.spec.sizes, {256, 512, 1024, 2048, 4096, 8192, 16384});
  const auto orders = or_default<int>(ctx.spec.orders, {1, 2});
  const auto moduli = or_default<std::int64_t>(ctx.spec.moduli, {1, 2, 3});
  const std::int64_t base_n = sizes.front();
  const std::int64_t s2_limit = 2048;
  const double ratio_eps = epss.front();
  r.parameters = {{"eps", epss}, {"sizes", sizes}, {"orders", orders}, {"moduli", moduli}, {"ratio_eps", ratio_eps},
                  {"order_2_max_N", s2_limit}, {"domain", "[N] = [1, N]"}, {"progression", "P = c + q [-eps N/2, eps N/2], c = N/2"}};

  Scatter l1;
  l1.name = "fourier-l1";
  l1.description = "eps: plateau scale; N: size; embedding: FFT length M; l1: (1/M) sum_k |DFT(chi_0)(k)|";
  l1.columns = {"eps", "N", "embedding", "l1"};
  Scatter sup;
  sup.name = "support";
  sup.description = "eps; q: dilation; N; support: |supp(1_P - chi)|; ratio: support / N";
  sup.columns = {"eps", "q", "N", "support", "ratio"};

  std::map<double, double> base_l1;
  for (double eps : epss) {
    const std::string id = "l1-eps" + short_double(eps);
    CaseBuilder cb(id, ctx.faulted(id));
    std::vector<double> vals;
    for (auto n : sizes) {
      const auto m = dlvp_embedding_size(eps, n);
      vals.push_back(fourier_l1(dlvp_kernel(eps, n), m));
      l1.rows.push_back({eps, n, static_cast<std::int64_t>(m), vals.back()});
    }
    base_l1[eps] = vals.front();
    for (std::size_t k = 1; k < sizes.size(); ++k)
      cb.upper("non_increasing_N" + std::to_string(sizes[k]), vals[k], vals[k - 1], ctx.tol, "theorem");
    cb.inputs() = {{"eps", eps}, {"sizes", sizes}};
    cb.values() = {{"l1", vals}};
    r.cases.push_back(cb.take());
  }
  for (double eps : epss)
    for (auto q : moduli) {
      const std::string id = "support-eps" + short_double(eps) + "-q" + std::to_string(q);
      CaseBuilder cb(id, ctx.faulted(id));
      std::vector<double> ratios;
      std::vector<std::uint64_t> counts;
      for (auto n : sizes) {
        counts.push_back(smoothing_support(eps, n, q, n / 2));
        ratios.push_back(static_cast<double>(counts.back()) / static_cast<double>(n));
        sup.rows.push_back({eps, q, n, static_cast<std::int64_t>(counts.back()), ratios.back()});
      }
      // Counts are small integers, so neighbouring ratios can tie; the ratio
      // must never rise and must end below where it started.
      for (std::size_t k = 1; k < sizes.size(); ++k)
        cb.upper("non_increasing_N" + std::to_string(sizes[k]), ratios[k], ratios[k - 1], 0.0, "theorem");
      cb.check("overall_decay", ratios.back() < ratios.front(), "theorem");
      cb.inputs() = {{"eps", eps}, {"q", q}, {"sizes", sizes}};
      cb.values() = {{"support", counts}, {"ratio", ratios}};
      r.cases.push_back(cb.take());
    }

  // Constant from the smoothing argument at the base size:
  //   ||f||_{U(P)} <= ||chi_0^||_1 (||1_[N]||_{U(Z)} / ||1_P||_{U(Z)}) ||f||_{U[N]} + error,
  // the error being absorbed by the 1/sqrt(N) in the denominator.
  auto progression = [&](std::int64_t n, std::int64_t q) {
    const auto half = static_cast<std::int64_t>(std::floor(ratio_eps * static_cast<double>(n) / 2.0));
    return Progression{n / 2 - q * half, q, 2 * half + 1};
  };
  std::map<int, double> constant;
  for (int s : orders) {
    double worst = 0;
    const double interval_norm = root_of_sum(pp_sum_fast(Series::indicator(Interval{1, base_n}), s, ctx.jobs));
    for (auto q : moduli)
      worst = std::max(worst, interval_norm / root_of_sum(pp_sum_fast(Series::indicator(progression(base_n, q)), s, ctx.jobs)));
    constant[s] = base_l1[ratio_eps] * worst;
  }

  const std::vector<std::string> corpus = {"random_unimodular", "random_unimodular", "random_unimodular", "random_pm1",
                                           "random_pm1",        "linear_phase",      "linear_phase",      "quadratic_phase",
                                           "quadratic_phase",   "cubic_phase",       "half_indicator",    "constant"};
  Scatter ratio;
  ratio.name = "subprogression-ratio";
  ratio.description =
      "s: order is s+1; N; q; f: corpus function\n"
      "ratio: ||f||_{U^{s+1}(P)} / (||f||_{U^{s+1}[N]} + N^{-1/2}); constant: bound derived at the base N";
  ratio.columns = {"s", "N", "q", "function", "ratio", "constant"};
  struct RItem {
    int s;
    std::int64_t n;
  };
  std::vector<RItem> ritems;
  for (int s : orders)
    for (auto n : sizes)
      if (s == 1 || n <= s2_limit) ritems.push_back({s, n});
  std::vector<std::vector<std::vector<Cell>>> rrows(ritems.size());
  auto rcases = run_cases(ritems.size(), ctx.jobs, [&](std::size_t k) {
    const auto [s, n] = ritems[k];
    const std::string id = "ratio-s" + std::to_string(s) + "-N" + std::to_string(n);
    CaseBuilder cb(id, ctx.faulted(id));
    const Interval w{1, n};
    nlohmann::json vals = nlohmann::json::array();
    for (std::size_t fi = 0; fi < corpus.size(); ++fi) {
      const auto& kind = corpus[fi];
      Rng rng(ctx.seed(12, fi));
      const long double a1 = rng.uniform01(), a2 = rng.uniform01(), a3 = rng.uniform01();
      Series f;
      if (kind == "random_unimodular" || kind == "random_pm1")
        f = corpus_function(derive_seed(ctx.seed(13, fi), static_cast<std::uint64_t>(n)), w, kind == "random_pm1" ? 2 : 1);
      else if (kind == "linear_phase")
        f = phase_series(w, [&](std::int64_t x) { return a1 * x; }, kind);
      else if (kind == "quadratic_phase")
        f = phase_series(w, [&](std::int64_t x) { return a2 * x * x + a1 * x; }, kind);
      else if (kind == "cubic_phase")
        f = phase_series(w, [&](std::int64_t x) { return a3 * x * x * x; }, kind);
      else if (kind == "half_indicator")
        f = Series::indicator(Interval{1, n / 2});
      else
        f = Series::indicator(w);
      const double whole = norm_subset(f, FiniteSet::interval(w), s, NormMethod::fast, 1).value;
      for (auto q : moduli) {
        const double part = norm_subset(f, FiniteSet::progression(progression(n, q)), s, NormMethod::fast, 1).value;
        const double rr = part / (whole + 1.0 / std::sqrt(static_cast<double>(n)));
        cb.upper("f" + padded(fi, 2) + "-q" + std::to_string(q), rr, constant[s], 0.0, "theorem");
        vals.push_back({{"function", kind}, {"q", q}, {"ratio", rr}});
        rrows[k].push_back({static_cast<std::int64_t>(s), n, q, kind, rr, constant[s]});
      }
    }
    cb.inputs() = {{"s", s}, {"N", n}, {"eps", ratio_eps}};
    cb.values() = {{"constant", constant[s]}, {"ratios", vals}};
    return cb.take();
  });
  for (auto& c : rcases) r.cases.push_back(std::move(c));
  for (auto& rs : rrows)
    for (auto& row : rs) ratio.rows.push_back(std::move(row));
  nlohmann::json consts = nlohmann::json::object();
  for (auto [s, c] : constant) consts[std::to_string(s)] = c;
  r.summary = {{"ratio_constant_by_s", consts}, {"base_N", base_n}};
  r.scatters.push_back(std::move(l1));
  r.scatters.push_back(std::move(sup));
  r.scatters.push_back(std::move(ratio));
}

void vn_interval(const Context& ctx, Report& r) {
  const std::int64_t n = or_default<std::int64_t>(ctx.spec.sizes, {64}).front();
  const std::size_t count = ctx.spec.cases.value_or(200);
  const std::vector<std::pair<std::string, LinearSystem>> systems = {{"3-AP", arithmetic_progression_system(3)},
                                                                     {"4-AP", arithmetic_progression_system(4)}};
  r.parameters = {{"N", n}, {"instances", count}, {"domain", "[-N, N]"}, {"envelope", "g(x) = C x, C fitted on even cases"}};
  struct Meas {
    double min_norm = 0, abs_avg = 0;
    int s = 0;
  };
  std::vector<Meas> meas(count);
  auto cases = run_cases(count, ctx.jobs, [&](std::size_t i) {
    const auto& [name, sys] = systems[i % 2];
    const std::string id = name + "-" + padded(i);
    CaseBuilder cb(id, ctx.faulted(id));
    Rng rng(ctx.seed(14, i));
    const int pattern = static_cast<int>((i / 2) % 4);
    const long double alpha = rng.uniform01();
    const double rho = rng.uniform01();
    const auto rel = power_relations(sys, static_cast<int>(sys.size()) - 2).at(0);
    std::vector<Series> fs;
    for (std::size_t k = 0; k < sys.size(); ++k) {
      const Series noise = corpus_function(derive_seed(ctx.seed(15, i), k), {-n, n}, 1);
      const long double ck = rel[k].get_d();
      const int deg = static_cast<int>(sys.size()) - 2;
      fs.push_back(phase_series({-n, n}, [&](std::int64_t x) {
        long double p = 1;
        for (int d = 0; d < deg; ++d) p *= x;
        const long double structured = ck * alpha * p;
        const long double random = std::arg(noise(x)) / (2 * std::numbers::pi);
        switch (pattern) {
          case 0: return random;
          case 1: return structured;
          default: return std::abs(static_cast<double>(x)) <= rho * static_cast<double>(n) ? structured : random;
        }
      }, "mixture"));
    }
    const auto rep = interval_vn_check(sys, fs, n, 1);
    meas[i] = {rep.min_norm, rep.abs_average, rep.s};
    cb.inputs() = {{"system", name}, {"pattern", pattern}, {"alpha", static_cast<double>(alpha)}, {"rho", rho}};
    cb.values() = {{"s", rep.s}, {"abs_average", rep.abs_average}, {"norms", rep.norms}, {"min_norm", rep.min_norm}};
    return cb.take();
  });
  double fit = 0;
  for (std::size_t i = 0; i < count; i += 2)
    if (meas[i].min_norm > 0) fit = std::max(fit, meas[i].abs_avg / meas[i].min_norm);
  for (std::size_t i = 1; i < count; i += 2) {
    CaseBuilder extra(cases[i].id, ctx.faulted(cases[i].id));
    extra.upper("envelope", meas[i].abs_avg, fit * meas[i].min_norm, ctx.tol, "fitted");
    for (auto& b : extra.take().bounds) cases[i].bounds.push_back(std::move(b));
  }
  r.cases = std::move(cases);
  r.summary = {{"envelope_slope", fit}};
  Scatter sc;
  sc.name = "vn-interval";
  sc.description =
      "system; s: Cauchy-Schwarz complexity; min_norm: min_i ||f_i||_{U^{s+1}[-N,N]}\n"
      "abs_average: |E_{x in K} prod f_i(psi_i(x))|; envelope: C min_norm with C fitted on even-indexed cases";
  sc.columns = {"case", "system", "s", "min_norm", "abs_average", "envelope"};
  for (std::size_t i = 0; i < count; ++i)
    sc.rows.push_back({r.cases[i].id, systems[i % 2].first, static_cast<std::int64_t>(meas[i].s), meas[i].min_norm,
                       meas[i].abs_avg, fit * meas[i].min_norm});
  r.scatters.push_back(std::move(sc));
}

struct SuiteInfo {
  std::string name;
  double tolerance;
  double wall_limit;
};

const std::vector<SuiteInfo>& suite_table() {
  static const std::vector<SuiteInfo> table = {
      {"engine-equivalence", 1e-9, 120}, {"phase-invariance", 1e-9, 0}, {"freiman-rescale", 1e-9, 0},
      {"emain-identity", 1e-12, 0},      {"flag-algebra", 0, 60},       {"flagify", 0, 0},
      {"smallN-chain", 1e-9, 0},         {"packing", 1e-12, 0},         {"vn-cyclic", 1e-9, 90},
      {"theorem1-demo", 1e-12, 600},     {"dlvp", 1e-12, 0},            {"vn-interval", 1e-12, 0},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suite_table()) out.push_back(s.name);
    return out;
  }();
  return names;
}

Report run_suite(const ExperimentSpec& spec) {
  const auto& table = suite_table();
  const auto info = std::find_if(table.begin(), table.end(), [&](const SuiteInfo& s) { return s.name == spec.suite; });
  if (info == table.end()) throw std::invalid_argument("unknown suite '" + spec.suite + "'");
  const Context ctx{spec, spec.tolerance > 0 ? spec.tolerance : info->tolerance, spec.jobs ? spec.jobs : default_jobs()};
  Report r;
  r.suite = spec.suite;
  r.rng_algorithm = Rng::kAlgorithm;
  r.seed = spec.seed;
  r.tolerance = ctx.tol;
  r.wall_limit_seconds = info->wall_limit;
  std::string data_bytes;
  const auto start = std::chrono::steady_clock::now();
  const auto& name = spec.suite;
  if (name == "engine-equivalence") engine_equivalence(ctx, r);
  else if (name == "phase-invariance") phase_invariance(ctx, r);
  else if (name == "freiman-rescale") freiman_rescale(ctx, r);
  else if (name == "emain-identity") emain_identity(ctx, r);
  else if (name == "flag-algebra") flag_algebra(ctx, r, &data_bytes);
  else if (name == "flagify") flagify_suite(ctx, r);
  else if (name == "smallN-chain") small_n(ctx, r);
  else if (name == "packing") packing(ctx, r);
  else if (name == "vn-cyclic") vn_cyclic(ctx, r);
  else if (name == "theorem1-demo") theorem1_demo(ctx, r, &data_bytes);
  else if (name == "dlvp") dlvp(ctx, r);
  else vn_interval(ctx, r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (spec.inject_fault &&
      std::none_of(r.cases.begin(), r.cases.end(), [&](const CaseRecord& c) { return c.id == *spec.inject_fault; }))
    throw std::invalid_argument("inject_fault: suite '" + name + "' has no case '" + *spec.inject_fault + "'");
  r.inputs_digest = fnv1a_hex(spec.to_json().dump() + data_bytes + kCodeVersion);
  return r;
}

}  // namespace gowerslab
