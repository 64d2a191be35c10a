#include "gowerslab/series.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gowerslab/random.hpp"
#include "json.hpp"

namespace gowerslab {

namespace {

long double frac(long double x) { return x - std::floor(x); }

}  // namespace

Complex e(long double x) {
  const long double angle = 2.0L * std::numbers::pi_v<long double> * frac(x);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

Series::Series(std::int64_t support_start, std::vector<Complex> values, std::string label)
    : start_(support_start), values_(std::move(values)), label_(std::move(label)) {}

Series Series::bounded(std::int64_t support_start, std::vector<Complex> values, std::string label) {
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!(std::abs(values[k]) <= 1.0 + kBoundednessSlack))
      throw std::domain_error("Series::bounded: |f(" + std::to_string(support_start + static_cast<std::int64_t>(k)) +
                              ")| exceeds 1");
  Series s(support_start, std::move(values), std::move(label));
  s.one_bounded_ = true;
  return s;
}

Series Series::indicator(Interval window, std::string label) {
  return bounded(window.lo, std::vector<Complex>(static_cast<std::size_t>(window.size()), Complex{1.0, 0.0}),
                 std::move(label));
}

Series Series::indicator(const Progression& p, std::string label) {
  if (p.length <= 0) return bounded(0, {}, std::move(label));
  std::vector<Complex> v(static_cast<std::size_t>(p.max() - p.min() + 1));
  for (std::int64_t k = 0; k < p.length; ++k) v[static_cast<std::size_t>(p.at(k) - p.min())] = 1.0;
  return bounded(p.min(), std::move(v), std::move(label));
}

Interval Series::nonzero_span() const {
  std::size_t first = 0;
  while (first < values_.size() && values_[first] == Complex{}) ++first;
  if (first == values_.size()) return {};
  std::size_t last = values_.size() - 1;
  while (values_[last] == Complex{}) --last;
  return {start_ + static_cast<std::int64_t>(first), start_ + static_cast<std::int64_t>(last)};
}

Series Series::restricted(const Progression& set) const {
  Series out = *this;
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!set.contains(start_ + static_cast<std::int64_t>(k))) out.values_[k] = {};
  return out;
}

Series Series::restricted(const std::vector<std::int64_t>& set) const {
  Series out = *this;
  std::vector<char> keep(values_.size(), 0);
  for (auto n : set) {
    const std::int64_t k = n - start_;
    if (k >= 0 && k < static_cast<std::int64_t>(values_.size())) keep[static_cast<std::size_t>(k)] = 1;
  }
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!keep[k]) out.values_[k] = {};
  return out;
}

Series Series::trimmed() const {
  const Interval span = nonzero_span();
  Series out = *this;
  if (span.empty()) {
    out.values_.clear();
    return out;
  }
  out.start_ = span.lo;
  out.values_.assign(values_.begin() + (span.lo - start_), values_.begin() + (span.hi - start_ + 1));
  return out;
}

Series Series::with_label(std::string label) const {
  Series out = *this;
  out.label_ = std::move(label);
  return out;
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::constant: return "constant";
    case GeneratorKind::random_unimodular: return "random_unimodular";
    case GeneratorKind::random_pm1: return "random_pm1";
    case GeneratorKind::polynomial_phase: return "polynomial_phase";
    case GeneratorKind::bracket_phase: return "bracket_phase";
    case GeneratorKind::indicator: return "indicator";
  }
  return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  for (auto k : {GeneratorKind::constant, GeneratorKind::random_unimodular, GeneratorKind::random_pm1,
                 GeneratorKind::polynomial_phase, GeneratorKind::bracket_phase, GeneratorKind::indicator})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

namespace {

// frac(alpha * n^j) for j = 1..degree, each step multiplying the previous
// fractional part by n so the magnitudes stay below |n|.
long double polynomial_phase(const std::vector<double>& coeffs, std::int64_t n) {
  long double total = 0.0L;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    long double r = frac(static_cast<long double>(coeffs[j]));
    for (std::size_t p = 0; p <= j; ++p) r = frac(r * static_cast<long double>(n));
    total += r;
  }
  return total;
}

}  // namespace

Series generate(const GeneratorSpec& spec, Interval window) {
  if (window.empty()) throw std::invalid_argument("generate: empty window");
  std::vector<Complex> v(static_cast<std::size_t>(window.size()));
  Rng rng(spec.seed);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::int64_t n = window.lo + static_cast<std::int64_t>(k);
    switch (spec.kind) {
      case GeneratorKind::constant:
        v[k] = spec.value;
        break;
      case GeneratorKind::random_unimodular:
        v[k] = e(rng.uniform01());
        break;
      case GeneratorKind::random_pm1:
        v[k] = rng.coin() ? 1.0 : -1.0;
        break;
      case GeneratorKind::polynomial_phase:
        v[k] = e(polynomial_phase(spec.coefficients, n));
        break;
      case GeneratorKind::bracket_phase: {
        const long double m = std::floor(static_cast<long double>(spec.beta) * static_cast<long double>(n));
        const long double r = frac(frac(static_cast<long double>(spec.alpha) * static_cast<long double>(n)) * m);
        v[k] = e(r);
        break;
      }
      case GeneratorKind::indicator:
        v[k] = spec.set.contains(n) ? 1.0 : 0.0;
        break;
    }
  }
  if (spec.kind == GeneratorKind::constant && std::abs(spec.value) > 1.0 + kBoundednessSlack)
    throw std::invalid_argument("generate: constant value has modulus > 1");
  return Series::bounded(window.lo, std::move(v), to_string(spec.kind));
}

Series dilate_embed(const Series& f, std::int64_t a_i, std::int64_t a, std::int64_t n) {
  if (a_i == 0) throw std::invalid_argument("dilate_embed: scalar a_i must be nonzero");
  if (n < 1) throw std::invalid_argument("dilate_embed: N must be positive");
  if (a < (a_i < 0 ? -a_i : a_i)) throw std::invalid_argument("dilate_embed: need |a_i| <= a");
  const Interval span = f.nonzero_span();
  if (!span.empty() && (span.lo < -n || span.hi > n))
    throw std::invalid_argument("dilate_embed: f is not supported in [-N, N]");
  const std::int64_t len = checked_add(checked_mul(2, checked_mul(a, n)), 1);
  std::vector<Complex> v(static_cast<std::size_t>(len));
  for (std::int64_t m = -n; m <= n; ++m) v[static_cast<std::size_t>(a_i * m + a * n)] = f(m);
  std::string label = "dilate(" + f.label() + "," + std::to_string(a_i) + "," + std::to_string(a) + ")";
  return f.is_one_bounded() ? Series::bounded(0, std::move(v), std::move(label)) : Series(0, std::move(v), std::move(label));
}

Series modulate(const Series& f, double theta) {
  std::vector<Complex> v(f.values());
  const long double t = frac(static_cast<long double>(theta));
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::int64_t n = f.support_start() + static_cast<std::int64_t>(k);
    v[k] *= e(frac(t * static_cast<long double>(n)));
  }
  std::string label = "modulate(" + f.label() + ")";
  return f.is_one_bounded() ? Series::bounded(f.support_start(), std::move(v), std::move(label))
                            : Series(f.support_start(), std::move(v), std::move(label));
}

SeriesFormat series_format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return SeriesFormat::csv;
  if (ext == ".json") return SeriesFormat::json;
  throw std::invalid_argument("cannot infer series format from '" + path.string() + "' (use .csv or .json)");
}

namespace {

double parse_double(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line) + ": '" + field + "' is not a number");
  }
  while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
  if (used != field.size()) throw std::runtime_error("line " + std::to_string(line) + ": trailing characters in '" + field + "'");
  if (!std::isfinite(v)) throw std::runtime_error("line " + std::to_string(line) + ": non-finite value");
  return v;
}

std::int64_t parse_int(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  long long v;
  try {
    v = std::stoll(field, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line) + ": '" + field + "' is not an integer");
  }
  if (used != field.size()) throw std::runtime_error("line " + std::to_string(line) + ": '" + field + "' is not an integer");
  return v;
}

Series finish(std::int64_t start, std::vector<Complex> values, bool require_one_bounded, std::string label) {
  if (values.empty()) throw std::runtime_error("series file holds no values");
  if (!require_one_bounded) return Series(start, std::move(values), std::move(label));
  try {
    return Series::bounded(start, std::move(values), std::move(label));
  } catch (const std::domain_error& err) {
    throw std::runtime_error(err.what());
  }
}

Series read_csv(std::istream& in, bool require_one_bounded) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Complex> values;
  std::int64_t start = 0;
  std::int64_t next = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (values.empty() && lineno == 1 && !fields.empty() && fields[0].find_first_of("0123456789") == std::string::npos)
      continue;  // header
    if (fields.size() != 3) throw std::runtime_error("line " + std::to_string(lineno) + ": expected n,re,im");
    const std::int64_t n = parse_int(fields[0], lineno);
    const Complex z{parse_double(fields[1], lineno), parse_double(fields[2], lineno)};
    if (values.empty()) {
      start = n;
    } else if (n < next) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": indices must increase");
    }
    if (!values.empty()) values.resize(static_cast<std::size_t>(n - start), Complex{});
    values.push_back(z);
    next = n + 1;
  }
  return finish(start, std::move(values), require_one_bounded, "csv");
}

Series read_json(std::istream& in, bool require_one_bounded) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& err) {
    throw std::runtime_error(std::string("malformed series JSON: ") + err.what());
  }
  if (!j.is_object() || !j.contains("support_start") || !j.contains("values"))
    throw std::runtime_error("series JSON needs support_start and values");
  if (!j["support_start"].is_number_integer()) throw std::runtime_error("support_start must be an integer");
  std::vector<Complex> values;
  for (const auto& item : j["values"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
      throw std::runtime_error("each value must be [re, im]");
    const Complex z{item[0].get<double>(), item[1].get<double>()};
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::runtime_error("non-finite value");
    values.push_back(z);
  }
  return finish(j["support_start"].get<std::int64_t>(), std::move(values), require_one_bounded,
                j.value("label", std::string("json")));
}

}  // namespace

Series read_series(const std::filesystem::path& path, SeriesFormat format, bool require_one_bounded) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return format == SeriesFormat::csv ? read_csv(in, require_one_bounded) : read_json(in, require_one_bounded);
}

void write_series(const Series& series, const std::filesystem::path& path, SeriesFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  if (format == SeriesFormat::csv) {
    out << "n,re,im\n";
    for (std::size_t k = 0; k < series.size(); ++k)
      out << series.support_start() + static_cast<std::int64_t>(k) << ',' << series.values()[k].real() << ','
          << series.values()[k].imag() << '\n';
  } else {
    nlohmann::json j;
    j["support_start"] = series.support_start();
    j["label"] = series.label();
    j["values"] = nlohmann::json::array();
    for (const auto& z : series.values()) j["values"].push_back({z.real(), z.imag()});
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace gowerslab
