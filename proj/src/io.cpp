#include "gowerslab/io.hpp"

#include <fstream>
#include <sstream>

namespace gowerslab {

namespace {

template <typename T>
T get_as(const nlohmann::json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw SpecError(std::string(what) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SpecError(std::string(what) + ": \"" + key + "\" has the wrong type");
  }
}

std::int64_t parse_int(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw SpecError(context + ": '" + s + "' is not an integer");
  return v;
}

}  // namespace

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& err) {
    throw SpecError("'" + path.string() + "' is not valid JSON: " + err.what());
  }
}

nlohmann::json system_to_json(const LinearSystem& system) {
  return {{"D", system.dimension()}, {"forms", system.rows()}};
}

LinearSystem system_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("system: expected an object");
  const auto rows = get_as<std::vector<std::vector<std::int64_t>>>(j, "forms", "system");
  if (rows.empty()) throw SpecError("system: no forms");
  if (j.contains("D")) {
    const auto d = get_as<std::size_t>(j, "D", "system");
    for (const auto& r : rows)
      if (r.size() != d) throw SpecError("system: a form does not have D coefficients");
  }
  try {
    return LinearSystem::from_rows(rows);
  } catch (const std::invalid_argument& err) {
    throw SpecError(std::string("system: ") + err.what());
  }
}

nlohmann::json region_to_json(const LatticeRegion& region) {
  nlohmann::json j;
  j["D"] = region.dimension();
  nlohmann::json box = nlohmann::json::array();
  for (const auto& b : region.box()) box.push_back({b.lo, b.hi});
  j["box"] = box;
  j["halfspaces"] = nlohmann::json::array();
  for (const auto& h : region.halfspaces()) j["halfspaces"].push_back({{"g", h.g}, {"beta", h.beta}});
  if (region.coset()) j["coset"] = {{"q", region.coset()->q}, {"r", region.coset()->r}};
  return j;
}

LatticeRegion region_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("region: expected an object");
  const auto d = get_as<std::size_t>(j, "D", "region");
  if (d == 0) throw SpecError("region: D must be positive");
  std::vector<Interval> box;
  if (j.contains("box")) {
    const auto b = get_as<std::vector<std::vector<std::int64_t>>>(j, "box", "region");
    if (b.size() != d) throw SpecError("region: box needs D intervals");
    for (const auto& iv : b) {
      if (iv.size() != 2) throw SpecError("region: box intervals are [lo, hi]");
      box.push_back({iv[0], iv[1]});
    }
  } else {
    const auto n = get_as<std::int64_t>(j, "N", "region");
    if (n < 0) throw SpecError("region: N must be nonnegative");
    box.assign(d, Interval{-n, n});
  }
  std::vector<Halfspace> hs;
  if (j.contains("halfspaces")) {
    if (!j["halfspaces"].is_array()) throw SpecError("region: halfspaces must be a list");
    for (const auto& h : j["halfspaces"]) hs.push_back({get_as<std::vector<std::int64_t>>(h, "g", "halfspace"),
                                                        get_as<std::int64_t>(h, "beta", "halfspace")});
  }
  std::optional<Coset> coset;
  if (j.contains("coset") && !j["coset"].is_null())
    coset = Coset{get_as<std::int64_t>(j["coset"], "q", "coset"), get_as<std::vector<std::int64_t>>(j["coset"], "r", "coset")};
  try {
    return LatticeRegion(std::move(box), std::move(hs), std::move(coset));
  } catch (const std::invalid_argument& err) {
    throw SpecError(std::string("region: ") + err.what());
  }
}

nlohmann::json generator_to_json(const GeneratorSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  j["seed"] = spec.seed;
  switch (spec.kind) {
    case GeneratorKind::constant: j["value"] = {spec.value.real(), spec.value.imag()}; break;
    case GeneratorKind::polynomial_phase: j["coefficients"] = spec.coefficients; break;
    case GeneratorKind::bracket_phase:
      j["alpha"] = spec.alpha;
      j["beta"] = spec.beta;
      break;
    case GeneratorKind::indicator:
      j["set"] = {{"start", spec.set.start}, {"step", spec.set.step}, {"length", spec.set.length}};
      break;
    default: break;
  }
  return j;
}

std::pair<GeneratorSpec, std::optional<Interval>> generator_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("generator: expected an object");
  GeneratorSpec spec;
  try {
    spec.kind = generator_kind_from_string(get_as<std::string>(j, "kind", "generator"));
  } catch (const std::invalid_argument& err) {
    throw SpecError(std::string("generator: ") + err.what());
  }
  if (j.contains("seed")) spec.seed = get_as<std::uint64_t>(j, "seed", "generator");
  if (j.contains("coefficients")) spec.coefficients = get_as<std::vector<double>>(j, "coefficients", "generator");
  if (j.contains("alpha")) spec.alpha = get_as<double>(j, "alpha", "generator");
  if (j.contains("beta")) spec.beta = get_as<double>(j, "beta", "generator");
  if (j.contains("value")) {
    const auto v = get_as<std::vector<double>>(j, "value", "generator");
    if (v.size() != 2) throw SpecError("generator: value is [re, im]");
    spec.value = {v[0], v[1]};
  }
  if (j.contains("set")) {
    const auto& s = j["set"];
    spec.set = Progression{get_as<std::int64_t>(s, "start", "set"), get_as<std::int64_t>(s, "step", "set"),
                           get_as<std::int64_t>(s, "length", "set")};
  }
  std::optional<Interval> window;
  if (j.contains("window")) {
    const auto w = get_as<std::vector<std::int64_t>>(j, "window", "generator");
    if (w.size() != 2) throw SpecError("generator: window is [lo, hi]");
    window = Interval{w[0], w[1]};
  }
  return {spec, window};
}

Series load_series(const std::string& argument, std::optional<Interval> window, bool require_one_bounded) {
  if (!argument.empty() && argument.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(argument);
    } catch (const nlohmann::json::exception& err) {
      throw SpecError(std::string("generator spec is not valid JSON: ") + err.what());
    }
    auto [spec, own] = generator_from_json(j);
    const auto w = own ? own : window;
    if (!w) throw SpecError("generator spec needs a window");
    try {
      return generate(spec, *w);
    } catch (const std::invalid_argument& err) {
      throw SpecError(err.what());
    }
  }
  try {
    return read_series(argument, series_format_for(argument), require_one_bounded);
  } catch (const std::exception& err) {
    throw SpecError(err.what());
  }
}

DomainSpec parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw SpecError("domain '" + text + "': expected kind:arguments");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  DomainSpec d;
  if (kind == "cyclic") {
    d.kind = DomainSpec::Kind::cyclic;
    d.cyclic_n = parse_int(rest, "domain");
    if (d.cyclic_n < 1) throw SpecError("domain: cyclic order must be positive");
  } else if (kind == "interval") {
    const auto dots = rest.find("..");
    if (dots == std::string::npos) throw SpecError("domain: interval is a..b");
    d.kind = DomainSpec::Kind::interval;
    d.interval = {parse_int(rest.substr(0, dots), "domain"), parse_int(rest.substr(dots + 2), "domain")};
    if (d.interval.empty()) throw SpecError("domain: empty interval");
  } else if (kind == "prog") {
    std::vector<std::int64_t> parts;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(parse_int(item, "domain"));
    if (parts.size() != 3 || parts[2] < 1) throw SpecError("domain: progression is start,step,len with len >= 1");
    d.kind = DomainSpec::Kind::progression;
    d.progression = {parts[0], parts[1], parts[2]};
  } else {
    throw SpecError("domain: unknown kind '" + kind + "'");
  }
  return d;
}

nlohmann::json complex_to_json(Complex z) { return {z.real(), z.imag()}; }

namespace {

nlohmann::json vector_to_json(const IntVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

}  // namespace

nlohmann::json analysis_to_json(const LinearSystem& system, int kmax) {
  nlohmann::json j;
  j["system"] = system_to_json(system);
  j["kmax"] = kmax;
  nlohmann::json spans = nlohmann::json::array();
  for (int k = 1; k <= kmax; ++k) {
    const auto span = power_span(system, k);
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& v : span.basis) basis.push_back(vector_to_json(v));
    spans.push_back({{"degree", k}, {"dim", span.dim()}, {"basis", basis}});
  }
  j["power_spans"] = spans;
  const auto flag = is_flag(system, kmax);
  nlohmann::json matrix = nlohmann::json::array();
  for (int k = 1; k < kmax; ++k)
    for (int l = k + 1; l <= kmax; ++l) matrix.push_back({{"k", k}, {"l", l}, {"contained", flag.contains(k, l)}});
  j["containment"] = matrix;
  j["flag_up_to_kmax"] = flag.is_flag();
  j["first_violation"] = flag.first_violation() ? nlohmann::json{flag.first_violation()->first, flag.first_violation()->second}
                                                 : nlohmann::json(nullptr);
  const auto s = independence_degree(system, std::max<int>(1, static_cast<int>(system.size())));
  j["independence_degree"] = s ? nlohmann::json(*s) : nlohmann::json(nullptr);
  j["translation_invariant"] = is_translation_invariant(system);
  if (system.size() >= 2 && system.size() <= kMaxComplexitySystemSize && !has_proportional_pair(system))
    j["cs_complexity"] = cs_complexity(system);
  else
    j["cs_complexity"] = nullptr;
  try {
    const auto fl = flagify(system, std::max<int>(1, static_cast<int>(system.size())));
    j["flagification"] = {{"witness", fl.witness}, {"b", fl.b}, {"a", fl.a}, {"rescaled", system_to_json(fl.rescaled)}};
  } catch (const std::exception& err) {
    j["flagification"] = {{"error", err.what()}};
  }
  return j;
}

nlohmann::json norm_report_to_json(const NormReport& r, double tolerance) {
  return {{"norm", r.value},
          {"order", r.order},
          {"domain", r.domain},
          {"method", to_string(r.method)},
          {"numerator", complex_to_json(r.numerator)},
          {"denominator", r.denominator},
          {"tolerance", tolerance}};
}

nlohmann::json average_report_to_json(const AverageReport& r) {
  nlohmann::json j;
  j["value"] = complex_to_json(r.value);
  j["abs_value"] = std::abs(r.value);
  j["region_size"] = r.region_size;
  j["shift"] = r.shift;
  j["norms"] = nlohmann::json::array();
  for (const auto& n : r.norms) j["norms"].push_back({{"index", n.index}, {"order", n.order}, {"value", n.value}});
  if (r.trace) {
    const auto& t = *r.trace;
    j["trace"] = {{"witness", t.flag.witness},
                  {"b", t.flag.b},
                  {"a", t.flag.a},
                  {"a_max", t.a},
                  {"region_size", t.region_size},
                  {"box_size", t.box_size},
                  {"original", complex_to_json(t.original)},
                  {"rescaled", complex_to_json(t.rescaled)},
                  {"identity_error", t.identity_error},
                  {"identity_holds", t.identity_holds},
                  {"box_average", complex_to_json(t.box_average)},
                  {"box_to_region", t.box_to_region},
                  {"boundary_term", t.boundary_term},
                  {"bound_holds", t.bound_holds}};
  }
  return j;
}

nlohmann::json partition_to_json(const CellPartition& p, const PartitionCheck& check, bool include_cells) {
  nlohmann::json j;
  j["q"] = p.q;
  j["eps"] = p.eps;
  j["N"] = p.n;
  j["side_count"] = p.side_count;
  j["cells"] = p.cells.size();
  j["cell_points"] = p.cell_points();
  j["boundary_points"] = p.boundary.size();
  j["check"] = {{"exact", check.exact()},
                {"cells_disjoint", check.cells_disjoint},
                {"cells_inside", check.cells_inside},
                {"boundary_disjoint", check.boundary_disjoint},
                {"covers", check.covers},
                {"region_points", check.region_points}};
  if (include_cells) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : p.cells) cells.push_back({{"anchor", c.anchor}, {"q", c.q}, {"side_count", c.side_count}});
    j["cell_list"] = cells;
    j["boundary"] = p.boundary;
  }
  return j;
}

}  // namespace gowerslab
