#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gowerslab/workbench.hpp"

namespace gowerslab {

bool CaseRecord::pass() const {
  for (const auto& b : bounds)
    if (!b.pass) return false;
  return true;
}

std::vector<std::string> CaseRecord::failures() const {
  std::vector<std::string> out;
  for (const auto& b : bounds)
    if (!b.pass) out.push_back(b.name);
  return out;
}

bool Report::pass() const {
  for (const auto& c : cases)
    if (!c.pass()) return false;
  return true;
}

namespace {

nlohmann::json number_or_string(double x) {
  // JSON has no infinities or NaN.
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

nlohmann::json cell_to_json(const Cell& c) {
  return std::visit([](const auto& v) -> nlohmann::json {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
      return number_or_string(v);
    else
      return v;
  }, c);
}

}  // namespace

nlohmann::json Report::to_json(bool include_timing) const {
  nlohmann::json j;
  j["suite"] = suite;
  j["code_version"] = code_version;
  j["rng_algorithm"] = rng_algorithm;
  j["seed"] = seed;
  j["tolerance"] = tolerance;
  j["inputs_digest"] = inputs_digest;
  j["parameters"] = parameters;
  j["pass"] = pass();
  std::size_t failed = 0;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : cases) {
    nlohmann::json bs = nlohmann::json::array();
    for (const auto& b : c.bounds)
      bs.push_back({{"name", b.name},
                    {"kind", b.kind},
                    {"lhs", number_or_string(b.lhs)},
                    {"rhs", number_or_string(b.rhs)},
                    {"tolerance", b.tolerance},
                    {"provenance", b.provenance},
                    {"pass", b.pass}});
    if (!c.pass()) ++failed;
    cs.push_back({{"id", c.id}, {"inputs", c.inputs}, {"values", c.values}, {"bounds", bs}, {"pass", c.pass()}});
  }
  j["case_count"] = cases.size();
  j["failed_count"] = failed;
  j["cases"] = cs;
  nlohmann::json sc = nlohmann::json::array();
  for (const auto& s : scatters) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : s.rows) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& c : r) row.push_back(cell_to_json(c));
      rows.push_back(row);
    }
    sc.push_back({{"name", s.name}, {"description", s.description}, {"columns", s.columns}, {"rows", rows}});
  }
  j["scatters"] = sc;
  j["summary"] = summary;
  if (include_timing) {
    j["wall_seconds"] = wall_seconds;
    j["wall_limit_seconds"] = wall_limit_seconds;
    j["within_wall_limit"] = within_wall_limit();
  }
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["sizes"] = sizes;
  j["orders"] = orders;
  j["moduli"] = moduli;
  j["eps"] = eps;
  j["cases"] = cases ? nlohmann::json(*cases) : nlohmann::json(nullptr);
  j["tolerance"] = tolerance;
  j["inject_fault"] = inject_fault ? nlohmann::json(*inject_fault) : nlohmann::json(nullptr);
  // jobs and data_dir do not change results, so they stay out of the digest.
  return j;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment spec: expected an object");
  static const std::vector<std::string> known = {"suite", "seed",      "sizes", "orders",       "moduli",  "eps",
                                                 "cases", "tolerance", "jobs",  "inject_fault", "data_dir"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("experiment spec: unknown key '" + key + "'");
  ExperimentSpec s;
  try {
    if (j.contains("suite")) s.suite = j["suite"].get<std::string>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sizes")) s.sizes = j["sizes"].get<std::vector<std::int64_t>>();
    if (j.contains("orders")) s.orders = j["orders"].get<std::vector<int>>();
    if (j.contains("moduli")) s.moduli = j["moduli"].get<std::vector<std::int64_t>>();
    if (j.contains("eps")) s.eps = j["eps"].get<std::vector<double>>();
    if (j.contains("cases") && !j["cases"].is_null()) s.cases = j["cases"].get<std::size_t>();
    if (j.contains("tolerance")) s.tolerance = j["tolerance"].get<double>();
    if (j.contains("jobs")) s.jobs = j["jobs"].get<unsigned>();
    if (j.contains("inject_fault") && !j["inject_fault"].is_null()) s.inject_fault = j["inject_fault"].get<std::string>();
    if (j.contains("data_dir")) s.data_dir = j["data_dir"].get<std::string>();
  } catch (const nlohmann::json::exception& err) {
    throw std::invalid_argument(std::string("experiment spec: ") + err.what());
  }
  return s;
}

std::filesystem::path write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (report.suite + ".json");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << report.to_json().dump(2) << '\n';
  return path;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    std::ostringstream out;
    out.precision(17);
    out << *d;
    return out.str();
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return csv_field(std::get<std::string>(c));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_plotdata(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& s : report.scatters) {
    const auto path = dir / (report.suite + "-" + s.name + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "# suite: " << report.suite << '\n';
    out << "# seed: " << report.seed << '\n';
    std::istringstream desc(s.description);
    for (std::string line; std::getline(desc, line);) out << "# " << line << '\n';
    for (std::size_t i = 0; i < s.columns.size(); ++i) out << (i ? "," : "") << csv_field(s.columns[i]);
    out << '\n';
    for (const auto& row : s.rows) {
      if (row.size() != s.columns.size()) throw std::logic_error("scatter '" + s.name + "': row width mismatch");
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
      out << '\n';
    }
    written.push_back(path);
  }
  return written;
}

PlotTable read_plotdata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  PlotTable t;
  bool have_header = false;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header && line.rfind("#", 0) == 0) {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : std::string{});
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (!have_header) {
      t.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size())
      throw std::runtime_error(path.string() + ": row has " + std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(t.columns.size()));
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) throw std::runtime_error(path.string() + ": no header row");
  return t;
}

}  // namespace gowerslab
