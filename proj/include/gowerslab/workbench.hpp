#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gowerslab {

inline constexpr const char* kCodeVersion = "gowerslab 1.0.0";

/// One asserted comparison. `kind` is "identity" (|lhs - rhs| <= tol max(1,|rhs|)),
/// "upper" (lhs <= rhs + tol max(1,|rhs|)) or "flag" (lhs must equal rhs exactly).
/// `provenance` says where rhs comes from: "identity", "theorem", "fitted" or "oracle".
struct Bound {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string kind;
  std::string provenance;
  bool pass = false;
};

struct CaseRecord {
  std::string id;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json values = nlohmann::json::object();
  std::vector<Bound> bounds;
  bool pass() const;
  std::vector<std::string> failures() const;
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Table written as CSV for plotting.
struct Scatter {
  std::string name;
  std::string description;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string suite;
  std::string code_version = kCodeVersion;
  std::string rng_algorithm;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string inputs_digest;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<CaseRecord> cases;
  std::vector<Scatter> scatters;
  nlohmann::json summary = nlohmann::json::object();
  double wall_seconds = 0.0;
  double wall_limit_seconds = 0.0;  // 0 = none

  bool pass() const;
  bool within_wall_limit() const { return wall_limit_seconds <= 0 || wall_seconds <= wall_limit_seconds; }
  /// Without timing, the output is a pure function of the experiment spec.
  nlohmann::json to_json(bool include_timing = true) const;
};

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct ExperimentSpec {
  std::string suite;
  std::uint64_t seed = 20240601;
  std::vector<std::int64_t> sizes;  // empty = suite default
  std::vector<int> orders;          // values of s; empty = suite default
  std::vector<std::int64_t> moduli; // q values for packing
  std::vector<double> eps;          // eps' (packing) or eps (smoothing)
  std::optional<std::size_t> cases; // per-configuration case count override
  double tolerance = 0.0;           // 0 = suite default
  unsigned jobs = 0;
  std::optional<std::string> inject_fault;  // case id whose oracle value is corrupted
  std::filesystem::path data_dir;           // shipped inputs (non-flag system)

  nlohmann::json to_json() const;
  /// Throws std::invalid_argument on unknown keys or wrong types.
  static ExperimentSpec from_json(const nlohmann::json& j);
};

/// Names accepted by run_suite, in acceptance order.
const std::vector<std::string>& suite_names();

/// Runs a suite. Throws std::invalid_argument for an unknown suite name and
/// std::runtime_error if a required input file is missing; failed
/// assertions are recorded in the report, not thrown.
Report run_suite(const ExperimentSpec& spec);

/// Writes <dir>/<suite>.json.
std::filesystem::path write_report(const Report& report, const std::filesystem::path& dir);

/// One CSV per scatter, <dir>/<suite>-<name>.csv, led by '#' comment lines
/// describing the columns. Returns the written paths.
std::vector<std::filesystem::path> emit_plotdata(const Report& report, const std::filesystem::path& dir);

struct PlotTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a CSV written by emit_plotdata. Throws std::runtime_error on rows
/// whose width differs from the header.
PlotTable read_plotdata(const std::filesystem::path& path);

}  // namespace gowerslab
