#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "gowerslab/averages.hpp"
#include "gowerslab/gowers.hpp"
#include "gowerslab/linear_systems.hpp"
#include "gowerslab/regions.hpp"
#include "gowerslab/series.hpp"
#include "json.hpp"

namespace gowerslab {

/// Malformed input files and specs. The CLI maps this to exit code 2.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json_file(const std::filesystem::path& path);

/// {"D": int, "forms": [[int, ...], ...]}
nlohmann::json system_to_json(const LinearSystem& system);
LinearSystem system_from_json(const nlohmann::json& j);

/// {"D": int, "N": int, "halfspaces": [{"g": [...], "beta": int}],
///  "coset": {"q": int, "r": [...]}}; the box is [-N, N]^D unless "box":
///  [[lo, hi], ...] is given.
nlohmann::json region_to_json(const LatticeRegion& region);
LatticeRegion region_from_json(const nlohmann::json& j);

/// {"kind": ..., "coefficients": [...], "alpha": x, "beta": x, "value": [re, im],
///  "set": {"start", "step", "length"}, "seed": n, "window": [lo, hi]}
nlohmann::json generator_to_json(const GeneratorSpec& spec);
std::pair<GeneratorSpec, std::optional<Interval>> generator_from_json(const nlohmann::json& j);

/// Inline generator JSON (starting with '{') or a .csv/.json series file. A
/// generator without its own window uses `window`.
Series load_series(const std::string& argument, std::optional<Interval> window, bool require_one_bounded = true);

/// "cyclic:N", "interval:a..b" or "prog:start,step,len".
struct DomainSpec {
  enum class Kind { cyclic, interval, progression } kind = Kind::interval;
  std::int64_t cyclic_n = 0;
  Interval interval{};
  Progression progression{};
};
DomainSpec parse_domain(const std::string& text);

nlohmann::json analysis_to_json(const LinearSystem& system, int kmax);
nlohmann::json norm_report_to_json(const NormReport& report, double tolerance);
nlohmann::json average_report_to_json(const AverageReport& report);
nlohmann::json partition_to_json(const CellPartition& partition, const PartitionCheck& check, bool include_cells);
nlohmann::json complex_to_json(Complex z);

}  // namespace gowerslab
