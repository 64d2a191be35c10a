#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "gowerslab/io.hpp"
#include "gowerslab/random.hpp"
#include "gowerslab/workbench.hpp"

using namespace gowerslab;

namespace {

ExperimentSpec small_spec(const std::string& suite) {
  ExperimentSpec spec;
  spec.suite = suite;
  spec.data_dir = GOWERSLAB_DATA_DIR;
  spec.jobs = 1;
  return spec;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gowerslab-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("fnv1a digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("reruns give identical case records for any job count") {
  auto spec = small_spec("emain-identity");
  spec.cases = 6;
  const auto a = run_suite(spec).to_json(false);
  spec.jobs = 3;
  const auto b = run_suite(spec).to_json(false);
  CHECK(a.dump() == b.dump());
  CHECK(a["pass"].get<bool>());
  CHECK(a["inputs_digest"].get<std::string>().size() == 16);

  auto other = small_spec("emain-identity");
  other.cases = 6;
  other.seed = 7;
  CHECK(run_suite(other).inputs_digest != a["inputs_digest"].get<std::string>());
}

TEST_CASE("injected fault fails the named case only") {
  auto spec = small_spec("flagify");
  spec.cases = 5;
  REQUIRE(run_suite(spec).pass());
  spec.inject_fault = "sys-003";
  const auto r = run_suite(spec);
  CHECK_FALSE(r.pass());
  for (const auto& c : r.cases) CHECK(c.pass() == (c.id != "sys-003"));

  spec.inject_fault = "no-such-case";
  CHECK_THROWS_AS(run_suite(spec), std::invalid_argument);
}

TEST_CASE("spec errors") {
  CHECK_THROWS_AS(run_suite(small_spec("no-such-suite")), std::invalid_argument);
  auto spec = small_spec("flag-algebra");
  spec.data_dir = "/nonexistent-gowerslab-dir";
  CHECK_THROWS_AS(run_suite(spec), std::runtime_error);
  auto demo = small_spec("theorem1-demo");
  demo.sizes = {1024};
  CHECK_THROWS_AS(run_suite(demo), std::invalid_argument);
}

TEST_CASE("every bound names a tolerance and a provenance") {
  static const std::set<std::string> provenances = {"identity", "theorem", "fitted", "oracle"};
  static const std::set<std::string> kinds = {"identity", "upper", "flag"};
  for (const std::string suite : {"flag-algebra", "smallN-chain", "vn-cyclic"}) {
    auto spec = small_spec(suite);
    spec.cases = 4;
    const auto r = run_suite(spec);
    CHECK(r.pass());
    for (const auto& c : r.cases) {
      CHECK_FALSE(c.bounds.empty());
      for (const auto& b : c.bounds) {
        CHECK(provenances.count(b.provenance) == 1);
        CHECK(kinds.count(b.kind) == 1);
        CHECK(std::isfinite(b.tolerance));
        CHECK_FALSE(b.name.empty());
      }
    }
  }
}

TEST_CASE("experiment spec json") {
  auto spec = small_spec("packing");
  spec.sizes = {32, 64};
  spec.eps = {0.25};
  spec.cases = 3;
  spec.inject_fault = "x";
  const auto back = ExperimentSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK_THROWS_AS(ExperimentSpec::from_json({{"suite", "packing"}, {"typo", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentSpec::from_json({{"seed", "abc"}}), std::invalid_argument);
}

TEST_CASE("plot data round-trips and matches the documented columns") {
  const auto dir = scratch("plot");
  struct Run {
    std::string suite;
    std::vector<std::int64_t> sizes;
    std::optional<std::size_t> cases;
  };
  const std::vector<Run> runs = {{"vn-cyclic", {}, 4},
                                 {"packing", {32, 64}, std::nullopt},
                                 {"theorem1-demo", {32}, std::nullopt},
                                 {"dlvp", {256, 512}, std::nullopt},
                                 {"vn-interval", {16}, 6}};
  for (const auto& run : runs) {
    auto spec = small_spec(run.suite);
    spec.sizes = run.sizes;
    spec.cases = run.cases;
    const auto r = run_suite(spec);
    const auto paths = emit_plotdata(r, dir);
    REQUIRE(paths.size() == r.scatters.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const auto table = read_plotdata(paths[i]);
      const auto& sc = r.scatters[i];
      CHECK(table.columns == sc.columns);
      REQUIRE(table.rows.size() == sc.rows.size());
      CHECK_FALSE(table.comments.empty());
      for (std::size_t k = 0; k < sc.rows.size(); ++k)
        for (std::size_t j = 0; j < sc.columns.size(); ++j) {
          if (const auto* d = std::get_if<double>(&sc.rows[k][j]))
            CHECK(std::stod(table.rows[k][j]) == *d);
          else if (const auto* n = std::get_if<std::int64_t>(&sc.rows[k][j]))
            CHECK(std::stoll(table.rows[k][j]) == *n);
          else
            CHECK(table.rows[k][j] == std::get<std::string>(sc.rows[k][j]));
        }
    }
  }
}

TEST_CASE("empty scatter writes a header-only csv") {
  const auto dir = scratch("empty");
  Report r;
  r.suite = "empty";
  r.scatters.push_back({"none", "nothing measured", {"a", "b,c"}, {}});
  const auto paths = emit_plotdata(r, dir);
  REQUIRE(paths.size() == 1);
  const auto t = read_plotdata(paths[0]);
  CHECK(t.columns == std::vector<std::string>{"a", "b,c"});
  CHECK(t.rows.empty());
  std::ofstream(dir / "bad.csv") << "x,y\n1\n";
  CHECK_THROWS_AS(read_plotdata(dir / "bad.csv"), std::runtime_error);
}

TEST_CASE("report files") {
  const auto dir = scratch("report");
  auto spec = small_spec("flagify");
  spec.cases = 2;
  const auto r = run_suite(spec);
  const auto path = write_report(r, dir);
  CHECK(path.filename() == "flagify.json");
  const auto j = read_json_file(path);
  CHECK(j["suite"] == "flagify");
  CHECK(j["cases"].size() == 2);
  CHECK(j["code_version"] == kCodeVersion);
  CHECK(j.contains("wall_seconds"));
}

TEST_CASE("system, region and generator json") {
  const auto sys = system_from_json(nlohmann::json::parse(R"({"D":2,"forms":[[1,0],[1,1],[1,2]]})"));
  CHECK(sys.size() == 3);
  CHECK(system_from_json(system_to_json(sys)) == sys);
  CHECK_THROWS_AS(system_from_json(nlohmann::json::parse(R"({"D":3,"forms":[[1,0]]})")), SpecError);
  CHECK_THROWS_AS(system_from_json(nlohmann::json::parse(R"({"forms":"x"})")), SpecError);

  const auto region = region_from_json(
      nlohmann::json::parse(R"({"D":2,"N":5,"halfspaces":[{"g":[1,1],"beta":3}],"coset":{"q":2,"r":[0,1]}})"));
  CHECK(region.box().size() == 2);
  CHECK(region.box()[0].lo == -5);
  CHECK(region_from_json(region_to_json(region)).count() == region.count());

  GeneratorSpec g;
  g.kind = GeneratorKind::polynomial_phase;
  g.coefficients = {0.25, 0.125};
  auto j = generator_to_json(g);
  j["window"] = {-3, 3};
  const auto [back, window] = generator_from_json(j);
  REQUIRE(window);
  CHECK(generate(back, *window) == generate(g, {-3, 3}));
  CHECK_THROWS_AS(generator_from_json(nlohmann::json::parse(R"({"kind":"nope"})")), SpecError);

  const auto s = load_series(R"({"kind":"constant","value":[0.5,0]})", Interval{1, 4});
  CHECK(s.size() == 4);
  CHECK_THROWS_AS(load_series(R"({"kind":"constant"})", std::nullopt), SpecError);
  CHECK_THROWS_AS(load_series("/nonexistent.csv", std::nullopt), SpecError);
}

TEST_CASE("domain parsing") {
  CHECK(parse_domain("cyclic:31").cyclic_n == 31);
  const auto iv = parse_domain("interval:-4..9");
  CHECK(iv.interval.lo == -4);
  CHECK(iv.interval.hi == 9);
  const auto p = parse_domain("prog:3,2,5");
  CHECK(p.progression == Progression{3, 2, 5});
  for (const char* bad : {"cyclic:0", "interval:3", "prog:1,2", "disc:3", "cyclic:x"})
    CHECK_THROWS_AS(parse_domain(bad), SpecError);
}

TEST_CASE("shipped non-flag system reproduces from its search record") {
  const auto j = read_json_file(std::filesystem::path(GOWERSLAB_DATA_DIR) / "nonflag_system.json");
  const auto shipped = system_from_json(j);
  const auto& s = j["search"];
  NonFlagSearch opts;
  opts.dimension = s["dimension"].get<std::size_t>();
  opts.min_forms = s["min_forms"].get<std::size_t>();
  opts.max_forms = s["max_forms"].get<std::size_t>();
  opts.max_coeff = s["max_coeff"].get<std::int64_t>();
  opts.kmax = s["kmax"].get<int>();
  opts.attempts = s["attempts"].get<std::size_t>();
  CHECK(s["rng"] == Rng::kAlgorithm);
  Rng rng(s["seed"].get<std::uint64_t>());
  const auto found = search_non_flag_system(rng, opts);
  REQUIRE(found);
  CHECK(*found == shipped);
  const auto report = is_flag(shipped, 8);
  REQUIRE(report.first_violation());
  CHECK(*report.first_violation() == j["first_violation"].get<std::pair<int, int>>());
  CHECK(independence_degree(shipped, 6) == j["independence_degree"].get<int>());
  CHECK_FALSE(is_translation_invariant(shipped));
}
