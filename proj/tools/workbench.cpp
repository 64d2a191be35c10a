#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gowerslab/averages.hpp"
#include "gowerslab/gowers.hpp"
#include "gowerslab/io.hpp"
#include "gowerslab/regions.hpp"
#include "gowerslab/summation.hpp"
#include "gowerslab/workbench.hpp"

#ifndef GOWERSLAB_DATA_DIR
#define GOWERSLAB_DATA_DIR "data"
#endif

using namespace gowerslab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 20240601;
  bool seed_given = false;
  unsigned jobs = 0;
  double tolerance = 0.0;
  std::string output_dir;
  std::string data_dir = GOWERSLAB_DATA_DIR;
};

nlohmann::json json_argument(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') {
    try {
      return nlohmann::json::parse(arg);
    } catch (const nlohmann::json::exception& err) {
      throw SpecError(std::string("inline JSON: ") + err.what());
    }
  }
  return read_json_file(arg);
}

LinearSystem system_argument(const std::string& arg) { return system_from_json(json_argument(arg)); }

std::string output_dir(const Globals& g) {
  if (!g.output_dir.empty()) return g.output_dir;
  if (const char* env = std::getenv("GOWERSLAB_OUTPUT_DIR"); env && *env) return env;
  return "reports";
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int run_reports(const Globals& g, ExperimentSpec base, const std::vector<std::string>& suites) {
  const std::string dir = output_dir(g);
  bool all_pass = true;
  for (const auto& name : suites) {
    ExperimentSpec spec = base;
    spec.suite = name;
    const Report r = run_suite(spec);
    write_report(r, dir);
    emit_plotdata(r, dir);
    std::size_t failed = 0;
    for (const auto& c : r.cases) failed += c.pass() ? 0 : 1;
    const bool ok = r.pass() && r.within_wall_limit();
    all_pass = all_pass && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << r.cases.size() - failed << "/" << r.cases.size()
              << " cases, " << r.wall_seconds << " s";
    if (r.wall_limit_seconds > 0) std::cout << " (limit " << r.wall_limit_seconds << " s)";
    std::cout << '\n';
    for (const auto& c : r.cases)
      if (!c.pass()) {
        std::cout << "  failing case " << c.id << ":";
        for (const auto& b : c.failures()) std::cout << ' ' << b;
        std::cout << '\n';
      }
  }
  return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gowers-norm and linear-forms workbench"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Corpus seed")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--jobs", g.jobs, "Worker threads (0 = hardware concurrency)");
  app.add_option("--tolerance", g.tolerance, "Override the suite tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--output-dir", g.output_dir, "Report directory (default $GOWERSLAB_OUTPUT_DIR or ./reports)");
  app.add_option("--data-dir", g.data_dir, "Directory holding shipped inputs");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Flag condition, power spans, complexities and flagification of a system");
  std::string a_system;
  int a_kmax = 6;
  analyze->add_option("--system", a_system, "System JSON file or inline {\"D\":..,\"forms\":..}")->required();
  analyze->add_option("--kmax", a_kmax, "Largest degree checked")->check(CLI::Range(1, 12));

  // norm
  auto* norm = app.add_subcommand("norm", "Gowers norm of a series on a finite set or Z_N");
  std::string n_series, n_domain;
  int n_order = 2;
  std::string n_method = "fast";
  norm->add_option("--series", n_series, "Series file (.csv/.json) or inline generator JSON")->required();
  norm->add_option("--order", n_order, "k in U^k (k >= 2)")->check(CLI::Range(2, 8));
  norm->add_option("--domain", n_domain, "cyclic:N, interval:a..b or prog:start,step,len")->required();
  norm->add_option("--method", n_method, "fast or oracle")->check(CLI::IsMember({"fast", "oracle"}));

  // average
  auto* average = app.add_subcommand("average", "Multilinear average of a system over a region");
  std::string v_system, v_region;
  std::vector<std::string> v_series;
  std::int64_t v_shift = 0, v_n = 0;
  bool v_pipeline = false;
  int v_norm_order = 0;
  average->add_option("--system", v_system, "System JSON file or inline")->required();
  average->add_option("--series", v_series, "One series per form, in order")->required();
  average->add_option("--region", v_region, "Region JSON file or inline (default: preimage region of --n)");
  average->add_option("--n", v_n, "N: window [-N, N] for generators and the default region");
  average->add_option("--shift", v_shift, "Shift c in psi_i(x) + c");
  average->add_flag("--pipeline", v_pipeline, "Run the flagification pipeline over the box [-N, N]^D");
  average->add_option("--norm-order", v_norm_order, "Annotate each function with its U^k[-N,N] norm")->check(CLI::Range(2, 8));

  // pack
  auto* pack = app.add_subcommand("pack", "Dilated-cube packing of a region, with an exactness check");
  std::string p_region;
  std::int64_t p_q = 1, p_n = 0;
  double p_eps = 0.25;
  bool p_cells = false;
  std::string p_form;
  pack->add_option("--region", p_region, "Region JSON file or inline")->required();
  pack->add_option("--q", p_q, "Modulus")->check(CLI::PositiveNumber);
  pack->add_option("--eps", p_eps, "Cube scale eps'");
  pack->add_option("--n", p_n, "N (default: from the region's N)");
  pack->add_flag("--cells", p_cells, "List every cell and boundary point");
  pack->add_option("--form", p_form, "Also report max incidence for this form, e.g. [1,2]");

  // verify
  auto* verify = app.add_subcommand("verify", "Run acceptance suites and write reports");
  std::vector<std::string> r_suites;
  bool r_all = false;
  std::string r_fault, r_spec;
  std::optional<std::size_t> r_cases;
  verify->add_option("--suite", r_suites, "Suite name (repeatable)")->check(CLI::IsMember(suite_names()));
  verify->add_flag("--all", r_all, "Run every suite");
  verify->add_option("--inject-fault", r_fault, "Corrupt the reference values of this case id");
  verify->add_option("--spec", r_spec, "Experiment spec JSON (CLI flags take precedence)");
  verify->add_option("--cases", r_cases, "Per-configuration case count override");
  verify->add_flag_callback("--list", [] {
    for (const auto& s : suite_names()) std::cout << s << '\n';
    std::exit(kExitPass);
  }, "List suite names");

  // demo
  auto* demo = app.add_subcommand("demo", "Norm-versus-average demonstration with scatter output");
  std::vector<std::int64_t> d_sizes;
  demo->add_option("--n", d_sizes, "N schedule (each <= 512)")->default_val(std::vector<std::int64_t>{256});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    set_default_jobs(g.jobs);
    if (analyze->parsed()) {
      print(analysis_to_json(system_argument(a_system), a_kmax));
      return kExitPass;
    }
    if (norm->parsed()) {
      const int s = n_order - 1;
      const auto domain = parse_domain(n_domain);
      std::optional<Interval> window;
      if (domain.kind == DomainSpec::Kind::cyclic) window = Interval{0, domain.cyclic_n - 1};
      else if (domain.kind == DomainSpec::Kind::interval) window = domain.interval;
      else window = Interval{domain.progression.min(), domain.progression.max()};
      const Series f = load_series(n_series, window);
      NormReport rep;
      if (domain.kind == DomainSpec::Kind::cyclic) {
        std::vector<Complex> values(static_cast<std::size_t>(domain.cyclic_n));
        for (std::int64_t x = 0; x < domain.cyclic_n; ++x) values[static_cast<std::size_t>(x)] = f(x);
        rep = norm_cyclic(values, s, g.jobs);
      } else {
        const auto set = domain.kind == DomainSpec::Kind::interval ? FiniteSet::interval(domain.interval)
                                                                   : FiniteSet::progression(domain.progression);
        rep = norm_subset(f, set, s, n_method == "oracle" ? NormMethod::oracle : NormMethod::fast, g.jobs);
      }
      print(norm_report_to_json(rep, g.tolerance));
      return kExitPass;
    }
    if (average->parsed()) {
      const auto system = system_argument(v_system);
      if (v_series.size() != system.size())
        throw SpecError("average: " + std::to_string(system.size()) + " forms but " + std::to_string(v_series.size()) +
                        " series");
      const std::optional<Interval> window = v_n > 0 ? std::optional<Interval>(Interval{-v_n, v_n}) : std::nullopt;
      std::vector<Series> fs;
      for (const auto& s : v_series) fs.push_back(load_series(s, window));
      AverageReport rep;
      if (v_pipeline) {
        if (v_n <= 0) throw SpecError("average --pipeline needs --n");
        rep = reduction_pipeline(system, fs, v_n, g.tolerance > 0 ? g.tolerance : 1e-12, g.jobs);
      } else {
        LatticeRegion region = v_region.empty() ? (v_n > 0 ? preimage_region(system, v_n) : throw SpecError("average needs --region or --n"))
                                                : region_from_json(json_argument(v_region));
        rep = multilinear_average(system, fs, region, v_shift, g.jobs);
      }
      if (v_norm_order) {
        if (v_n <= 0) throw SpecError("--norm-order needs --n");
        for (std::size_t i = 0; i < fs.size(); ++i)
          rep.norms.push_back({i, v_norm_order,
                               norm_subset(fs[i], FiniteSet::interval({-v_n, v_n}), v_norm_order - 1, NormMethod::fast, g.jobs).value});
      }
      print(average_report_to_json(rep));
      if (rep.trace && !(rep.trace->identity_holds && rep.trace->bound_holds)) return kExitFail;
      return kExitPass;
    }
    if (pack->parsed()) {
      const auto rj = json_argument(p_region);
      const auto region = region_from_json(rj);
      std::int64_t n = p_n;
      if (n <= 0) {
        if (!rj.contains("N")) throw SpecError("pack: give --n or a region with N");
        n = rj["N"].get<std::int64_t>();
      }
      CellPartition part;
      try {
        part = pack_cubes(region, p_q, p_eps, n);
      } catch (const std::invalid_argument& err) {
        throw SpecError(std::string("pack: ") + err.what());
      }
      const auto check = verify_partition(region, part);
      auto j = partition_to_json(part, check, p_cells);
      if (!p_form.empty()) {
        std::vector<std::int64_t> coeffs;
        try {
          coeffs = nlohmann::json::parse(p_form).get<std::vector<std::int64_t>>();
        } catch (const nlohmann::json::exception&) {
          throw SpecError("pack: --form must be a JSON list of integers");
        }
        if (coeffs.size() != region.dimension()) throw SpecError("pack: --form needs D coefficients");
        j["max_incidence"] = max_incidence(part, LinearForm(coeffs), 0);
      }
      print(j);
      return check.exact() ? kExitPass : kExitFail;
    }
    if (verify->parsed()) {
      ExperimentSpec spec;
      if (!r_spec.empty()) {
        try {
          spec = ExperimentSpec::from_json(read_json_file(r_spec));
        } catch (const std::invalid_argument& err) {
          throw SpecError(err.what());
        }
        if (!spec.suite.empty() && r_suites.empty() && !r_all) r_suites.push_back(spec.suite);
      }
      if (g.seed_given) spec.seed = g.seed;
      if (g.tolerance > 0) spec.tolerance = g.tolerance;
      if (g.jobs) spec.jobs = g.jobs;
      if (r_cases) spec.cases = r_cases;
      if (!r_fault.empty()) spec.inject_fault = r_fault;
      if (spec.data_dir.empty()) spec.data_dir = g.data_dir;
      if (r_all) r_suites = suite_names();
      if (r_suites.empty()) throw SpecError("verify: give --suite, --all or a spec naming a suite");
      return run_reports(g, spec, r_suites);
    }
    if (demo->parsed()) {
      int code = kExitPass;
      for (auto n : d_sizes) {
        ExperimentSpec spec;
        spec.seed = g.seed;
        spec.jobs = g.jobs;
        spec.sizes = {n};
        spec.data_dir = g.data_dir;
        if (n > 512) throw SpecError("demo: N = " + std::to_string(n) + " exceeds 512");
        Globals sized = g;
        sized.output_dir = output_dir(g) + "/demo-N" + std::to_string(n);
        code = std::max(code, run_reports(sized, spec, {"theorem1-demo"}));
      }
      return code;
    }
  } catch (const SpecError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    // bad arguments, unknown suites, missing files and unbounded inputs
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
