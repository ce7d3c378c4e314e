#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "spls/assembly.hpp"
#include "spls/experiment.hpp"

namespace spls {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilevel-preconditioned SPLS solver for -eps Lap u + c u = f on the unit square"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");

  std::string mesh = "uniform", eps = "1e-1", levels = "1-6", trial = "orth", precond = "sbvp";
  std::string tol = "reference", format = "csv", variant = "mass", weight = "reaction";
  std::string out_path, dump_mesh;
  std::uint64_t seed = 0;
  int jobs = 1;
  int max_iter = 10000;
  bool no_timing = false;

  app.add_option("--mesh", mesh, "uniform | shishkin")->capture_default_str();
  app.add_option("--eps", eps, "comma-separated eps values; empty runs nothing")->capture_default_str();
  app.add_option("--levels", levels, "level range a-b or a single level")->capture_default_str();
  app.add_option("--trial", trial, "orth | lump | conforming")->capture_default_str();
  app.add_option("--precond", precond, "sbvp | bvp | mg-gs | exact | none")->capture_default_str();
  app.add_option("--tol", tol, "stopping tolerance on ||q||_Q, or 'reference'")->capture_default_str();
  app.add_option("--format", format, "csv | markdown")->capture_default_str();
  app.add_option("--seed", seed, "seed recorded for randomized suites")->capture_default_str();
  app.add_option("--out", out_path, "write the table here instead of stdout");
  app.add_option("--jobs", jobs, "worker threads for the sweep")->capture_default_str();
  app.add_option("--max-iter", max_iter, "Uzawa iteration limit per row")->capture_default_str();
  app.add_flag("--no-timing", no_timing, "report wall times as 0 for reproducible output");
  app.add_option("--sbvp-variant", variant, "mass | diag (finest term of sBVP)")->capture_default_str();
  app.add_option("--mass-weight", weight, "reaction | plain (level masses in sBVP/BVP)")->capture_default_str();
  app.add_option("--dump-mesh", dump_mesh, "write the finest mesh of the first run to this file and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  ExperimentConfig cfg;
  try {
    cfg.mesh = parse_mesh_family(mesh);
    cfg.eps_list = parse_eps_list(eps);
    std::tie(cfg.level_min, cfg.level_max) = parse_level_range(levels);
    cfg.trial = parse_trial(trial);
    cfg.precond = parse_precond(precond);
    cfg.sbvp_variant = parse_sbvp_variant(variant);
    cfg.mass_weight = parse_mass_weight(weight);
    cfg.format = parse_format(format);
    if (tol != "reference") {
      const auto values = parse_eps_list(tol);
      if (values.size() != 1) throw ConfigError("tol: expected one number or 'reference'");
      cfg.fixed_tol = values.front();
    }
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.max_iter = max_iter;
    cfg.timing = !no_timing;
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }

  if (!dump_mesh.empty()) {
    const double e = cfg.eps_list.empty() ? 1.0 : cfg.eps_list.front();
    std::ofstream file(dump_mesh);
    if (!file) {
      err << "error: cannot open " << dump_mesh << '\n';
      return 2;
    }
    write_mesh(file, build_hierarchy(cfg.level_max, cfg.mesh, e, ProblemCoefficients::reaction_example(e).c_star).finest());
    return 0;
  }

  const auto rows = run_experiment(cfg);
  const std::string table = emit_table(rows, cfg.format);
  if (out_path.empty()) {
    out << table;
  } else {
    std::ofstream file(out_path);
    if (!file) {
      err << "error: cannot open " << out_path << '\n';
      return 2;
    }
    file << table;
  }

  int status = 0;
  for (const auto& r : rows)
    if (r.failed) {
      err << "row failed: eps=" << r.eps << " level=" << r.level << ": " << r.message << '\n';
      status = 1;
    }
  return status;
}

}  // namespace spls
