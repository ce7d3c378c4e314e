#include "spls/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "spls/problems.hpp"

namespace spls {

void ExperimentConfig::validate() const {
  if (level_min < 0 || level_max < level_min) throw ConfigError("levels: need 0 <= min <= max");
  if (level_max > 12) throw ConfigError("levels: max level 12 exceeded");
  if (mesh == MeshFamily::Shishkin && level_min < 2)
    throw ConfigError("levels: the shishkin family needs level >= 2 (N multiple of 8)");
  for (double e : eps_list)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps: values must be positive and finite");
  if (fixed_tol && !(*fixed_tol > 0.0)) throw ConfigError("tol: must be positive");
  if (jobs < 1) throw ConfigError("jobs: must be at least 1");
  if (max_iter < 1) throw ConfigError("max_iter: must be at least 1");
}

double reference_tolerance(MeshFamily family, double eps) {
  if (family == MeshFamily::Uniform) return 1e-8;
  return eps >= 1e-9 ? 1e-10 : 1e-16;
}

double resolve_tolerance(const ExperimentConfig& cfg, double eps) {
  return cfg.fixed_tol ? *cfg.fixed_tol : reference_tolerance(cfg.mesh, eps);
}

LevelRun run_level(const ExperimentConfig& cfg, double eps, int level, bool check_residual_identity) {
  const ManufacturedProblem problem(eps);
  MultilevelContext ctx(build_hierarchy(level, cfg.mesh, eps, problem.coeffs.c_star), problem.coeffs,
                        cfg.mass_weight);
  const Mesh2D& mesh = ctx.hierarchy().finest();
  const SplsSystem sys(mesh, problem.coeffs);
  const auto precond = make_preconditioner(cfg.precond, ctx, cfg.sbvp_variant);

  LevelRun run;
  run.level = level;
  run.eps = eps;
  run.tol = resolve_tolerance(cfg, eps);
  run.num_test_dofs = sys.test_space().size();

  UzawaOptions opts;
  opts.tol = run.tol;
  opts.max_iter = cfg.max_iter;
  opts.check_residual_identity = check_residual_identity;
  const SplsSolution sol = upcg_solve(sys, sys.load(problem.f()), cfg.trial, *precond, opts);
  run.report = sol.report;
  run.error = cfg.mesh == MeshFamily::Uniform
                  ? q_norm_error(mesh, problem.sampler(), sol.p, eps, problem.coeffs.c)
                  : balanced_error(mesh, problem.sampler(), sol.p, eps);
  return run;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  for (double eps : cfg.eps_list)
    for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
      ResultRow r;
      r.level = level;
      r.n = intervals_at_level(level);
      r.eps = eps;
      r.order = std::numeric_limits<double>::quiet_NaN();
      rows.push_back(r);
    }

  auto solve_row = [&cfg](ResultRow& r) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const LevelRun run = run_level(cfg, r.eps, r.level);
      r.error = run.error;
      r.iterations = run.report.iterations;
    } catch (const SolverError& e) {
      r.failed = true;
      r.message = e.what();
      r.iterations = e.report().iterations;
    } catch (const std::exception& e) {
      r.failed = true;
      r.message = e.what();
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    r.wall_time_s = cfg.timing ? elapsed.count() : 0.0;
  };

  const int workers = std::min<int>(cfg.jobs, static_cast<int>(rows.size()));
  if (workers <= 1) {
    for (auto& r : rows) solve_row(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) solve_row(rows[i]);
      });
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const ResultRow& prev = rows[i - 1];
    ResultRow& cur = rows[i];
    if (prev.eps != cur.eps || prev.failed || cur.failed || prev.level + 1 != cur.level) continue;
    if (!(prev.error > 0.0) || !(cur.error > 0.0)) continue;
    cur.order = convergence_order({prev.error, cur.error}, cfg.mesh, prev.level).front();
  }
  return rows;
}

namespace {

std::string fmt6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::vector<std::string> cells(const ResultRow& r) {
  return {std::to_string(r.level),
          std::to_string(r.n),
          fmt6(r.eps),
          r.failed ? std::string("FAILED") : fmt6(r.error),
          std::isnan(r.order) ? std::string() : fmt6(r.order),
          std::to_string(r.iterations),
          fmt6(r.wall_time_s)};
}

std::string markdown(const std::vector<ResultRow>& rows) {
  const std::vector<std::string> header{"level", "N", "error", "order", "iterations", "wall_time_s"};
  std::vector<double> eps_order;
  std::map<double, std::vector<std::vector<std::string>>> groups;
  for (const auto& r : rows) {
    if (!groups.count(r.eps)) eps_order.push_back(r.eps);
    auto c = cells(r);
    c.erase(c.begin() + 2);
    if (c[3].empty()) c[3] = "-";
    groups[r.eps].push_back(std::move(c));
  }
  std::ostringstream os;
  for (std::size_t g = 0; g < eps_order.size(); ++g) {
    const auto& body = groups[eps_order[g]];
    std::vector<std::size_t> width(header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
      width[k] = header[k].size();
      for (const auto& row : body) width[k] = std::max(width[k], row[k].size());
    }
    if (g > 0) os << '\n';
    os << "eps = " << fmt6(eps_order[g]) << "\n\n";
    auto line = [&](const std::vector<std::string>& row) {
      os << '|';
      for (std::size_t k = 0; k < row.size(); ++k) os << ' ' << std::setw(static_cast<int>(width[k])) << row[k] << " |";
      os << '\n';
    };
    line(header);
    os << '|';
    for (std::size_t k = 0; k < header.size(); ++k) os << ' ' << std::string(width[k] - 1, '-') << ": |";
    os << '\n';
    for (const auto& row : body) line(row);
  }
  return os.str();
}

}  // namespace

std::string emit_table(const std::vector<ResultRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Markdown) return markdown(rows);
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto c = cells(r);
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
    os << '\n';
  }
  return os.str();
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

template <typename T>
T lookup(const std::string& what, const std::string& s, const std::vector<std::pair<const char*, T>>& table) {
  const std::string key = lower(s);
  for (const auto& [name, value] : table)
    if (key == name) return value;
  std::string names;
  for (const auto& [name, value] : table) names += (names.empty() ? "" : ", ") + std::string(name);
  throw ConfigError(what + ": unknown value '" + s + "' (expected one of " + names + ")");
}

}  // namespace

MeshFamily parse_mesh_family(const std::string& s) {
  return lookup<MeshFamily>("mesh", s, {{"uniform", MeshFamily::Uniform}, {"shishkin", MeshFamily::Shishkin}});
}

TrialSpace parse_trial(const std::string& s) {
  return lookup<TrialSpace>(
      "trial", s, {{"orth", TrialSpace::Orth}, {"lump", TrialSpace::Lump}, {"conforming", TrialSpace::Conforming}});
}

PreconditionerKind parse_precond(const std::string& s) {
  return lookup<PreconditionerKind>("precond", s,
                                    {{"sbvp", PreconditionerKind::sBVP},
                                     {"bvp", PreconditionerKind::BVP},
                                     {"mg-gs", PreconditionerKind::MG_GS},
                                     {"exact", PreconditionerKind::Exact},
                                     {"none", PreconditionerKind::Identity}});
}

SbvpVariant parse_sbvp_variant(const std::string& s) {
  return lookup<SbvpVariant>("sbvp-variant", s,
                             {{"mass", SbvpVariant::MassFinest}, {"diag", SbvpVariant::DiagFinest}});
}

MassWeight parse_mass_weight(const std::string& s) {
  return lookup<MassWeight>("mass-weight", s, {{"reaction", MassWeight::Reaction}, {"plain", MassWeight::Plain}});
}

OutputFormat parse_format(const std::string& s) {
  return lookup<OutputFormat>("format", s, {{"csv", OutputFormat::Csv}, {"markdown", OutputFormat::Markdown}});
}

std::vector<double> parse_eps_list(const std::string& s) {
  std::string text = s;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream is(text);
  std::vector<double> out;
  std::string token;
  while (is >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ConfigError("eps: cannot parse '" + token + "'");
    out.push_back(v);
  }
  return out;
}

std::pair<int, int> parse_level_range(const std::string& s) {
  std::string text = s;
  std::replace(text.begin(), text.end(), ':', '-');
  const auto dash = text.find('-');
  auto to_int = [&](const std::string& part) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw ConfigError("levels: cannot parse '" + s + "'");
    return v;
  };
  if (dash == std::string::npos) {
    const int v = to_int(text);
    return {v, v};
  }
  return {to_int(text.substr(0, dash)), to_int(text.substr(dash + 1))};
}

}  // namespace spls
