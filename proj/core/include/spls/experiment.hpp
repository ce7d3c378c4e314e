#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spls/mesh.hpp"
#include "spls/multilevel.hpp"
#include "spls/spls.hpp"

namespace spls {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Csv, Markdown };

struct ExperimentConfig {
  MeshFamily mesh = MeshFamily::Uniform;
  std::vector<double> eps_list;
  int level_min = 1;
  int level_max = 6;
  TrialSpace trial = TrialSpace::Orth;
  PreconditionerKind precond = PreconditionerKind::sBVP;
  SbvpVariant sbvp_variant = SbvpVariant::MassFinest;
  MassWeight mass_weight = MassWeight::Reaction;
  /// Unset: per-family tolerances of reference_tolerance().
  std::optional<double> fixed_tol;
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 0;
  int jobs = 1;
  /// When false, wall times are reported as 0 so output is byte-reproducible.
  bool timing = true;
  int max_iter = 10000;

  /// Throws ConfigError.
  void validate() const;
};

/// Stopping tolerance on ||q||_Q: 1e-8 on uniform meshes; on Shishkin meshes
/// 1e-10 down to eps = 1e-8 and 1e-16 below.
double reference_tolerance(MeshFamily family, double eps);
double resolve_tolerance(const ExperimentConfig& cfg, double eps);

struct ResultRow {
  int level = 0;
  int n = 0;
  double eps = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN on the first level of a sweep or after a failure
  int iterations = 0;
  double wall_time_s = 0.0;
  bool failed = false;
  std::string message;
};

/// One (eps, level) cell with the full solver output.
struct LevelRun {
  int level = 0;
  double eps = 0.0;
  double tol = 0.0;
  double error = 0.0;
  SolveReport report;
  int num_test_dofs = 0;
};

/// Error is the Q-norm distance on uniform meshes and the balanced-norm
/// distance on Shishkin meshes.
LevelRun run_level(const ExperimentConfig& cfg, double eps, int level, bool check_residual_identity = false);

/// Rows ordered by (eps as listed, level). Solver failures become rows with
/// failed = true; the sweep continues.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

std::string emit_table(const std::vector<ResultRow>& rows, OutputFormat format);

inline constexpr const char* kCsvHeader = "level,N,eps,error,order,iterations,wall_time_s";

MeshFamily parse_mesh_family(const std::string& s);
TrialSpace parse_trial(const std::string& s);
PreconditionerKind parse_precond(const std::string& s);
SbvpVariant parse_sbvp_variant(const std::string& s);
MassWeight parse_mass_weight(const std::string& s);
OutputFormat parse_format(const std::string& s);
/// Comma- or whitespace-separated reals; empty input gives an empty list.
std::vector<double> parse_eps_list(const std::string& s);
/// "a-b", "a:b" or a single level.
std::pair<int, int> parse_level_range(const std::string& s);

}  // namespace spls
