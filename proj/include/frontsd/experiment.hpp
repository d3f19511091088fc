#pragma once

/**
 * @file experiment.hpp
 * @brief Experiment grids, artifact layout and front validation.
 *
 * Layout under the output directory:
 *   fronts/<solver>/<instance>.csv     archive CSV of the final front
 *   traces/<solver>/<instance>.jsonl   one line per iteration
 *   metrics.csv                        solver,instance,purity,gamma,delta,hv
 *   profiles.csv                       metric,solver,tau,rho
 *   manifest.json                      config, seeds, per-run status, wallclock
 *
 * Everything except the manifest's timing fields is a function of the
 * configuration alone, whatever the number of workers.
 */

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontsd/algorithms.hpp"
#include "frontsd/problems.hpp"

namespace frontsd {

inline constexpr const char* kVersion = "0.1.0";

struct ProblemSpec {
  std::string name;
  int n = 0;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct ExperimentConfig {
  std::vector<ProblemSpec> problems;
  std::vector<StartStrategy> strategies{StartStrategy::uniform_diagonal, StartStrategy::midpoint};
  std::vector<std::string> solvers{"FSD", "IFSD"};
  SolverConfig solver_config;
  std::string output_dir = "results";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool allow_experimental = false;

  /// Throws UsageError on empty grids, unknown solvers or bad jobs.
  void validate() const;
};

/// Five problems, eight dimensions, experimental problems included.
std::vector<ProblemSpec> benchmark_grid();

/**
 * Flat `key = value` settings; `#` starts a comment, values may be quoted and
 * lists are comma separated, optionally in brackets. Later keys win.
 */
using Settings = std::vector<std::pair<std::string, std::string>>;
Settings parse_settings(std::istream& in);
Settings parse_settings_file(const std::string& path);

/// Applies settings in order; unknown keys and bad values raise UsageError.
void apply_settings(ExperimentConfig& config, const Settings& settings);

/// e.g. JOS_1_n5_midpoint.
std::string instance_name(const ProblemSpec& problem, StartStrategy strategy);

struct InstanceId {
  ProblemSpec problem;
  StartStrategy strategy = StartStrategy::midpoint;
};
/// Inverse of instance_name; nullopt if the text does not have that shape.
std::optional<InstanceId> parse_instance_name(std::string_view name);

/// Seed for an instance's start points, mixed from the global seed and the name.
std::uint64_t instance_seed(std::uint64_t global_seed, std::string_view instance);

/// Runs one solver ("FSD" or "IFSD") on prepared seeds.
RunTrace run_solver(std::string_view solver, const Problem& problem, const Archive& seeds,
                    const SolverConfig& config);

struct RunStatus {
  std::string solver;
  std::string instance;
  bool ok = false;
  std::string error;
  std::string stop_reason;
  std::size_t front_size = 0;
  std::uint64_t evaluations = 0;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<RunStatus> runs;
  /// Instance names in grid order.
  std::vector<std::string> instances;
  double seconds = 0.0;
};

/// Executes the grid and writes the artifact tree; errors in single runs are recorded, not thrown.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct PointCheck {
  std::uint64_t id = 0;
  std::size_t line = 0;
  double max_abs_diff = 0.0;
  double theta = 0.0;
  bool stationary = false;
};

struct ValidationReport {
  std::string path;
  std::string problem;
  int n = 0;
  std::optional<std::string> format_error;
  std::vector<PointCheck> points;
  /// (dominating id, dominated id) pairs; repeated vectors are listed too.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> nondominance_violations;
  /// Largest stored-versus-recomputed difference that still counts as a match.
  double value_tolerance = 0.0;
  double eps_theta = 1e-6;

  bool values_match() const;
  bool all_stationary() const;
  /// Format, recomputed objectives and nondominance; stationarity only if asked.
  bool passed(bool require_stationary) const;
};

/**
 * Loads a front CSV and checks it. Without a problem name the name is taken
 * from the file stem (an instance name); the dimension comes from the header.
 */
ValidationReport validate_front(const std::string& path,
                                const std::optional<std::string>& problem = std::nullopt,
                                double eps_theta = 1e-6);
void print_report(std::ostream& out, const ValidationReport& report);

}  // namespace frontsd
