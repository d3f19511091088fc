#pragma once

/**
 * @file algorithms.hpp
 * @brief Front Steepest Descent (FSD) and Improved Front Steepest Descent (IFSD).
 *
 * Both drivers keep a mutually nondominated archive X^k and, within an
 * iteration, a working copy that is updated after every accepted search.
 * Members are visited in ascending id order and objective subsets by
 * cardinality, then lexicographically, so a run is a deterministic function
 * of its inputs.
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frontsd/counters.hpp"
#include "frontsd/dominance.hpp"
#include "frontsd/linesearch.hpp"
#include "frontsd/problems.hpp"

namespace frontsd {

enum class SubsetPolicy { all_nonempty, exclude_full_in_partial_loop };

/// Gate for IFSD's partial-descent loop based on the crowding distance.
struct CrowdingMode {
  bool enabled = false;
  double quantile = 0.5;

  static CrowdingMode off() { return {}; }
  static CrowdingMode at_quantile(double q) { return {true, q}; }
};

struct SolverConfig {
  LineSearchParams linesearch;
  /// Stationarity threshold used for reporting and validation.
  double eps_theta = 1e-6;
  /// A search is started only when theta < -descent_tol, which screens out
  /// round-off valued thetas at stationary points.
  double descent_tol = 1e-12;
  int max_iterations = 200;
  /// Function evaluation budget; 0 disables it. Checked after every search.
  std::uint64_t max_evaluations = 20'000;
  SubsetPolicy subset_policy = SubsetPolicy::all_nonempty;
  CrowdingMode crowding = CrowdingMode::at_quantile(0.5);
  /// Seed for initial point sampling; the drivers themselves are deterministic.
  std::uint64_t seed = 0;
  /// Keep every intermediate snapshot (otherwise only the first and last).
  bool record_snapshots = true;

  void validate() const;
};

/// A search started from a member along a subset's direction.
struct Launch {
  std::uint64_t member_id = 0;
  std::string subset;

  friend bool operator==(const Launch&, const Launch&) = default;
};

struct IterationRecord {
  int k = 0;
  std::size_t member_count = 0;
  /// Cumulative function evaluations at the end of the iteration.
  std::uint64_t evaluations = 0;
  /// Largest |theta(x)| over the members of X^k.
  double max_theta = 0.0;
  std::vector<Launch> launches;
  double wallclock_seconds = 0.0;
};

struct RunTrace {
  std::string solver;
  int n = 0;
  int m = 0;
  /// Every member ever created, in ascending id order.
  std::vector<FrontMember> members;
  /// Ids of X^0, X^1, ...; with record_snapshots off only X^0 and the last.
  std::vector<std::vector<std::uint64_t>> snapshots;
  /// iterations[k-1] describes the iteration that produced X^k.
  std::vector<IterationRecord> iterations;
  CounterSnapshot counters;
  std::string stop_reason;

  const FrontMember& member(std::uint64_t id) const;
  Archive snapshot(std::size_t index) const;
  Archive final_archive() const;
};

/// Stop reason if the run should stop, nullopt otherwise.
std::optional<std::string> stop_reason(const RunTrace& trace, const SolverConfig& config);
bool stopping_rule(const RunTrace& trace, const SolverConfig& config);

/// Standard crowding distance; boundary members get +inf. Needs |A| >= 1.
std::vector<double> crowding_distances(const Archive& archive);

/// Linear-interpolation quantile of the finite values; nullopt if there are none.
std::optional<double> finite_quantile(std::vector<double> values, double q);

/// Verifies a seed archive against the problem; throws InputError.
void validate_seed_archive(const Problem& problem, const Archive& seeds);
/// Evaluates seed points and builds the archive; dominated seeds raise InputError.
Archive make_seed_archive(const Problem& problem, const std::vector<DecisionPoint>& points);

RunTrace fsd_run(const Problem& problem, const Archive& seeds, const SolverConfig& config);
RunTrace ifsd_run(const Problem& problem, const Archive& seeds, const SolverConfig& config);

/// One JSON object per iteration: {"k","member_count","evaluations","max_theta"}.
void write_trace_jsonl(std::ostream& out, const RunTrace& trace);

}  // namespace frontsd
