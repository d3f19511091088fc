#pragma once

/**
 * @file direction.hpp
 * @brief Steepest common and partial descent directions.
 *
 * For gradients g_j, j in I, the direction subproblem
 *
 *     min_d  max_{j in I} g_j^T d + 1/2 ||d||^2
 *
 * is solved through its dual, the minimum-norm point of the convex hull of
 * the gradients: minimize 1/2 ||sum_j lambda_j g_j||^2 over the unit simplex.
 * Then d = -sum_j lambda_j g_j and theta = -1/2 ||d||^2.
 */

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "frontsd/counters.hpp"
#include "frontsd/dominance.hpp"
#include "frontsd/problems.hpp"

namespace frontsd {

struct DirectionResult {
  Eigen::VectorXd d;
  /// Optimal value of the subproblem; always <= 0.
  double theta = 0.0;
  /// Dual weights on the simplex, one per gradient.
  Eigen::VectorXd lambda;
  int iterations = 0;
  double kkt_residual = 0.0;
};

struct DualSolverOptions {
  int max_iterations = 10000;
  double kkt_tolerance = 1e-9;
};

/// Euclidean projection onto {lambda >= 0, sum lambda = 1}.
Eigen::VectorXd project_onto_simplex(const Eigen::VectorXd& v);

/**
 * Solves the direction subproblem for the given gradient rows.
 *
 * One and two gradients are handled in closed form and three by comparing
 * the minimum-norm points of the triangle's faces. Larger sets, and any
 * three-gradient case left above tolerance by round-off, use projected
 * gradient on the simplex with Barzilai-Borwein steps and exact line search.
 * The KKT residual is ||lambda - P(lambda - Q lambda / tr Q)||_inf with Q the
 * Gram matrix of the gradients.
 *
 * Throws InputError for non-finite gradients and SolverError when the
 * iteration cap is hit before the residual tolerance.
 */
DirectionResult solve_direction(const Eigen::MatrixXd& gradients,
                                const DualSolverOptions& options = {});

/// Rows `subset` of the problem Jacobian at x, fed to solve_direction.
DirectionResult theta_and_v(const Problem& problem, const DecisionPoint& x,
                            const SubsetIndex& subset, EvalCounters* counters = nullptr);

/// theta(x) over all objectives >= -eps_theta.
bool is_pareto_stationary(const Problem& problem, const DecisionPoint& x, double eps_theta = 1e-6,
                          EvalCounters* counters = nullptr);

/// Bit mask of a subset, used as a cache key.
std::uint32_t subset_mask(const SubsetIndex& subset);

/**
 * Per-run cache of Jacobians and direction results keyed by member id. A
 * member's decision point never changes, so each Jacobian is computed once
 * and shared by all 2^m - 1 subsets. Single writer.
 */
class DirectionCache {
 public:
  DirectionCache(const Problem& problem, EvalCounters* counters, DualSolverOptions options = {});

  const Eigen::MatrixXd& jacobian(std::uint64_t id, const DecisionPoint& x);
  const DirectionResult& direction(std::uint64_t id, const DecisionPoint& x,
                                   const SubsetIndex& subset);
  /// Drops entries whose id is not in the archive.
  void retain_only(const Archive& archive);
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    Eigen::MatrixXd jacobian;
    std::unordered_map<std::uint32_t, DirectionResult> results;
  };

  Entry& entry(std::uint64_t id, const DecisionPoint& x);

  const Problem& problem_;
  EvalCounters* counters_;
  DualSolverOptions options_;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

}  // namespace frontsd
