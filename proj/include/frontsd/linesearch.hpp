#pragma once

/**
 * @file linesearch.hpp
 * @brief Backtracking searches used by the front descent drivers.
 *
 * Every search tries alpha = alpha0 * delta^h for h = 0, 1, ..., max_halvings
 * and returns the first accepted step. Trial points whose objectives are not
 * finite are rejected like any other failing trial. When no trial is accepted
 * a LineSearchFailure is thrown and counted.
 */

#include "frontsd/counters.hpp"
#include "frontsd/dominance.hpp"
#include "frontsd/problems.hpp"

namespace frontsd {

struct LineSearchParams {
  double alpha0 = 1.0;
  double delta = 0.5;
  double gamma = 1e-4;
  int max_halvings = 60;

  /// Throws UsageError if any field is out of range.
  void validate() const;
};

struct LineSearchResult {
  double alpha = 0.0;
  int halvings = 0;
  DecisionPoint point;
  ObjectiveVector value;
};

/// alpha0 * delta^h, computed the same way by every search.
double trial_step(const LineSearchParams& params, int h);

/**
 * Front Armijo search: accepts the first alpha such that no member y of the
 * F_I-nondominated part of `archive` satisfies
 * F_I(y) + 1 gamma alpha theta < F_I(x_c + alpha v) componentwise.
 *
 * Requires theta < 0 and x_c nondominated w.r.t. F_I within `archive`.
 */
LineSearchResult armijo_front(const Problem& problem, const SubsetIndex& subset,
                              const Archive& archive, const FrontMember& x_c,
                              const Eigen::VectorXd& v, double theta,
                              const LineSearchParams& params, EvalCounters* counters = nullptr);

/// Single-point vector Armijo: F(x + alpha v) <= F(x) + 1 gamma alpha theta. Requires theta < 0.
LineSearchResult armijo_single(const Problem& problem, const FrontMember& x_c,
                               const Eigen::VectorXd& v, double theta,
                               const LineSearchParams& params, EvalCounters* counters = nullptr);

/**
 * Accepts the first alpha such that every y in `archive` is beaten by the
 * trial point in at least one objective (f_j(z + alpha v) < f_j(y)).
 *
 * Requires theta < 0 for the direction and z nondominated within `archive`.
 */
LineSearchResult nondominance_backtrack(const Problem& problem, const Archive& archive,
                                        const FrontMember& z, const Eigen::VectorXd& v,
                                        double theta, const LineSearchParams& params,
                                        EvalCounters* counters = nullptr);

}  // namespace frontsd
