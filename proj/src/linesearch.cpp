#include "frontsd/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "frontsd/errors.hpp"

namespace frontsd {

void LineSearchParams::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw UsageError("alpha0 must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0,1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw UsageError("gamma must lie in (0,1)");
  if (max_halvings < 1) throw UsageError("max_halvings must be >= 1");
}

double trial_step(const LineSearchParams& params, int h) {
  return params.alpha0 * std::pow(params.delta, h);
}

namespace {

void require_descent(double theta, const char* who) {
  if (!(theta < 0.0)) {
    throw ContractError(std::string(who) + ": requires theta < 0");
  }
}

void require_direction(const Problem& problem, const FrontMember& base, const Eigen::VectorXd& v) {
  if (v.size() != problem.n() || base.x.size() != problem.n()) {
    throw UsageError("line search: point/direction dimension does not match the problem");
  }
}

// Evaluates one trial; nullopt when the objectives are not finite.
std::optional<ObjectiveVector> try_evaluate(const Problem& problem, const DecisionPoint& x,
                                            EvalCounters* counters) {
  bump(&EvalCounters::evaluations, counters);
  Eigen::VectorXd f = problem.evaluate(x);
  if (!f.allFinite()) return std::nullopt;
  return ObjectiveVector(std::move(f));
}

template <typename Accept>
LineSearchResult backtrack(const Problem& problem, const FrontMember& base,
                           const Eigen::VectorXd& v, const LineSearchParams& params,
                           EvalCounters* counters, const char* who, Accept&& accept) {
  params.validate();
  for (int h = 0; h <= params.max_halvings; ++h) {
    const double alpha = trial_step(params, h);
    DecisionPoint trial = base.x + alpha * v;
    auto value = try_evaluate(problem, trial, counters);
    if (value && accept(*value, alpha)) {
      return {alpha, h, std::move(trial), std::move(*value)};
    }
  }
  bump(&EvalCounters::linesearch_failures, counters);
  throw LineSearchFailure(std::string(who) + ": no acceptable step within " +
                              std::to_string(params.max_halvings) + " halvings",
                          params.max_halvings);
}

}  // namespace

LineSearchResult armijo_front(const Problem& problem, const SubsetIndex& subset,
                              const Archive& archive, const FrontMember& x_c,
                              const Eigen::VectorXd& v, double theta,
                              const LineSearchParams& params, EvalCounters* counters) {
  require_descent(theta, "armijo_front");
  require_direction(problem, x_c, v);
  for (const auto& y : archive) {
    if (dominates_on(y.fx, x_c.fx, subset)) {
      throw ContractError("armijo_front: x_c is dominated w.r.t. " + subset.label());
    }
  }
  const std::vector<std::size_t> front_i = nondominated_positions_wrt(archive, subset);
  return backtrack(problem, x_c, v, params, counters, "armijo_front",
                   [&](const ObjectiveVector& f, double alpha) {
                     const double shift = params.gamma * alpha * theta;
                     for (std::size_t pos : front_i) {
                       const ObjectiveVector& y = archive[pos].fx;
                       bool sufficiently_better = true;
                       for (int j : subset.indices()) {
                         const auto k = static_cast<std::size_t>(j);
                         if (!(y[k] + shift < f[k])) {
                           sufficiently_better = false;
                           break;
                         }
                       }
                       if (sufficiently_better) return false;
                     }
                     return true;
                   });
}

LineSearchResult armijo_single(const Problem& problem, const FrontMember& x_c,
                               const Eigen::VectorXd& v, double theta,
                               const LineSearchParams& params, EvalCounters* counters) {
  require_descent(theta, "armijo_single");
  require_direction(problem, x_c, v);
  return backtrack(problem, x_c, v, params, counters, "armijo_single",
                   [&](const ObjectiveVector& f, double alpha) {
                     const double shift = params.gamma * alpha * theta;
                     for (std::size_t j = 0; j < f.size(); ++j) {
                       if (!(f[j] <= x_c.fx[j] + shift)) return false;
                     }
                     return true;
                   });
}

LineSearchResult nondominance_backtrack(const Problem& problem, const Archive& archive,
                                        const FrontMember& z, const Eigen::VectorXd& v,
                                        double theta, const LineSearchParams& params,
                                        EvalCounters* counters) {
  require_descent(theta, "nondominance_backtrack");
  require_direction(problem, z, v);
  if (archive.dominates_point(z.fx)) {
    throw ContractError("nondominance_backtrack: z is dominated by an archive member");
  }
  return backtrack(problem, z, v, params, counters, "nondominance_backtrack",
                   [&](const ObjectiveVector& f, double) {
                     return std::all_of(archive.begin(), archive.end(), [&](const FrontMember& y) {
                       for (std::size_t j = 0; j < f.size(); ++j) {
                         if (f[j] < y.fx[j]) return true;
                       }
                       return false;
                     });
                   });
}

}  // namespace frontsd
