#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "frontsd/dominance.hpp"

namespace frontsd {

/**
 * Smooth unconstrained benchmark problem F: R^n -> R^m with analytic Jacobian.
 *
 * lower()/upper() describe the box whose hyper-diagonal seeds the runs; it is
 * not a constraint. Some problems are only defined on part of R^n (the CEC
 * problems take sqrt(x_1)); outside it evaluate() returns NaN entries and the
 * line searches treat such trial points as rejected.
 */
class Problem {
 public:
  virtual ~Problem() = default;

  const std::string& name() const noexcept { return name_; }
  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  const Eigen::VectorXd& lower() const noexcept { return lower_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }
  /// Formula not verified against its source; excluded from default grids.
  bool experimental() const noexcept { return experimental_; }

  virtual Eigen::VectorXd evaluate(const DecisionPoint& x) const = 0;
  /// m x n matrix whose row j is the gradient of f_j.
  virtual Eigen::MatrixXd jacobian(const DecisionPoint& x) const = 0;

 protected:
  Problem(std::string name, int n, int m, Eigen::VectorXd lower, Eigen::VectorXd upper,
          bool experimental = false);

  void require_dimension(const DecisionPoint& x) const;

 private:
  std::string name_;
  int n_;
  int m_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  bool experimental_;
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// Throws LookupError for unknown names, unsupported n, or experimental
/// problems requested without allow_experimental.
ProblemPtr registry_get(std::string_view name, int n, bool allow_experimental = false);

std::vector<std::string> registered_problems(bool include_experimental = false);

/// Dimensions used by the benchmark grid.
const std::vector<int>& benchmark_dimensions();

enum class StartStrategy { uniform_diagonal, midpoint };

std::string to_string(StartStrategy strategy);
StartStrategy parse_strategy(std::string_view text);

/**
 * Seed archive on the box hyper-diagonal lower + t (upper - lower).
 *
 * uniform_diagonal draws `count` values of t uniformly from [0,1) with the
 * given seed; midpoint uses t = 0.5 and requires count == 1. Points with
 * non-finite objectives are dropped, then the sample is reduced to its
 * mutually nondominated subset. Ids are 0..k-1 in sample order.
 */
Archive initial_points(const Problem& problem, StartStrategy strategy, int count,
                       std::uint64_t seed);
/// uniform_diagonal with count = n, midpoint with count = 1.
Archive initial_points(const Problem& problem, StartStrategy strategy, std::uint64_t seed);

/// Evaluates and wraps; throws InputError when F(x) is not finite.
ObjectiveVector evaluate_checked(const Problem& problem, const DecisionPoint& x);

}  // namespace frontsd
