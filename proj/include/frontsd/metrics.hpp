#pragma once

/**
 * @file metrics.hpp
 * @brief Front-quality metrics and Dolan-More performance profiles.
 *
 * Purity and hypervolume grow for better fronts; the two spread metrics
 * shrink. Profiles for the former are built on inverted values.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frontsd/dominance.hpp"

namespace frontsd {

/// A solver's final front for one instance; points are mutually nondominated and distinct.
class FrontSet {
 public:
  FrontSet() = default;
  /// Throws InputError on dominated or repeated points or mixed lengths.
  FrontSet(std::vector<ObjectiveVector> points, std::string solver, std::string instance);
  static FrontSet from_archive(const Archive& archive, std::string solver, std::string instance);

  const std::vector<ObjectiveVector>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  /// Objective count; 0 for an empty front.
  std::size_t m() const noexcept { return points_.empty() ? 0 : points_.front().size(); }
  const std::string& solver() const noexcept { return solver_; }
  const std::string& instance() const noexcept { return instance_; }

 private:
  std::vector<ObjectiveVector> points_;
  std::string solver_;
  std::string instance_;
};

/// Nondominated filter of the union; points keep their first appearance order.
FrontSet reference_front(const std::vector<FrontSet>& fronts);

/// |front ∩ reference| / |front| under exact equality; 0 for an empty front.
double purity(const FrontSet& front, const FrontSet& reference);

/**
 * Largest gap between consecutive values of any objective, each objective
 * sorted on its own. With a reference the objective's extreme values over
 * the reference are added before sorting. Fewer than two values give 0.
 */
double gamma_spread(const FrontSet& front, const FrontSet* reference = nullptr);

/**
 * Per objective: (d_0 + d_N + sum |d_i - mean d|) / (d_0 + d_N + (N-1) mean d)
 * over the interior gaps d_i, where d_0 and d_N are the distances from the
 * front's extremes to the reference extremes (0 without a reference). The
 * result is the maximum over objectives; 0/0 counts as 0.
 */
double delta_spread(const FrontSet& front, const FrontSet* reference = nullptr);

struct HypervolumeResult {
  double value = 0.0;
  /// Points not strictly better than the reference point in every objective.
  std::size_t excluded = 0;
  /// Set when no point counts at all.
  bool warning = false;
};

/// Exact hypervolume for m <= 3: sorted sweep in 2D, slicing along f_3 in 3D.
HypervolumeResult hypervolume(const FrontSet& front, const ObjectiveVector& ref_point);

enum class MetricDirection { lower_better, higher_better };

struct ProfileCurve {
  std::string solver;
  std::vector<double> tau;
  std::vector<double> rho;
};

struct ProfileResult {
  std::vector<ProfileCurve> curves;
  /// Instance columns dropped because inversion was undefined.
  std::vector<std::size_t> excluded_instances;
};

/**
 * values[s][p] is solver s's metric on instance p; NaN marks a failure.
 * The tau grid is 1 plus the sorted set of finite ratios over all solvers, so every
 * curve is evaluated at the same points. A best value of 0 under
 * lower_better gives ratio 1 to the solvers that reach it and +inf to the
 * rest.
 */
ProfileResult performance_profiles(const std::vector<std::vector<double>>& values,
                                   const std::vector<std::string>& solvers,
                                   MetricDirection direction);

}  // namespace frontsd
