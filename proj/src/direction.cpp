#include "frontsd/direction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "frontsd/errors.hpp"

namespace frontsd {

Eigen::VectorXd project_onto_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index k = v.size();
  if (k == 0) throw UsageError("project_onto_simplex: empty vector");
  std::vector<double> sorted(v.data(), v.data() + k);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    cumulative += sorted[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[static_cast<std::size_t>(j)] - candidate > 0.0) tau = candidate;
  }
  return (v.array() - tau).max(0.0).matrix();
}

namespace {

DirectionResult finish(const Eigen::MatrixXd& gradients, Eigen::VectorXd lambda, int iterations,
                       double residual) {
  DirectionResult out;
  out.d = -(gradients.transpose() * lambda);
  out.theta = -0.5 * out.d.squaredNorm();
  out.lambda = std::move(lambda);
  out.iterations = iterations;
  out.kkt_residual = residual;
  return out;
}

DirectionResult solve_pair(const Eigen::MatrixXd& g) {
  // Minimum-norm point of the segment [g_2, g_1]: lambda_1 g_1 + (1 - lambda_1) g_2.
  const Eigen::VectorXd diff = (g.row(0) - g.row(1)).transpose();
  const double denom = diff.squaredNorm();
  double w = 0.5;
  if (denom > 0.0) {
    w = std::clamp(-diff.dot(g.row(1).transpose()) / denom, 0.0, 1.0);
  }
  Eigen::VectorXd lambda(2);
  lambda << w, 1.0 - w;
  return finish(g, std::move(lambda), 0, 0.0);
}

DirectionResult solve_simplex_qp(const Eigen::MatrixXd& g, const DualSolverOptions& options,
                                 Eigen::VectorXd lambda);

double kkt_residual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& lambda) {
  const double scale = gram.trace();
  if (!(scale > 0.0)) return 0.0;
  const Eigen::VectorXd grad = gram * lambda;
  return (lambda - project_onto_simplex(lambda - grad / scale)).lpNorm<Eigen::Infinity>();
}

// Exact minimum over the triangle: the optimum is the best of the minimum-norm
// points of its seven faces, each of which is feasible by construction.
DirectionResult solve_triple(const Eigen::MatrixXd& g, const DualSolverOptions& options) {
  const Eigen::MatrixXd gram = g * g.transpose();
  Eigen::VectorXd best = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  if (!(gram.trace() > 0.0)) return finish(g, std::move(best), 0, 0.0);
  double best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& l) {
    const double value = l.dot(gram * l);
    if (value < best_value) {
      best_value = value;
      best = l;
    }
  };
  for (int a = 0; a < 3; ++a) {
    Eigen::VectorXd l = Eigen::VectorXd::Zero(3);
    l[a] = 1.0;
    consider(l);
    for (int b = a + 1; b < 3; ++b) {
      Eigen::MatrixXd pair(2, g.cols());
      pair.row(0) = g.row(a);
      pair.row(1) = g.row(b);
      const Eigen::VectorXd w = solve_pair(pair).lambda;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
      e[a] = w[0];
      e[b] = w[1];
      consider(e);
    }
  }
  // Interior: Q lambda = mu 1, 1'lambda = 1.
  Eigen::Matrix4d kkt = Eigen::Matrix4d::Zero();
  kkt.topLeftCorner<3, 3>() = gram;
  kkt.block<3, 1>(0, 3).setConstant(-1.0);
  kkt.block<1, 3>(3, 0).setConstant(1.0);
  Eigen::Vector4d rhs(0.0, 0.0, 0.0, 1.0);
  const auto lu = kkt.fullPivLu();
  if (lu.isInvertible()) {
    const Eigen::Vector4d sol = lu.solve(rhs);
    if ((sol.head<3>().array() >= 0.0).all()) {
      Eigen::VectorXd l = sol.head<3>();
      l /= l.sum();
      consider(l);
    }
  }
  const double residual = kkt_residual(gram, best);
  if (residual > options.kkt_tolerance) {
    return solve_simplex_qp(g, options, best);
  }
  return finish(g, std::move(best), 0, residual);
}

// Replaces an iterate by the exact equality-constrained optimum on its support
// when that point is feasible and its KKT residual is no larger.
void polish_on_support(const Eigen::MatrixXd& gram, Eigen::VectorXd& lambda, double& residual) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 0.0) support.push_back(i);
  }
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s < 2) return;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = gram(support[a], support[b]);
    kkt(a, s) = -1.0;
    kkt(s, a) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
  rhs[s] = 1.0;
  const auto lu = kkt.fullPivLu();
  if (!lu.isInvertible()) return;
  const Eigen::VectorXd sol = lu.solve(rhs);
  Eigen::VectorXd candidate = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index a = 0; a < s; ++a) {
    if (!(sol[a] >= 0.0)) return;
    candidate[support[a]] = sol[a];
  }
  candidate /= candidate.sum();
  const double r = kkt_residual(gram, candidate);
  if (r <= residual) {
    lambda = std::move(candidate);
    residual = r;
  }
}

DirectionResult solve_simplex_qp(const Eigen::MatrixXd& g, const DualSolverOptions& options,
                                 Eigen::VectorXd lambda) {
  const Eigen::MatrixXd gram = g * g.transpose();
  const double scale = gram.trace();
  if (!(scale > 0.0)) return finish(g, std::move(lambda), 0, 0.0);

  auto residual_at = [&](const Eigen::VectorXd& l, const Eigen::VectorXd& grad) {
    return (l - project_onto_simplex(l - grad / scale)).lpNorm<Eigen::Infinity>();
  };

  Eigen::VectorXd grad = gram * lambda;
  double step = 1.0 / scale;
  double residual = residual_at(lambda, grad);
  int it = 0;
  for (; it < options.max_iterations && residual > options.kkt_tolerance; ++it) {
    const Eigen::VectorXd p = project_onto_simplex(lambda - step * grad) - lambda;
    const double curvature = p.dot(gram * p);
    const double slope = grad.dot(p);
    double t = 1.0;
    if (curvature > 0.0) t = std::clamp(-slope / curvature, 0.0, 1.0);
    const Eigen::VectorXd delta = t * p;
    // A fixed point of the projected step is optimal for every step size.
    if (delta.lpNorm<Eigen::Infinity>() == 0.0) break;
    const Eigen::VectorXd grad_delta = gram * delta;
    lambda += delta;
    grad += grad_delta;
    const double sy = delta.dot(grad_delta);
    step = sy > 0.0 ? delta.squaredNorm() / sy : 1.0 / scale;
    step = std::clamp(step, 1e-12 / scale, 1e12 / scale);
    residual = residual_at(lambda, grad);
  }
  if (residual > options.kkt_tolerance) {
    throw SolverError("simplex QP did not converge: KKT residual " + std::to_string(residual),
                      residual);
  }
  polish_on_support(gram, lambda, residual);
  return finish(g, std::move(lambda), it, residual);
}

}  // namespace

DirectionResult solve_direction(const Eigen::MatrixXd& gradients, const DualSolverOptions& options) {
  if (gradients.rows() < 1 || gradients.cols() < 1) {
    throw UsageError("solve_direction: need at least one gradient of positive dimension");
  }
  if (!gradients.allFinite()) throw InputError("solve_direction: non-finite gradient");
  if (gradients.rows() == 1) {
    return finish(gradients, Eigen::VectorXd::Ones(1), 0, 0.0);
  }
  if (gradients.rows() == 2) return solve_pair(gradients);
  if (gradients.rows() == 3) return solve_triple(gradients, options);
  const Eigen::Index k = gradients.rows();
  return solve_simplex_qp(gradients, options,
                          Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
}

namespace {

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& jac, const SubsetIndex& subset) {
  if (jac.rows() != subset.m()) throw UsageError("subset does not match the problem's m");
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(subset.size()), jac.cols());
  Eigen::Index r = 0;
  for (int j : subset.indices()) rows.row(r++) = jac.row(j);
  return rows;
}

}  // namespace

DirectionResult theta_and_v(const Problem& problem, const DecisionPoint& x,
                            const SubsetIndex& subset, EvalCounters* counters) {
  const Eigen::MatrixXd jac = problem.jacobian(x);
  bump(&EvalCounters::jacobian_evaluations, counters);
  bump(&EvalCounters::dual_solves, counters);
  return solve_direction(select_rows(jac, subset));
}

bool is_pareto_stationary(const Problem& problem, const DecisionPoint& x, double eps_theta,
                          EvalCounters* counters) {
  if (!(eps_theta > 0.0)) throw UsageError("is_pareto_stationary: eps_theta must be positive");
  return theta_and_v(problem, x, SubsetIndex::full(problem.m()), counters).theta >= -eps_theta;
}

std::uint32_t subset_mask(const SubsetIndex& subset) {
  std::uint32_t mask = 0;
  for (int j : subset.indices()) mask |= 1u << j;
  return mask;
}

DirectionCache::DirectionCache(const Problem& problem, EvalCounters* counters,
                               DualSolverOptions options)
    : problem_(problem), counters_(counters), options_(options) {}

DirectionCache::Entry& DirectionCache::entry(std::uint64_t id, const DecisionPoint& x) {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    Entry fresh;
    fresh.jacobian = problem_.jacobian(x);
    bump(&EvalCounters::jacobian_evaluations, counters_);
    it = entries_.emplace(id, std::move(fresh)).first;
  }
  return it->second;
}

const Eigen::MatrixXd& DirectionCache::jacobian(std::uint64_t id, const DecisionPoint& x) {
  return entry(id, x).jacobian;
}

const DirectionResult& DirectionCache::direction(std::uint64_t id, const DecisionPoint& x,
                                                 const SubsetIndex& subset) {
  Entry& e = entry(id, x);
  const std::uint32_t key = subset_mask(subset);
  auto it = e.results.find(key);
  if (it == e.results.end()) {
    bump(&EvalCounters::dual_solves, counters_);
    it = e.results.emplace(key, solve_direction(select_rows(e.jacobian, subset), options_)).first;
  }
  return it->second;
}

void DirectionCache::retain_only(const Archive& archive) {
  std::erase_if(entries_, [&](const auto& kv) { return !archive.contains(kv.first); });
}

}  // namespace frontsd
