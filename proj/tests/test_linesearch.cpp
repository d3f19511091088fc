#include <cmath>
#include <random>

#include "doctest.h"
#include "frontsd/direction.hpp"
#include "frontsd/errors.hpp"
#include "frontsd/linesearch.hpp"
#include "frontsd/problems.hpp"

using namespace frontsd;

namespace {

FrontMember at(const Problem& p, std::uint64_t id, Eigen::VectorXd x) {
  FrontMember m;
  m.id = id;
  m.fx = evaluate_checked(p, x);
  m.x = std::move(x);
  return m;
}

class LinearProblem final : public Problem {
 public:
  explicit LinearProblem(Eigen::MatrixXd a)
      : Problem("LINEAR", static_cast<int>(a.cols()), static_cast<int>(a.rows()),
                Eigen::VectorXd::Constant(a.cols(), -1.0), Eigen::VectorXd::Constant(a.cols(), 1.0)),
        a_(std::move(a)) {}
  Eigen::VectorXd evaluate(const DecisionPoint& x) const override { return a_ * x; }
  Eigen::MatrixXd jacobian(const DecisionPoint&) const override { return a_; }

 private:
  Eigen::MatrixXd a_;
};

}  // namespace

TEST_SUITE("linesearch") {
  TEST_CASE("parameter validation") {
    LineSearchParams p;
    CHECK_NOTHROW(p.validate());
    p.delta = 1.0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = {};
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = {};
    p.max_halvings = 0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    CHECK(trial_step(LineSearchParams{}, 3) == 0.125);
  }

  TEST_CASE("armijo_single on JOS_1 from (5,...,5) matches hand backtracking") {
    const auto p = registry_get("JOS_1", 5);
    const FrontMember x = at(*p, 0, Eigen::VectorXd::Constant(5, 5.0));
    const auto dir = theta_and_v(*p, x.x, SubsetIndex::full(2));
    const LineSearchParams params;
    const auto r = armijo_single(*p, x, dir.d, dir.theta, params);
    // Independent scan: first h with both objectives satisfying the condition.
    int expected = -1;
    double alpha = 1.0;
    for (int h = 0; h <= 60; ++h, alpha *= 0.5) {
      const Eigen::VectorXd y = x.x + alpha * dir.d;
      const double f1 = y.squaredNorm() / 5.0;
      const double f2 = (y.array() - 2.0).square().sum() / 5.0;
      if (f1 <= x.fx[0] + 1e-4 * alpha * dir.theta && f2 <= x.fx[1] + 1e-4 * alpha * dir.theta) {
        expected = h;
        break;
      }
    }
    CHECK(r.halvings == expected);
    CHECK(r.alpha == std::ldexp(1.0, -expected));
  }

  TEST_CASE("armijo_single accepts alpha0 on a linear problem") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 0, 0, 1;
    const LinearProblem p(a);
    const FrontMember x = at(p, 0, Eigen::Vector2d(0.3, 0.3));
    const auto dir = theta_and_v(p, x.x, SubsetIndex::full(2));
    const auto r = armijo_single(p, x, dir.d, dir.theta, LineSearchParams{});
    CHECK(r.halvings == 0);
    CHECK(r.alpha == 1.0);
    CHECK_THROWS_AS(armijo_single(p, x, Eigen::Vector2d::Zero(), 0.0, LineSearchParams{}),
                    ContractError);
  }

  TEST_CASE("armijo_front with a single member reduces to the Armijo condition") {
    const auto p = registry_get("JOS_1", 5);
    const FrontMember x = at(*p, 0, Eigen::VectorXd::Constant(5, 5.0));
    const Archive a = Archive::from_members({x});
    const auto dir = theta_and_v(*p, x.x, SubsetIndex::full(2));
    const auto r = armijo_front(*p, SubsetIndex::full(2), a, x, dir.d, dir.theta, LineSearchParams{});
    for (int j = 0; j < 2; ++j) {
      CHECK(r.value[j] <= x.fx[j] + 1e-4 * r.alpha * dir.theta);
    }
    CHECK_FALSE(dominates(x.fx, r.value));
    CHECK_THROWS_AS(armijo_front(*p, SubsetIndex::full(2), a, x, dir.d, 0.0, LineSearchParams{}),
                    ContractError);
  }

  TEST_CASE("armijo_front zero halvings when alpha0 already works") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 0, 0, 1;
    const LinearProblem p(a);
    const FrontMember x = at(p, 0, Eigen::Vector2d(0.3, 0.3));
    const Archive arch = Archive::from_members({x});
    const auto dir = theta_and_v(p, x.x, SubsetIndex::full(2));
    const auto r = armijo_front(p, SubsetIndex::full(2), arch, x, dir.d, dir.theta, LineSearchParams{});
    CHECK(r.halvings == 0);
  }

  TEST_CASE("armijo_front requires x_c nondominated on the subset") {
    const auto p = registry_get("JOS_1", 5);
    const FrontMember a = at(*p, 0, Eigen::VectorXd::Zero(5));
    const FrontMember b = at(*p, 1, Eigen::VectorXd::Constant(5, 2.0));
    const Archive arch = Archive::from_members({a, b});
    const SubsetIndex first = SubsetIndex::one_based({1}, 2);
    const auto dir = theta_and_v(*p, b.x, first);
    CHECK_THROWS_AS(armijo_front(*p, first, arch, b, dir.d, dir.theta, LineSearchParams{}),
                    ContractError);
  }

  TEST_CASE("nondominance_backtrack examples") {
    const auto p = registry_get("JOS_1", 5);
    const FrontMember z = at(*p, 0, Eigen::VectorXd::Ones(5));
    const Archive only = Archive::from_members({z});
    const SubsetIndex first = SubsetIndex::one_based({1}, 2);
    const auto dir = theta_and_v(*p, z.x, first);
    const auto r = nondominance_backtrack(*p, only, z, dir.d, dir.theta, LineSearchParams{});
    CHECK(r.alpha == 1.0);

    // A member dominating z violates the precondition.
    const FrontMember better = at(*p, 1, Eigen::VectorXd::Ones(5));
    FrontMember worse = at(*p, 2, Eigen::VectorXd::Constant(5, 3.0));
    const Archive arch = Archive::from_members({better});
    const auto dw = theta_and_v(*p, worse.x, SubsetIndex::full(2));
    CHECK_THROWS_AS(nondominance_backtrack(*p, arch, worse, dw.d, dw.theta, LineSearchParams{}),
                    ContractError);
  }

  TEST_CASE("a trial that lands on an existing vector is rejected") {
    // f = (x, -x) in 1D: moving by alpha0 along d = -1 from 1 lands on 0.
    Eigen::MatrixXd a(2, 1);
    a << 1, -1;
    const LinearProblem p(a);
    const FrontMember z = at(p, 0, Eigen::VectorXd::Constant(1, 1.0));
    const FrontMember y = at(p, 1, Eigen::VectorXd::Constant(1, 0.0));
    const Archive arch = Archive::from_members({z, y});
    const auto r = nondominance_backtrack(p, arch, z, Eigen::VectorXd::Constant(1, -1.0), -0.5,
                                          LineSearchParams{});
    CHECK(r.halvings == 1);
    CHECK(r.value[0] == 0.5);
  }

  TEST_CASE("failure after max_halvings is counted") {
    // A direction of ascent never satisfies the Armijo condition.
    Eigen::MatrixXd a(2, 2);
    a << 1, 0, 0, 1;
    const LinearProblem p(a);
    const FrontMember x = at(p, 0, Eigen::Vector2d(0.3, 0.3));
    EvalCounters counters;
    LineSearchParams params;
    params.max_halvings = 5;
    CHECK_THROWS_AS(armijo_single(p, x, Eigen::Vector2d(1, 1), -1.0, params, &counters),
                    LineSearchFailure);
    CHECK(counters.linesearch_failures == 1);
    CHECK(counters.evaluations == 6);
  }

  TEST_CASE("larger gamma never increases the accepted step") {
    const auto p = registry_get("JOS_1", 5);
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd x(5);
      for (int i = 0; i < 5; ++i) x[i] = u(gen);
      const FrontMember m = at(*p, 0, x);
      const auto dir = theta_and_v(*p, x, SubsetIndex::full(2));
      if (!(dir.theta < 0.0)) continue;
      double previous = std::numeric_limits<double>::infinity();
      for (double gamma : {1e-4, 1e-2, 0.3, 0.9}) {
        LineSearchParams params;
        params.gamma = gamma;
        const double alpha = armijo_single(*p, m, dir.d, dir.theta, params).alpha;
        CHECK(alpha <= previous);
        previous = alpha;
      }
    }
  }
}
