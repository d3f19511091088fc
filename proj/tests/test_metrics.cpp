#include <random>

#include "doctest.h"
#include "frontsd/errors.hpp"
#include "frontsd/metrics.hpp"
#include "oracles.hpp"

using namespace frontsd;

namespace {

FrontSet front(std::vector<std::vector<double>> pts, std::string solver = "s") {
  std::vector<ObjectiveVector> v;
  for (auto& p : pts) v.emplace_back(Eigen::Map<Eigen::VectorXd>(p.data(), p.size()));
  return FrontSet(std::move(v), std::move(solver), "inst");
}

std::vector<std::vector<double>> random_front(std::mt19937_64& gen, int m, std::size_t size) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts;
  while (pts.size() < size) {
    std::vector<double> p(m);
    for (auto& v : p) v = u(gen);
    pts.push_back(p);
    if (!oracle::mutually_nondominated(pts)) pts.pop_back();
  }
  return pts;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("fronts are validated on ingest") {
    CHECK_THROWS_AS(front({{1, 2}, {1, 3}}), InputError);
    CHECK_THROWS_AS(front({{1, 2}, {1, 2}}), InputError);
    CHECK_THROWS_AS(front({{1, 2}, {1, 2, 3}}), InputError);
    CHECK_NOTHROW(front({}));
  }

  TEST_CASE("reference front") {
    const FrontSet a = front({{1, 3}, {3, 1}});
    CHECK(reference_front({a}).points() == a.points());
    const FrontSet b = front({{2, 2}, {0, 5}});
    CHECK(reference_front({a, b}).size() == 4);
    const FrontSet c = front({{0.5, 0.5}});
    CHECK(reference_front({a, b, c}).size() == 2);
  }

  TEST_CASE("purity") {
    const FrontSet ref = front({{0, 4}, {1, 3}, {2, 2}, {3, 1}});
    CHECK(purity(ref, ref) == 1.0);
    CHECK(purity(front({{5, 5}}), ref) == 0.0);
    CHECK(purity(front({{0, 4}, {1, 3}, {2, 2}, {3.5, 0.5}}), ref) == 0.75);
    CHECK(purity(front({}), ref) == 0.0);
  }

  TEST_CASE("gamma spread") {
    CHECK(gamma_spread(front({{0, 1}, {1, 0}})) == 1.0);
    std::vector<std::vector<double>> line;
    for (int i = 0; i <= 10; ++i) line.push_back({i / 10.0, 1.0 - i / 10.0});
    CHECK(gamma_spread(front(line)) == doctest::Approx(0.1));
    CHECK(gamma_spread(front({{0.3, 0.3}})) == 0.0);
    // Reference extremes add the outer gaps.
    const FrontSet ref = front({{0, 1}, {1, 0}});
    CHECK(gamma_spread(front({{0.5, 0.5}}), &ref) == doctest::Approx(0.5));
  }

  TEST_CASE("delta spread") {
    std::vector<std::vector<double>> uniform;
    for (int i = 0; i <= 4; ++i) uniform.push_back({i / 4.0, 1.0 - i / 4.0});
    const FrontSet u = front(uniform);
    CHECK(delta_spread(u, &u) == doctest::Approx(0.0));
    const FrontSet pair = front({{0, 1}, {1, 0}});
    CHECK(delta_spread(pair, &pair) == 0.0);
    const FrontSet skewed = front({{0, 1}, {0.1, 0.9}, {0.9, 0.1}, {1, 0}});
    std::vector<std::vector<double>> four;
    for (int i = 0; i <= 3; ++i) four.push_back({i / 3.0, 1.0 - i / 3.0});
    const FrontSet even = front(four);
    CHECK(delta_spread(skewed, &skewed) > delta_spread(even, &even));
    // Hand value: gaps 0.1, 0.8, 0.1, mean 1/3, deviations 7/30+14/30+7/30.
    CHECK(delta_spread(skewed, &skewed) == doctest::Approx((28.0 / 30.0) / 1.0));
    // Single point against a wider reference: (d0 + dN) / (d0 + dN) = 1.
    CHECK(delta_spread(front({{0.5, 0.5}}), &pair) == doctest::Approx(1.0));
    CHECK(delta_spread(front({{0.5, 0.5}})) == 0.0);
  }

  TEST_CASE("spreads ignore point order") {
    std::mt19937_64 gen(4);
    for (int t = 0; t < 50; ++t) {
      auto pts = random_front(gen, 2 + t % 2, 8);
      const FrontSet a = front(pts);
      std::shuffle(pts.begin(), pts.end(), gen);
      const FrontSet b = front(pts);
      CHECK(gamma_spread(a) == gamma_spread(b));
      CHECK(delta_spread(a) == delta_spread(b));
    }
  }

  TEST_CASE("hypervolume examples") {
    CHECK(hypervolume(front({{0, 0}}), {1, 1}).value == 1.0);
    CHECK(hypervolume(front({{0, 0.5}, {0.5, 0}}), {1, 1}).value == 0.75);
    const auto empty = hypervolume(front({}), {1, 1});
    CHECK(empty.value == 0.0);
    CHECK(empty.warning);
    const auto outside = hypervolume(front({{2, 0}, {0.5, 0.5}}), {1, 1});
    CHECK(outside.excluded == 1);
    CHECK(outside.value == 0.25);
    CHECK(hypervolume(front({{0, 0, 0}}), {1, 2, 3}).value == 6.0);
    CHECK_THROWS_AS(hypervolume(front({{0, 0}}), {1, 1, 1}), UsageError);
  }

  TEST_CASE("hypervolume agrees with Monte Carlo on up to six points") {
    std::mt19937_64 gen(12);
    for (int t = 0; t < 40; ++t) {
      const int m = 2 + t % 2;
      const auto pts = random_front(gen, m, 1 + t % 6);
      const std::vector<double> ref(m, 1.0), lo(m, 0.0);
      const double exact = hypervolume(front(pts), ObjectiveVector(Eigen::VectorXd::Ones(m))).value;
      const auto mc = oracle::hv_monte_carlo(pts, lo, ref, 200000, 100 + t);
      CHECK(std::abs(exact - mc.estimate) <= mc.half_width_99 + 1e-9);
    }
  }

  TEST_CASE("performance profiles") {
    const std::vector<std::string> names{"A", "B"};
    const auto one = performance_profiles({{3.0, 1.0}}, {"A"}, MetricDirection::lower_better);
    CHECK(one.curves[0].tau == std::vector<double>{1.0});
    CHECK(one.curves[0].rho == std::vector<double>{1.0});
    const auto two = performance_profiles({{1, 2}, {2, 1}}, names, MetricDirection::lower_better);
    for (const auto& c : two.curves) {
      CHECK(c.tau == std::vector<double>{1.0, 2.0});
      CHECK(c.rho == std::vector<double>{0.5, 1.0});
    }
    const auto inverted = performance_profiles({{4}, {2}}, names, MetricDirection::higher_better);
    CHECK(inverted.curves[0].rho.front() == 1.0);
    CHECK(inverted.curves[1].rho.front() == 0.0);
    const auto zero = performance_profiles({{0}, {2}}, names, MetricDirection::higher_better);
    CHECK(zero.excluded_instances == std::vector<std::size_t>{0});
    const auto best_zero = performance_profiles({{0}, {2}}, names, MetricDirection::lower_better);
    CHECK(best_zero.curves[0].rho == std::vector<double>{1.0});
    CHECK(best_zero.curves[1].rho == std::vector<double>{0.0});
    const auto nan = performance_profiles({{1, std::nan("")}, {2, 1}}, names,
                                          MetricDirection::lower_better);
    CHECK(nan.curves[0].rho.back() == 0.5);
    CHECK_THROWS_AS(performance_profiles({{1, 2}, {1}}, names, MetricDirection::lower_better),
                    UsageError);
  }

  TEST_CASE("profile curves are nondecreasing and the best solver has ratio one") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<std::vector<double>> values(3, std::vector<double>(10));
      for (auto& row : values) {
        for (auto& v : row) v = u(gen);
      }
      const auto prof = performance_profiles(values, {"A", "B", "C"}, MetricDirection::lower_better);
      double at_one = 0.0;
      for (const auto& c : prof.curves) {
        CHECK(std::is_sorted(c.tau.begin(), c.tau.end()));
        CHECK(std::is_sorted(c.rho.begin(), c.rho.end()));
        CHECK(c.rho.back() <= 1.0);
        CHECK(c.tau.front() == 1.0);
        at_one += c.rho.front();
      }
      // Continuous random values give exactly one winner per instance.
      CHECK(at_one == doctest::Approx(1.0));
    }
  }
}
