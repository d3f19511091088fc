// Acceptance criteria, one PASS/FAIL line each. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frontsd/algorithms.hpp"
#include "frontsd/direction.hpp"
#include "frontsd/errors.hpp"
#include "frontsd/experiment.hpp"
#include "frontsd/linesearch.hpp"
#include "frontsd/metrics.hpp"
#include "frontsd/problems.hpp"
#include "oracles.hpp"

using namespace frontsd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

oracle::Point to_point(const ObjectiveVector& v) {
  return oracle::Point(v.values().data(), v.values().data() + v.values().size());
}

Outcome direction_oracle() {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_grid = 0.0, worst_identity = 0.0;
  for (int t = 0; t < 500; ++t) {
    const int k = 1 + static_cast<int>(gen() % 3);
    const int n = 1 + static_cast<int>(gen() % 5);
    Eigen::MatrixXd g(k, n);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = u(gen);
    }
    const DirectionResult r = solve_direction(g);
    worst_grid = std::max(worst_grid, std::abs(r.theta + oracle::dual_grid_min(g, 1000)));
    worst_identity = std::max(worst_identity, std::abs(r.theta + 0.5 * r.d.squaredNorm()));
  }
  return {worst_grid <= 1e-4 && worst_identity <= 1e-8,
          "max |theta - grid| " + fmt("%.3g", worst_grid) + ", max |theta + |d|^2/2| " +
              fmt("%.3g", worst_identity)};
}

Outcome linesearch_contracts() {
  const auto p = registry_get("JOS_1", 5);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-4.0, 6.0);
  EvalCounters counters;
  const LineSearchParams params;
  int calls = 0, dominated = 0, inexact = 0;
  const auto subsets = enumerate_subsets(2);
  while (calls < 1000) {
    Archive arch;
    std::uint64_t id = 0;
    const int size = 1 + static_cast<int>(gen() % 30);
    for (int k = 0; k < size; ++k) {
      Eigen::VectorXd x(5);
      for (int i = 0; i < 5; ++i) x[i] = u(gen);
      FrontMember m;
      m.id = id++;
      m.fx = evaluate_checked(*p, x);
      m.x = x;
      if (!arch.dominates_point(m.fx)) arch.insert_filtered(m);
    }
    const FrontMember& x_c = arch[gen() % arch.size()];
    const SubsetIndex& subset = subsets[gen() % subsets.size()];
    bool gated = false;
    for (const auto& y : arch) gated = gated || dominates_on(y.fx, x_c.fx, subset);
    if (gated) continue;
    const DirectionResult dir = theta_and_v(*p, x_c.x, subset);
    if (!(dir.theta < 0.0)) continue;
    try {
      const auto r = armijo_front(*p, subset, arch, x_c, dir.d, dir.theta, params, &counters);
      for (const auto& y : arch) {
        if (oracle::dominates(to_point(y.fx), to_point(r.value))) {
          ++dominated;
          break;
        }
      }
      double expected = params.alpha0;
      for (int h = 0; h < r.halvings; ++h) expected *= params.delta;
      if (r.alpha != expected) ++inexact;
    } catch (const LineSearchFailure&) {
    }
    ++calls;
  }
  const auto failures = counters.linesearch_failures.load();
  return {dominated == 0 && inexact == 0 && failures == 0,
          std::to_string(calls) + " calls, " + std::to_string(dominated) + " dominated results, " +
              std::to_string(inexact) + " inexact steps, " + std::to_string(failures) +
              " failures"};
}

Outcome archive_invariant() {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> d(0, 30);
  std::uniform_int_distribution<int> noise(-2, 2);
  Archive arch;
  std::uint64_t id = 0;
  int ops = 0, violations = 0, rejected = 0, evictions = 0;
  for (; ops < 10000; ++ops) {
    const int m = 2 + (ops / 2500) % 2;
    if (ops % 2500 == 0) arch = Archive{};
    Eigen::VectorXd f(m);
    // Near the plane sum f = 30, so most draws are nondominated or evict members.
    int rest = 30;
    for (int j = 0; j + 1 < m; ++j) {
      f[j] = std::min(rest, d(gen) % (rest + 1));
      rest -= static_cast<int>(f[j]);
    }
    f[m - 1] = rest + noise(gen);
    FrontMember p;
    p.id = id++;
    p.x = Eigen::VectorXd::Zero(1);
    p.fx = ObjectiveVector(f);
    const std::size_t before = arch.size();
    try {
      if (arch.insert_filtered(p) == InsertOutcome::inserted && arch.size() <= before) ++evictions;
    } catch (const ContractError&) {
      ++rejected;
    }
    std::vector<oracle::Point> pts;
    for (const auto& mbr : arch) pts.push_back(to_point(mbr.fx));
    if (!oracle::mutually_nondominated(pts)) ++violations;
  }
  return {violations == 0, std::to_string(ops) + " operations (" + std::to_string(rejected) +
                               " dominated inserts refused, " + std::to_string(evictions) +
                               " inserts evicting members), " + std::to_string(violations) +
                               " invariant violations"};
}

double f1_gap(const Archive& a) {
  std::vector<double> f1;
  for (const auto& m : a) f1.push_back(m.fx[0]);
  return oracle::max_gap_fraction(f1);
}

Outcome extremes_reproduction() {
  const auto p = registry_get("JOS_1", 5);
  const Archive seeds =
      make_seed_archive(*p, {Eigen::VectorXd::Zero(5), Eigen::VectorXd::Constant(5, 2.0)});
  SolverConfig c;
  c.max_iterations = 100;
  const RunTrace ifsd = ifsd_run(*p, seeds, c);
  const RunTrace fsd = fsd_run(*p, seeds, c);
  const double gi = f1_gap(ifsd.final_archive());
  const double gf = f1_gap(fsd.final_archive());
  return {gi <= 0.05 && gf >= 5.0 * gi,
          "IFSD gap " + fmt("%.4g", gi) + " after " + std::to_string(ifsd.iterations.size()) +
              " iterations (" + ifsd.stop_reason + "), FSD gap " + fmt("%.4g", gf) + " after " +
              std::to_string(fsd.iterations.size()) + " (" + fsd.stop_reason + ")"};
}

Outcome stationarity() {
  const auto p = registry_get("JOS_1", 5);
  std::size_t total = 0, stationary = 0;
  std::string detail;
  for (auto strategy : {StartStrategy::uniform_diagonal, StartStrategy::midpoint}) {
    const std::string name = instance_name({"JOS_1", 5}, strategy);
    const RunTrace tr = ifsd_run(*p, initial_points(*p, strategy, instance_seed(0, name)),
                                 SolverConfig{});
    std::size_t here = 0;
    const Archive fin = tr.final_archive();
    for (const auto& m : fin) here += is_pareto_stationary(*p, m.x, 1e-6) ? 1 : 0;
    total += fin.size();
    stationary += here;
    detail += to_string(strategy) + " " + std::to_string(here) + "/" + std::to_string(fin.size()) +
              "; ";
  }
  return {stationary == total, detail};
}

Outcome fsd_structure() {
  int traces = 0, bad = 0, iterations = 0;
  for (const auto& name : registered_problems(true)) {
    for (int n : {5, 10, 20}) {
      const auto p = registry_get(name, n, true);
      if (p->m() != 2) continue;
      for (auto strategy : {StartStrategy::uniform_diagonal, StartStrategy::midpoint}) {
        const RunTrace tr =
            fsd_run(*p, initial_points(*p, strategy, instance_seed(0, name)), SolverConfig{});
        ++traces;
        for (const auto& it : tr.iterations) {
          ++iterations;
          int first = 0, second = 0;
          for (const auto& l : it.launches) {
            first += l.subset == "{1}";
            second += l.subset == "{2}";
          }
          if (first > 1 || second > 1) ++bad;
        }
      }
    }
  }
  return {bad == 0, std::to_string(traces) + " traces, " + std::to_string(iterations) +
                        " iterations, " + std::to_string(bad) + " with repeated singleton starts"};
}

Outcome hypervolume_oracle() {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_front = [&](int m, std::size_t size) {
    std::vector<oracle::Point> pts;
    while (pts.size() < size) {
      oracle::Point p(m);
      for (auto& v : p) v = u(gen);
      pts.push_back(p);
      if (!oracle::mutually_nondominated(pts)) pts.pop_back();
    }
    return pts;
  };
  auto as_front = [](const std::vector<oracle::Point>& pts) {
    std::vector<ObjectiveVector> v;
    for (const auto& p : pts) v.emplace_back(Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()));
    return FrontSet(std::move(v), "s", "i");
  };
  double worst = 0.0;
  int decreases = 0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 2 + t % 2;
    const oracle::Point ref(m, 1.0);
    const auto pts = random_front(m, 4);
    const double exact = oracle::hv_inclusion_exclusion(pts, ref);
    const double hv = hypervolume(as_front(pts), ObjectiveVector(Eigen::VectorXd::Ones(m))).value;
    worst = std::max(worst, std::abs(hv - exact));
  }
  for (int t = 0; t < 1000; ++t) {
    const int m = 2 + t % 2;
    auto pts = random_front(m, 1 + t % 8);
    const ObjectiveVector ref(Eigen::VectorXd::Ones(m));
    const double before = hypervolume(as_front(pts), ref).value;
    auto extended = random_front(m, 0);
    // Draw until the new point is nondominated with respect to the front.
    for (;;) {
      oracle::Point p(m);
      for (auto& v : p) v = u(gen);
      std::vector<oracle::Point> trial = pts;
      trial.push_back(p);
      if (oracle::mutually_nondominated(trial)) {
        extended = trial;
        break;
      }
    }
    if (hypervolume(as_front(extended), ref).value < before) ++decreases;
  }
  return {worst <= 1e-12 && decreases == 0, "max |hv - inclusion-exclusion| " +
                                                fmt("%.3g", worst) + ", " +
                                                std::to_string(decreases) + " decreases"};
}

Outcome profile_sanity() {
  // Ratios: A is 1, 1, 1, 3 and B is 1, 2, 4, 1.
  const std::vector<std::vector<double>> values{{1.0, 1.0, 1.0, 3.0}, {1.0, 2.0, 4.0, 1.0}};
  const std::vector<std::string> names{"A", "B"};
  const auto prof = performance_profiles(values, names, MetricDirection::lower_better);
  const std::vector<double> tau{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> rho_a{0.75, 0.75, 1.0, 1.0};
  const std::vector<double> rho_b{0.5, 0.75, 0.75, 1.0};
  const bool steps = prof.curves[0].tau == tau && prof.curves[1].tau == tau &&
                     prof.curves[0].rho == rho_a && prof.curves[1].rho == rho_b;
  // Higher-better: A wins on its value 4 only after inversion.
  const auto low = performance_profiles({{4.0}, {2.0}}, names, MetricDirection::lower_better);
  const auto high = performance_profiles({{4.0}, {2.0}}, names, MetricDirection::higher_better);
  const bool flips = low.curves[1].rho.front() == 1.0 && low.curves[0].rho.front() == 0.0 &&
                     high.curves[0].rho.front() == 1.0 && high.curves[1].rho.front() == 0.0;
  return {steps && flips, std::string("step values ") + (steps ? "exact" : "wrong") +
                              ", inversion " + (flips ? "flips the winner" : "does not flip")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "frontsd_acceptance_replay";
  fs::remove_all(base);
  ExperimentConfig c;
  c.problems = {{"JOS_1", 5}, {"JOS_1", 10}};
  c.seed = 12345;
  c.jobs = 2;
  for (const char* run : {"a", "b"}) {
    c.output_dir = (base / run).string();
    run_experiment(c);
  }
  int files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    ++files;
    const fs::path rel = fs::relative(entry.path(), base / "a");
    if (slurp(entry.path()) != slurp(base / "b" / rel)) ++differing;
  }
  fs::remove_all(base);
  return {files == 10 && differing == 0,
          std::to_string(files) + " CSV files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double limit_seconds;
  };
  const std::vector<Criterion> criteria{
      {"direction solver vs simplex grid oracle", direction_oracle, 30.0},
      {"line-search contracts on JOS_1", linesearch_contracts, 0.0},
      {"archive invariant under fuzzed insertion", archive_invariant, 0.0},
      {"JOS_1 two-extreme start: IFSD fills the gap, FSD does not", extremes_reproduction, 120.0},
      {"IFSD stationarity at termination on JOS_1 n=5", stationarity, 0.0},
      {"FSD singleton-subset gate on m=2 traces", fsd_structure, 0.0},
      {"hypervolume vs inclusion-exclusion and monotonicity", hypervolume_oracle, 0.0},
      {"performance profile step values and inversion", profile_sanity, 0.0},
      {"experiment replay is byte-identical", determinism, 180.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0.0 && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.limit_seconds) + " s limit";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
