#include "frontsd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "frontsd/errors.hpp"

namespace frontsd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd filled(int n, double v) { return Eigen::VectorXd::Constant(n, v); }

// JOS_1: f1 = mean(x_i^2), f2 = mean((x_i - 2)^2).
class Jos1 final : public Problem {
 public:
  explicit Jos1(int n) : Problem("JOS_1", n, 2, filled(n, -100.0), filled(n, 100.0)) {}

  Eigen::VectorXd evaluate(const DecisionPoint& x) const override {
    require_dimension(x);
    const double inv_n = 1.0 / n();
    Eigen::VectorXd f(2);
    f[0] = x.squaredNorm() * inv_n;
    f[1] = (x.array() - 2.0).square().sum() * inv_n;
    return f;
  }

  Eigen::MatrixXd jacobian(const DecisionPoint& x) const override {
    require_dimension(x);
    const double scale = 2.0 / n();
    Eigen::MatrixXd jac(2, n());
    jac.row(0) = scale * x.transpose();
    jac.row(1) = scale * (x.array() - 2.0).matrix().transpose();
    return jac;
  }
};

// CEC 2009 UF2. Variables are 1-based in the formulas: x_1 = x[0].
class Cec09Uf2 final : public Problem {
 public:
  explicit Cec09Uf2(int n) : Problem("CEC09_2", n, 2, lower_box(n), upper_box(n)) {}

  Eigen::VectorXd evaluate(const DecisionPoint& x) const override {
    require_dimension(x);
    const double x1 = x[0];
    if (!(x1 >= 0.0)) return Eigen::VectorXd::Constant(2, kNaN);
    double sum_odd = 0.0, sum_even = 0.0;
    int count_odd = 0, count_even = 0;
    for (int j = 2; j <= n(); ++j) {
      const double y = residual(x, j);
      if (j % 2 == 1) {
        sum_odd += y * y;
        ++count_odd;
      } else {
        sum_even += y * y;
        ++count_even;
      }
    }
    Eigen::VectorXd f(2);
    f[0] = x1 + 2.0 * sum_odd / count_odd;
    f[1] = 1.0 - std::sqrt(x1) + 2.0 * sum_even / count_even;
    return f;
  }

  Eigen::MatrixXd jacobian(const DecisionPoint& x) const override {
    require_dimension(x);
    const double x1 = x[0];
    if (!(x1 > 0.0)) return Eigen::MatrixXd::Constant(2, n(), kNaN);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, n());
    const int count_odd = (n() - 1) / 2;  // j = 3,5,... <= n
    const int count_even = n() / 2;       // j = 2,4,... <= n
    jac(0, 0) = 1.0;
    jac(1, 0) = -0.5 / std::sqrt(x1);
    for (int j = 2; j <= n(); ++j) {
      const double y = residual(x, j);
      const double dy_dx1 = residual_dx1(x1, j);
      const int row = (j % 2 == 1) ? 0 : 1;
      const double weight = 4.0 / ((j % 2 == 1) ? count_odd : count_even);
      jac(row, j - 1) = weight * y;
      jac(row, 0) += weight * y * dy_dx1;
    }
    return jac;
  }

 private:
  static Eigen::VectorXd lower_box(int n) {
    Eigen::VectorXd lo = filled(n, -1.0);
    lo[0] = 0.0;
    return lo;
  }
  static Eigen::VectorXd upper_box(int n) { return filled(n, 1.0); }

  double amplitude(double x1, int j) const {
    return 0.3 * x1 * x1 * std::cos(24.0 * kPi * x1 + 4.0 * j * kPi / n()) + 0.6 * x1;
  }
  double amplitude_dx1(double x1, int j) const {
    const double phase = 24.0 * kPi * x1 + 4.0 * j * kPi / n();
    return 0.6 * x1 * std::cos(phase) - 0.3 * x1 * x1 * 24.0 * kPi * std::sin(phase) + 0.6;
  }
  double residual(const DecisionPoint& x, int j) const {
    const double x1 = x[0];
    const double angle = 6.0 * kPi * x1 + j * kPi / n();
    const double wave = (j % 2 == 1) ? std::cos(angle) : std::sin(angle);
    return x[j - 1] - amplitude(x1, j) * wave;
  }
  double residual_dx1(double x1, int j) const {
    const double angle = 6.0 * kPi * x1 + j * kPi / n();
    const double wave = (j % 2 == 1) ? std::cos(angle) : std::sin(angle);
    const double wave_d = (j % 2 == 1) ? -6.0 * kPi * std::sin(angle) : 6.0 * kPi * std::cos(angle);
    return -(amplitude_dx1(x1, j) * wave + amplitude(x1, j) * wave_d);
  }
};

// CEC 2009 UF3.
class Cec09Uf3 final : public Problem {
 public:
  explicit Cec09Uf3(int n) : Problem("CEC09_3", n, 2, filled(n, 0.0), filled(n, 1.0)) {}

  Eigen::VectorXd evaluate(const DecisionPoint& x) const override {
    require_dimension(x);
    const double x1 = x[0];
    if (!(x1 >= 0.0)) return Eigen::VectorXd::Constant(2, kNaN);
    double sq[2] = {0.0, 0.0};
    double prod[2] = {1.0, 1.0};
    int count[2] = {0, 0};
    for (int j = 2; j <= n(); ++j) {
      const int g = group(j);
      const double y = x[j - 1] - std::pow(x1, exponent(j));
      sq[g] += y * y;
      prod[g] *= std::cos(frequency(j) * y);
      ++count[g];
    }
    Eigen::VectorXd f(2);
    f[0] = x1 + 2.0 / count[0] * (4.0 * sq[0] - 2.0 * prod[0] + 2.0);
    f[1] = 1.0 - std::sqrt(x1) + 2.0 / count[1] * (4.0 * sq[1] - 2.0 * prod[1] + 2.0);
    return f;
  }

  Eigen::MatrixXd jacobian(const DecisionPoint& x) const override {
    require_dimension(x);
    const double x1 = x[0];
    if (!(x1 > 0.0)) return Eigen::MatrixXd::Constant(2, n(), kNaN);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, n());
    jac(0, 0) = 1.0;
    jac(1, 0) = -0.5 / std::sqrt(x1);
    const int count[2] = {(n() - 1) / 2, n() / 2};
    std::vector<double> y(static_cast<std::size_t>(n() + 1), 0.0);
    for (int j = 2; j <= n(); ++j) y[static_cast<std::size_t>(j)] = x[j - 1] - std::pow(x1, exponent(j));
    for (int j = 2; j <= n(); ++j) {
      const int g = group(j);
      const double yj = y[static_cast<std::size_t>(j)];
      // Product of the cosines of the other members of the group.
      double others = 1.0;
      for (int k = 2; k <= n(); ++k) {
        if (k != j && group(k) == g) others *= std::cos(frequency(k) * y[static_cast<std::size_t>(k)]);
      }
      const double dprod_dy = -frequency(j) * std::sin(frequency(j) * yj) * others;
      const double df_dy = 2.0 / count[g] * (8.0 * yj - 2.0 * dprod_dy);
      const double e = exponent(j);
      const double dy_dx1 = -e * std::pow(x1, e - 1.0);
      jac(g, j - 1) = df_dy;
      jac(g, 0) += df_dy * dy_dx1;
    }
    return jac;
  }

 private:
  static int group(int j) { return (j % 2 == 1) ? 0 : 1; }
  double exponent(int j) const { return 0.5 * (1.0 + 3.0 * (j - 2) / (n() - 2)); }
  static double frequency(int j) { return 20.0 * kPi / std::sqrt(static_cast<double>(j)); }
};

// CEC 2009 UF10 (three objectives).
class Cec09Uf10 final : public Problem {
 public:
  explicit Cec09Uf10(int n) : Problem("CEC09_10", n, 3, lower_box(n), upper_box(n)) {}

  Eigen::VectorXd evaluate(const DecisionPoint& x) const override {
    require_dimension(x);
    const double x1 = x[0], x2 = x[1];
    double sum[3] = {0.0, 0.0, 0.0};
    int count[3] = {0, 0, 0};
    for (int j = 3; j <= n(); ++j) {
      const double y = x[j - 1] - 2.0 * x2 * std::sin(2.0 * kPi * x1 + j * kPi / n());
      sum[group(j)] += 4.0 * y * y - std::cos(8.0 * kPi * y) + 1.0;
      ++count[group(j)];
    }
    const double c1 = std::cos(0.5 * kPi * x1), s1 = std::sin(0.5 * kPi * x1);
    const double c2 = std::cos(0.5 * kPi * x2), s2 = std::sin(0.5 * kPi * x2);
    Eigen::VectorXd f(3);
    f[0] = c1 * c2 + 2.0 * sum[0] / count[0];
    f[1] = c1 * s2 + 2.0 * sum[1] / count[1];
    f[2] = s1 + 2.0 * sum[2] / count[2];
    return f;
  }

  Eigen::MatrixXd jacobian(const DecisionPoint& x) const override {
    require_dimension(x);
    const double x1 = x[0], x2 = x[1];
    int count[3] = {0, 0, 0};
    for (int j = 3; j <= n(); ++j) ++count[group(j)];
    const double h = 0.5 * kPi;
    const double c1 = std::cos(h * x1), s1 = std::sin(h * x1);
    const double c2 = std::cos(h * x2), s2 = std::sin(h * x2);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, n());
    jac(0, 0) = -h * s1 * c2;
    jac(0, 1) = -h * c1 * s2;
    jac(1, 0) = -h * s1 * s2;
    jac(1, 1) = h * c1 * c2;
    jac(2, 0) = h * c1;
    for (int j = 3; j <= n(); ++j) {
      const int g = group(j);
      const double angle = 2.0 * kPi * x1 + j * kPi / n();
      const double y = x[j - 1] - 2.0 * x2 * std::sin(angle);
      const double dh_dy = 8.0 * y + 8.0 * kPi * std::sin(8.0 * kPi * y);
      const double weight = 2.0 / count[g];
      jac(g, j - 1) = weight * dh_dy;
      jac(g, 0) += weight * dh_dy * (-2.0 * x2 * std::cos(angle) * 2.0 * kPi);
      jac(g, 1) += weight * dh_dy * (-2.0 * std::sin(angle));
    }
    return jac;
  }

 private:
  // J1: j-1 divisible by 3, J2: j-2 divisible by 3, J3: j divisible by 3.
  static int group(int j) {
    if ((j - 1) % 3 == 0) return 0;
    if ((j - 2) % 3 == 0) return 1;
    return 2;
  }
  static Eigen::VectorXd lower_box(int n) {
    Eigen::VectorXd lo = filled(n, -2.0);
    lo[0] = lo[1] = 0.0;
    return lo;
  }
  static Eigen::VectorXd upper_box(int n) {
    Eigen::VectorXd up = filled(n, 2.0);
    up[0] = up[1] = 1.0;
    return up;
  }
};

// MAN: unverified transcription, see docs/problems.md.
class Man final : public Problem {
 public:
  explicit Man(int n) : Problem("MAN", n, 2, filled(n, -10.0), filled(n, 10.0), true) {}

  Eigen::VectorXd evaluate(const DecisionPoint& x) const override {
    require_dimension(x);
    const double nn = static_cast<double>(n()) * n();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(2);
    for (int i = 0; i < n(); ++i) {
      const double shift = x[i] - (i + 1);
      f[0] += shift * shift / nn;
      f[1] += std::exp(-x[i]) + x[i];
    }
    return f;
  }

  Eigen::MatrixXd jacobian(const DecisionPoint& x) const override {
    require_dimension(x);
    const double nn = static_cast<double>(n()) * n();
    Eigen::MatrixXd jac(2, n());
    for (int i = 0; i < n(); ++i) {
      jac(0, i) = 2.0 * (x[i] - (i + 1)) / nn;
      jac(1, i) = 1.0 - std::exp(-x[i]);
    }
    return jac;
  }
};

struct Entry {
  const char* name;
  int min_n;
  bool experimental;
  ProblemPtr (*make)(int);
};

template <typename T>
ProblemPtr make(int n) {
  return std::make_shared<const T>(n);
}

const Entry kRegistry[] = {
    {"JOS_1", 2, false, &make<Jos1>},
    {"MAN", 2, true, &make<Man>},
    {"CEC09_2", 3, false, &make<Cec09Uf2>},
    {"CEC09_3", 3, false, &make<Cec09Uf3>},
    {"CEC09_10", 5, false, &make<Cec09Uf10>},
};

}  // namespace

Problem::Problem(std::string name, int n, int m, Eigen::VectorXd lower, Eigen::VectorXd upper,
                 bool experimental)
    : name_(std::move(name)),
      n_(n),
      m_(m),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      experimental_(experimental) {}

void Problem::require_dimension(const DecisionPoint& x) const {
  if (x.size() != n_) {
    throw UsageError(name_ + ": expected x of dimension " + std::to_string(n_) + ", got " +
                     std::to_string(x.size()));
  }
}

ProblemPtr registry_get(std::string_view name, int n, bool allow_experimental) {
  for (const auto& entry : kRegistry) {
    if (name != entry.name) continue;
    if (entry.experimental && !allow_experimental) {
      throw LookupError(std::string(name) + " is experimental; enable experimental problems to use it");
    }
    if (n < entry.min_n) {
      throw LookupError(std::string(name) + " requires n >= " + std::to_string(entry.min_n));
    }
    return entry.make(n);
  }
  throw LookupError("unknown problem '" + std::string(name) + "'");
}

std::vector<std::string> registered_problems(bool include_experimental) {
  std::vector<std::string> out;
  for (const auto& entry : kRegistry) {
    if (!entry.experimental || include_experimental) out.emplace_back(entry.name);
  }
  return out;
}

const std::vector<int>& benchmark_dimensions() {
  static const std::vector<int> dims = {5, 10, 20, 30, 40, 50, 100, 200};
  return dims;
}

std::string to_string(StartStrategy strategy) {
  return strategy == StartStrategy::uniform_diagonal ? "uniform_diagonal" : "midpoint";
}

StartStrategy parse_strategy(std::string_view text) {
  if (text == "uniform_diagonal") return StartStrategy::uniform_diagonal;
  if (text == "midpoint") return StartStrategy::midpoint;
  throw UsageError("unknown start strategy '" + std::string(text) + "'");
}

ObjectiveVector evaluate_checked(const Problem& problem, const DecisionPoint& x) {
  Eigen::VectorXd f = problem.evaluate(x);
  if (!f.allFinite()) throw InputError(problem.name() + ": objective not finite at the given point");
  return ObjectiveVector(std::move(f));
}

Archive initial_points(const Problem& problem, StartStrategy strategy, int count,
                       std::uint64_t seed) {
  if (count < 1) throw UsageError("initial_points: count must be >= 1");
  if (strategy == StartStrategy::midpoint && count != 1) {
    throw UsageError("initial_points: midpoint strategy yields exactly one point");
  }
  std::vector<double> ts;
  if (strategy == StartStrategy::midpoint) {
    ts.push_back(0.5);
  } else {
    std::mt19937_64 gen(seed);
    for (int i = 0; i < count; ++i) {
      // 53 random mantissa bits: portable, unlike std::uniform_real_distribution.
      ts.push_back(static_cast<double>(gen() >> 11) * 0x1.0p-53);
    }
  }
  std::vector<FrontMember> sample;
  std::vector<ObjectiveVector> values;
  const Eigen::VectorXd span = problem.upper() - problem.lower();
  for (double t : ts) {
    DecisionPoint x = problem.lower() + t * span;
    Eigen::VectorXd f = problem.evaluate(x);
    if (!f.allFinite() || !problem.jacobian(x).allFinite()) continue;
    FrontMember member;
    member.x = std::move(x);
    member.fx = ObjectiveVector(std::move(f));
    values.push_back(member.fx);
    sample.push_back(std::move(member));
  }
  std::vector<FrontMember> kept;
  std::uint64_t next_id = 0;
  for (std::size_t i : nondominated_indices(values)) {
    sample[i].id = next_id++;
    kept.push_back(std::move(sample[i]));
  }
  return Archive::from_members(std::move(kept));
}

Archive initial_points(const Problem& problem, StartStrategy strategy, std::uint64_t seed) {
  return initial_points(problem, strategy,
                        strategy == StartStrategy::midpoint ? 1 : problem.n(), seed);
}

}  // namespace frontsd
