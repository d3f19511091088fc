#include "frontsd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "frontsd/archive_io.hpp"
#include "frontsd/direction.hpp"
#include "frontsd/errors.hpp"
#include "frontsd/metrics.hpp"

namespace frontsd {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void ExperimentConfig::validate() const {
  if (problems.empty()) throw UsageError("experiment: no problems selected");
  if (strategies.empty()) throw UsageError("experiment: no start strategies selected");
  if (solvers.empty()) throw UsageError("experiment: no solvers selected");
  for (const auto& s : solvers) {
    if (s != "FSD" && s != "IFSD") throw UsageError("unknown solver '" + s + "'");
  }
  if (jobs < 1) throw UsageError("jobs must be >= 1");
  if (output_dir.empty()) throw UsageError("output directory must not be empty");
  solver_config.validate();
}

std::vector<ProblemSpec> benchmark_grid() {
  std::vector<ProblemSpec> out;
  for (const auto& name : registered_problems(true)) {
    for (int n : benchmark_dimensions()) out.push_back({name, n});
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_list(std::string value) {
  value = trim(value);
  if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
    value = value.substr(1, value.size() - 2);
  }
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string::npos ? value.size() : comma;
    std::string item = unquote(trim(std::string_view(value).substr(start, end - start)));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw UsageError("setting '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError("setting '" + key + "': expected a boolean, got '" + text + "'");
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

Settings parse_settings(std::istream& in) {
  Settings out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    bool quoted = false;
    char quote = 0;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == quote) quoted = false;
      } else if (c == '"' || c == '\'') {
        quoted = true;
        quote = c;
      } else if (c == '#') {
        cut = i;
        break;
      }
    }
    const std::string body = trim(std::string_view(line).substr(0, cut));
    if (body.empty()) continue;
    if (body.front() == '[' && body.back() == ']' && body.find('=') == std::string::npos) {
      continue;  // section headers carry no meaning in a flat file
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw FormatError("expected 'key = value'", number);
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = unquote(trim(std::string_view(body).substr(eq + 1)));
    if (key.empty()) throw FormatError("empty key", number);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Settings parse_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return parse_settings(in);
}

void apply_settings(ExperimentConfig& config, const Settings& settings) {
  std::vector<std::string> names;
  std::vector<int> dims;
  for (const auto& p : config.problems) {
    push_unique(names, p.name);
    push_unique(dims, p.n);
  }
  bool grid_changed = false;
  auto& sc = config.solver_config;
  for (const auto& [key, value] : settings) {
    if (key == "grid") {
      if (value != "benchmark") throw UsageError("setting 'grid': only 'benchmark' is known");
      names = registered_problems(true);
      dims = benchmark_dimensions();
      config.allow_experimental = true;
      grid_changed = true;
    } else if (key == "problems" || key == "problem") {
      names = split_list(value);
      grid_changed = true;
    } else if (key == "dims" || key == "n") {
      dims.clear();
      for (const auto& item : split_list(value)) dims.push_back(parse_number<int>(key, item));
      grid_changed = true;
    } else if (key == "strategies" || key == "strategy") {
      config.strategies.clear();
      for (const auto& item : split_list(value)) config.strategies.push_back(parse_strategy(item));
    } else if (key == "solvers" || key == "solver") {
      config.solvers = split_list(value);
    } else if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "jobs") {
      config.jobs = parse_number<int>(key, value);
    } else if (key == "out" || key == "output_dir") {
      config.output_dir = value;
    } else if (key == "allow_experimental") {
      config.allow_experimental = parse_bool(key, value);
    } else if (key == "max_iterations") {
      sc.max_iterations = parse_number<int>(key, value);
    } else if (key == "max_evaluations") {
      sc.max_evaluations = parse_number<std::uint64_t>(key, value);
    } else if (key == "alpha0") {
      sc.linesearch.alpha0 = parse_number<double>(key, value);
    } else if (key == "delta") {
      sc.linesearch.delta = parse_number<double>(key, value);
    } else if (key == "gamma") {
      sc.linesearch.gamma = parse_number<double>(key, value);
    } else if (key == "max_halvings") {
      sc.linesearch.max_halvings = parse_number<int>(key, value);
    } else if (key == "eps_theta") {
      sc.eps_theta = parse_number<double>(key, value);
    } else if (key == "descent_tol") {
      sc.descent_tol = parse_number<double>(key, value);
    } else if (key == "subset_policy") {
      if (value == "all_nonempty") {
        sc.subset_policy = SubsetPolicy::all_nonempty;
      } else if (value == "exclude_full_in_partial_loop") {
        sc.subset_policy = SubsetPolicy::exclude_full_in_partial_loop;
      } else {
        throw UsageError("setting 'subset_policy': unknown value '" + value + "'");
      }
    } else if (key == "crowding") {
      sc.crowding = value == "off" ? CrowdingMode::off()
                                   : CrowdingMode::at_quantile(parse_number<double>(key, value));
    } else if (key == "record_snapshots") {
      sc.record_snapshots = parse_bool(key, value);
    } else {
      throw UsageError("unknown setting '" + key + "'");
    }
  }
  if (grid_changed) {
    if (dims.empty()) dims = benchmark_dimensions();
    config.problems.clear();
    for (const auto& name : names) {
      for (int n : dims) config.problems.push_back({name, n});
    }
  }
}

std::string instance_name(const ProblemSpec& problem, StartStrategy strategy) {
  return problem.name + "_n" + std::to_string(problem.n) + "_" + to_string(strategy);
}

std::optional<InstanceId> parse_instance_name(std::string_view name) {
  static const std::regex shape(R"(^(.+)_n([0-9]+)_(uniform_diagonal|midpoint)$)");
  std::cmatch match;
  if (!std::regex_match(name.begin(), name.end(), match, shape)) return std::nullopt;
  InstanceId id;
  id.problem.name = match[1].str();
  id.problem.n = std::stoi(match[2].str());
  id.strategy = parse_strategy(match[3].str());
  return id;
}

std::uint64_t instance_seed(std::uint64_t global_seed, std::string_view instance) {
  // FNV-1a over the name, then a splitmix64 finalizer over the combination.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : instance) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = h ^ (global_seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunTrace run_solver(std::string_view solver, const Problem& problem, const Archive& seeds,
                    const SolverConfig& config) {
  if (solver == "FSD") return fsd_run(problem, seeds, config);
  if (solver == "IFSD") return ifsd_run(problem, seeds, config);
  throw UsageError("unknown solver '" + std::string(solver) + "'");
}

namespace {

struct Task {
  std::size_t instance = 0;
  std::size_t solver = 0;
};

struct TaskOutput {
  RunStatus status;
  std::optional<FrontSet> front;
};

void ensure_parent(const fs::path& file) {
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  if (ec) throw InputError("cannot create directory '" + file.parent_path().string() + "'");
}

void write_text_file(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

std::string metric_cell(double v) { return std::isnan(v) ? "nan" : format_double(v); }

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json problems = nlohmann::ordered_json::array();
  for (const auto& p : c.problems) problems.push_back({{"name", p.name}, {"n", p.n}});
  nlohmann::ordered_json strategies = nlohmann::ordered_json::array();
  for (auto s : c.strategies) strategies.push_back(to_string(s));
  const auto& sc = c.solver_config;
  return {
      {"problems", problems},
      {"strategies", strategies},
      {"solvers", c.solvers},
      {"seed", c.seed},
      {"jobs", c.jobs},
      {"allow_experimental", c.allow_experimental},
      {"solver_config",
       {{"alpha0", sc.linesearch.alpha0},
        {"delta", sc.linesearch.delta},
        {"gamma", sc.linesearch.gamma},
        {"max_halvings", sc.linesearch.max_halvings},
        {"eps_theta", sc.eps_theta},
        {"descent_tol", sc.descent_tol},
        {"max_iterations", sc.max_iterations},
        {"max_evaluations", sc.max_evaluations},
        {"subset_policy", sc.subset_policy == SubsetPolicy::all_nonempty
                              ? "all_nonempty"
                              : "exclude_full_in_partial_loop"},
        {"crowding", sc.crowding.enabled ? nlohmann::ordered_json(sc.crowding.quantile)
                                         : nlohmann::ordered_json("off")},
        {"record_snapshots", sc.record_snapshots}}},
  };
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto started = Clock::now();
  const fs::path root(config.output_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) {
    throw InputError("output directory '" + root.string() + "' is not writable");
  }

  std::vector<InstanceId> instances;
  ExperimentResult result;
  for (const auto& p : config.problems) {
    for (auto s : config.strategies) {
      instances.push_back({p, s});
      result.instances.push_back(instance_name(p, s));
    }
  }
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t s = 0; s < config.solvers.size(); ++s) tasks.push_back({i, s});
  }
  std::vector<TaskOutput> outputs(tasks.size());

  auto execute = [&](std::size_t t) {
    const Task& task = tasks[t];
    const InstanceId& inst = instances[task.instance];
    const std::string& solver = config.solvers[task.solver];
    const std::string& name = result.instances[task.instance];
    TaskOutput& out = outputs[t];
    out.status.solver = solver;
    out.status.instance = name;
    const auto t0 = Clock::now();
    try {
      const ProblemPtr problem =
          registry_get(inst.problem.name, inst.problem.n, config.allow_experimental);
      const Archive seeds =
          initial_points(*problem, inst.strategy, instance_seed(config.seed, name));
      SolverConfig sc = config.solver_config;
      sc.seed = instance_seed(config.seed, name);
      const RunTrace trace = run_solver(solver, *problem, seeds, sc);
      const Archive front = trace.final_archive();
      const fs::path front_path = root / "fronts" / solver / (name + ".csv");
      ensure_parent(front_path);
      write_archive_csv(front_path.string(), front, problem->n(), problem->m());
      std::ostringstream jsonl;
      write_trace_jsonl(jsonl, trace);
      write_text_file(root / "traces" / solver / (name + ".jsonl"), jsonl.str());
      out.front = FrontSet::from_archive(front, solver, name);
      out.status.ok = true;
      out.status.stop_reason = trace.stop_reason;
      out.status.front_size = front.size();
      out.status.evaluations = trace.counters.evaluations;
    } catch (const std::exception& e) {
      out.status.ok = false;
      out.status.error = e.what();
    }
    out.status.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  };

  const int workers = std::max(1, std::min<int>(config.jobs, static_cast<int>(tasks.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < tasks.size(); t = next++) execute(t);
    });
  }
  for (auto& th : pool) th.join();

  // Metrics, in grid order.
  const std::size_t solver_count = config.solvers.size();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<std::string> metric_names{"purity", "gamma", "delta", "hv"};
  // values[metric][solver][instance]
  std::vector<std::vector<std::vector<double>>> values(
      metric_names.size(),
      std::vector<std::vector<double>>(solver_count, std::vector<double>(instances.size(), nan)));
  std::ostringstream metrics_csv;
  metrics_csv << "solver,instance,purity,gamma,delta,hv\n";
  for (std::size_t i = 0; i < instances.size(); ++i) {
    std::vector<FrontSet> fronts;
    for (std::size_t s = 0; s < solver_count; ++s) {
      const auto& out = outputs[i * solver_count + s];
      if (out.front) fronts.push_back(*out.front);
    }
    std::optional<FrontSet> reference;
    std::optional<ObjectiveVector> ref_point;
    if (!fronts.empty()) {
      reference = reference_front(fronts);
      const std::size_t m = reference->m();
      if (m > 0) {
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m),
                                                       std::numeric_limits<double>::infinity());
        Eigen::VectorXd hi = -lo;
        for (const auto& f : fronts) {
          for (const auto& p : f.points()) {
            lo = lo.cwiseMin(p.values());
            hi = hi.cwiseMax(p.values());
          }
        }
        Eigen::VectorXd r(static_cast<Eigen::Index>(m));
        for (Eigen::Index j = 0; j < r.size(); ++j) {
          const double range = hi[j] - lo[j];
          r[j] = hi[j] + (range > 0.0 ? 0.01 * range : 0.01 * std::max(1.0, std::abs(hi[j])));
        }
        ref_point = ObjectiveVector(std::move(r));
      }
    }
    for (std::size_t s = 0; s < solver_count; ++s) {
      const auto& out = outputs[i * solver_count + s];
      if (out.front && reference && ref_point) {
        values[0][s][i] = purity(*out.front, *reference);
        values[1][s][i] = gamma_spread(*out.front, &*reference);
        values[2][s][i] = delta_spread(*out.front, &*reference);
        values[3][s][i] = hypervolume(*out.front, *ref_point).value;
      }
      metrics_csv << config.solvers[s] << ',' << result.instances[i];
      for (std::size_t k = 0; k < metric_names.size(); ++k) {
        metrics_csv << ',' << metric_cell(values[k][s][i]);
      }
      metrics_csv << '\n';
    }
  }
  write_text_file(root / "metrics.csv", metrics_csv.str());

  std::ostringstream profiles_csv;
  profiles_csv << "metric,solver,tau,rho\n";
  nlohmann::ordered_json excluded = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < metric_names.size(); ++k) {
    const auto direction = (metric_names[k] == "purity" || metric_names[k] == "hv")
                               ? MetricDirection::higher_better
                               : MetricDirection::lower_better;
    const ProfileResult prof = performance_profiles(values[k], config.solvers, direction);
    for (const auto& curve : prof.curves) {
      for (std::size_t t = 0; t < curve.tau.size(); ++t) {
        profiles_csv << metric_names[k] << ',' << curve.solver << ',' << format_double(curve.tau[t])
                     << ',' << format_double(curve.rho[t]) << '\n';
      }
    }
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (std::size_t p : prof.excluded_instances) names.push_back(result.instances[p]);
    excluded[metric_names[k]] = names;
  }
  write_text_file(root / "profiles.csv", profiles_csv.str());

  for (auto& out : outputs) result.runs.push_back(out.status);
  result.seconds = std::chrono::duration<double>(Clock::now() - started).count();

  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& r : result.runs) {
    nlohmann::ordered_json entry = {{"solver", r.solver},
                                    {"instance", r.instance},
                                    {"instance_seed", instance_seed(config.seed, r.instance)},
                                    {"ok", r.ok}};
    if (r.ok) {
      entry["stop_reason"] = r.stop_reason;
      entry["front_size"] = r.front_size;
      entry["evaluations"] = r.evaluations;
    } else {
      entry["error"] = r.error;
    }
    entry["wallclock_seconds"] = r.seconds;
    runs.push_back(std::move(entry));
  }
  nlohmann::ordered_json manifest = {{"version", kVersion},
                                     {"seed", config.seed},
                                     {"config", config_json(config)},
                                     {"instances", result.instances},
                                     {"runs", runs},
                                     {"profile_exclusions", excluded},
                                     {"wallclock_seconds", result.seconds}};
  write_text_file(root / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

bool ValidationReport::values_match() const {
  return std::all_of(points.begin(), points.end(),
                     [&](const PointCheck& p) { return p.max_abs_diff <= value_tolerance; });
}

bool ValidationReport::all_stationary() const {
  return std::all_of(points.begin(), points.end(),
                     [](const PointCheck& p) { return p.stationary; });
}

bool ValidationReport::passed(bool require_stationary) const {
  if (format_error) return false;
  if (!values_match() || !nondominance_violations.empty()) return false;
  return !require_stationary || all_stationary();
}

ValidationReport validate_front(const std::string& path, const std::optional<std::string>& problem,
                                double eps_theta) {
  ValidationReport report;
  report.path = path;
  report.eps_theta = eps_theta;
  ArchiveCsv csv;
  try {
    csv = read_archive_csv(path);
  } catch (const FormatError& e) {
    report.format_error = e.what();
    return report;
  }
  report.n = csv.n;
  if (problem) {
    report.problem = *problem;
  } else {
    const auto id = parse_instance_name(fs::path(path).stem().string());
    if (!id) {
      throw UsageError("cannot infer the problem from '" + path + "'; pass it explicitly");
    }
    report.problem = id->problem.name;
  }
  const ProblemPtr p = registry_get(report.problem, csv.n, true);
  if (p->m() != csv.m) {
    report.format_error = "file has " + std::to_string(csv.m) + " objectives but " +
                          report.problem + " has " + std::to_string(p->m());
    return report;
  }
  const SubsetIndex full = SubsetIndex::full(p->m());
  for (std::size_t i = 0; i < csv.members.size(); ++i) {
    const auto& member = csv.members[i];
    PointCheck check;
    check.id = member.id;
    check.line = csv.lines[i];
    const Eigen::VectorXd f = p->evaluate(member.x);
    check.max_abs_diff = f.allFinite() ? (f - member.fx.values()).lpNorm<Eigen::Infinity>()
                                       : std::numeric_limits<double>::infinity();
    try {
      check.theta = theta_and_v(*p, member.x, full).theta;
      check.stationary = check.theta >= -eps_theta;
    } catch (const std::exception&) {
      check.theta = std::numeric_limits<double>::quiet_NaN();
      check.stationary = false;
    }
    report.points.push_back(check);
  }
  const auto& ms = csv.members;
  for (std::size_t a = 0; a < ms.size(); ++a) {
    for (std::size_t b = 0; b < ms.size(); ++b) {
      if (a == b) continue;
      if (dominates(ms[a].fx, ms[b].fx) || (a < b && ms[a].fx == ms[b].fx)) {
        report.nondominance_violations.emplace_back(ms[a].id, ms[b].id);
      }
    }
  }
  return report;
}

void print_report(std::ostream& out, const ValidationReport& report) {
  out << "file: " << report.path << '\n';
  if (report.format_error) {
    out << "format error: " << *report.format_error << '\n';
    return;
  }
  out << "problem: " << report.problem << " n=" << report.n << " points=" << report.points.size()
      << '\n';
  for (const auto& p : report.points) {
    out << "id=" << p.id << " line=" << p.line << " max_abs_diff=" << format_double(p.max_abs_diff)
        << " theta=" << format_double(p.theta) << (p.stationary ? "" : " (not stationary)") << '\n';
  }
  const auto stationary = std::count_if(report.points.begin(), report.points.end(),
                                        [](const PointCheck& p) { return p.stationary; });
  out << "objective values: " << (report.values_match() ? "match" : "MISMATCH") << '\n';
  out << "nondominance: "
      << (report.nondominance_violations.empty()
              ? std::string("ok")
              : std::to_string(report.nondominance_violations.size()) + " violation(s)")
      << '\n';
  constexpr std::size_t shown = 20;
  for (std::size_t i = 0; i < std::min(shown, report.nondominance_violations.size()); ++i) {
    const auto& [a, b] = report.nondominance_violations[i];
    out << "  member " << a << " dominates or repeats member " << b << '\n';
  }
  out << "stationary (theta >= -" << format_double(report.eps_theta) << "): " << stationary << "/"
      << report.points.size() << '\n';
}

}  // namespace frontsd
