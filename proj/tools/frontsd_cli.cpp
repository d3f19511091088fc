#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "frontsd/errors.hpp"
#include "frontsd/experiment.hpp"

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Front steepest descent experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a solver x instance grid and write the artifact tree");
  std::string config_path;
  std::vector<std::string> problems;
  std::vector<std::string> dims;
  std::vector<std::string> strategies;
  std::vector<std::string> solvers;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<int> max_iterations;
  std::optional<std::uint64_t> max_evaluations;
  std::optional<std::string> grid;
  bool experimental = false;
  run->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  run->add_option("--problem", problems, "Problem name(s)")->delimiter(',');
  run->add_option("--n", dims, "Dimension(s)")->delimiter(',');
  run->add_option("--strategy", strategies, "uniform_diagonal and/or midpoint")->delimiter(',');
  run->add_option("--solver", solvers, "FSD and/or IFSD")->delimiter(',');
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Global seed");
  run->add_option("--jobs", jobs, "Worker threads");
  run->add_option("--max-iterations", max_iterations, "Outer iteration budget");
  run->add_option("--max-evaluations", max_evaluations, "Function evaluation budget (0 = none)");
  run->add_option("--grid", grid, "Named grid; 'benchmark' selects every problem and dimension");
  run->add_flag("--allow-experimental", experimental, "Admit experimental problems");

  auto* validate = app.add_subcommand("validate", "Check a front CSV against its problem");
  std::string front_path;
  std::optional<std::string> validate_problem;
  double eps_theta = 1e-6;
  bool require_stationary = false;
  validate->add_option("path", front_path, "Front CSV")->required();
  validate->add_option("--problem", validate_problem, "Problem name (default: from file name)");
  validate->add_option("--eps-theta", eps_theta, "Stationarity threshold");
  validate->add_flag("--require-stationary", require_stationary,
                     "Fail unless every point is stationary");

  auto* list = app.add_subcommand("list", "List registered problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& name : frontsd::registered_problems(true)) {
        const auto p = frontsd::registry_get(name, 5, true);
        std::cout << name << " m=" << p->m() << (p->experimental() ? " (experimental)" : "")
                  << '\n';
      }
      return 0;
    }
    if (*validate) {
      const auto report = frontsd::validate_front(front_path, validate_problem, eps_theta);
      frontsd::print_report(std::cout, report);
      const bool ok = report.passed(require_stationary);
      std::cout << (ok ? "PASSED" : "FAILED") << '\n';
      return ok ? 0 : 1;
    }

    frontsd::ExperimentConfig config;
    frontsd::Settings settings;
    if (!config_path.empty()) settings = frontsd::parse_settings_file(config_path);
    if (grid) settings.emplace_back("grid", *grid);
    if (!problems.empty()) settings.emplace_back("problems", join(problems));
    if (!dims.empty()) settings.emplace_back("dims", join(dims));
    if (!strategies.empty()) settings.emplace_back("strategies", join(strategies));
    if (!solvers.empty()) settings.emplace_back("solvers", join(solvers));
    if (out_dir) settings.emplace_back("out", *out_dir);
    if (seed) settings.emplace_back("seed", std::to_string(*seed));
    if (jobs) settings.emplace_back("jobs", std::to_string(*jobs));
    if (max_iterations) settings.emplace_back("max_iterations", std::to_string(*max_iterations));
    if (max_evaluations) settings.emplace_back("max_evaluations", std::to_string(*max_evaluations));
    if (experimental) settings.emplace_back("allow_experimental", "true");
    frontsd::apply_settings(config, settings);

    const auto result = frontsd::run_experiment(config);
    std::size_t failed = 0;
    for (const auto& r : result.runs) {
      if (!r.ok) {
        ++failed;
        std::cerr << "run failed: " << r.solver << " " << r.instance << ": " << r.error << '\n';
      }
    }
    std::cout << result.runs.size() << " runs over " << result.instances.size()
              << " instances written to " << config.output_dir << " (" << failed
              << " failed)\n";
    return 0;
  } catch (const frontsd::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
