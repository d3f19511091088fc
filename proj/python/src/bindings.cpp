#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frontsd/algorithms.hpp"
#include "frontsd/archive_io.hpp"
#include "frontsd/direction.hpp"
#include "frontsd/errors.hpp"
#include "frontsd/experiment.hpp"
#include "frontsd/metrics.hpp"
#include "frontsd/problems.hpp"

namespace py = pybind11;
using namespace frontsd;

namespace {

// Rows of F as a front; the solver and instance labels are irrelevant here.
FrontSet front_of(const Eigen::MatrixXd& f) {
  std::vector<ObjectiveVector> pts;
  pts.reserve(static_cast<std::size_t>(f.rows()));
  for (Eigen::Index i = 0; i < f.rows(); ++i) pts.emplace_back(Eigen::VectorXd(f.row(i).transpose()));
  return FrontSet(std::move(pts), "", "");
}

py::dict members_to_dict(const std::vector<FrontMember>& members, int n, int m) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(members.size()), n);
  Eigen::MatrixXd f(static_cast<Eigen::Index>(members.size()), m);
  std::vector<std::uint64_t> ids;
  std::vector<std::optional<std::uint64_t>> parents;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    x.row(r) = members[i].x.transpose();
    f.row(r) = members[i].fx.values().transpose();
    ids.push_back(members[i].id);
    parents.push_back(members[i].parent_id);
  }
  py::dict out;
  out["ids"] = ids;
  out["parent_ids"] = parents;
  out["X"] = x;
  out["F"] = f;
  return out;
}

py::dict trace_to_dict(const RunTrace& tr) {
  const Archive fin = tr.final_archive();
  py::dict out = members_to_dict(fin.members(), tr.n, tr.m);
  out["solver"] = tr.solver;
  out["stop_reason"] = tr.stop_reason;
  out["evaluations"] = tr.counters.evaluations;
  py::list iterations;
  for (const auto& it : tr.iterations) {
    py::dict rec;
    rec["k"] = it.k;
    rec["member_count"] = it.member_count;
    rec["evaluations"] = it.evaluations;
    rec["max_theta"] = it.max_theta;
    iterations.append(rec);
  }
  out["iterations"] = iterations;
  return out;
}

SolverConfig make_config(int max_iterations, std::uint64_t max_evaluations, double eps_theta,
                         std::optional<double> crowding, std::uint64_t seed) {
  SolverConfig c;
  c.max_iterations = max_iterations;
  c.max_evaluations = max_evaluations;
  c.eps_theta = eps_theta;
  c.crowding = crowding ? CrowdingMode::at_quantile(*crowding) : CrowdingMode::off();
  c.seed = seed;
  c.record_snapshots = false;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Front steepest descent solvers, benchmark problems and front metrics.";
  mod.attr("__version__") = kVersion;

  py::register_exception<UsageError>(mod, "UsageError", PyExc_ValueError);
  py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
  py::register_exception<FormatError>(mod, "FormatError", PyExc_ValueError);
  py::register_exception<LookupError>(mod, "LookupError", PyExc_KeyError);
  py::register_exception<ContractError>(mod, "ContractError", PyExc_RuntimeError);
  py::register_exception<SolverError>(mod, "SolverError", PyExc_RuntimeError);

  py::class_<Problem, std::shared_ptr<Problem>>(mod, "Problem")
      .def_property_readonly("name", &Problem::name)
      .def_property_readonly("n", &Problem::n)
      .def_property_readonly("m", &Problem::m)
      .def_property_readonly("lower", &Problem::lower)
      .def_property_readonly("upper", &Problem::upper)
      .def_property_readonly("experimental", &Problem::experimental)
      .def(
          "evaluate", [](const Problem& p, const Eigen::VectorXd& x) { return p.evaluate(x); },
          py::arg("x"))
      .def(
          "jacobian", [](const Problem& p, const Eigen::VectorXd& x) { return p.jacobian(x); },
          py::arg("x"))
      .def("__repr__", [](const Problem& p) {
        return "<Problem " + p.name() + " n=" + std::to_string(p.n()) + ">";
      });

  mod.def(
      "get_problem",
      [](const std::string& name, int n, bool allow_experimental) {
        // Only const members are exposed.
        return std::const_pointer_cast<Problem>(registry_get(name, n, allow_experimental));
      },
      py::arg("name"), py::arg("n"), py::arg("allow_experimental") = false);
  mod.def("problems", &registered_problems, py::arg("include_experimental") = false);

  mod.def(
      "solve_direction",
      [](const Eigen::MatrixXd& gradients) {
        const DirectionResult r = solve_direction(gradients);
        py::dict out;
        out["d"] = r.d;
        out["theta"] = r.theta;
        out["lambda"] = r.lambda;
        return out;
      },
      py::arg("gradients"), "Steepest common descent direction for the gradient rows.");

  mod.def(
      "run",
      [](const std::string& solver, const Problem& problem,
         std::optional<Eigen::MatrixXd> start, const std::string& strategy, int max_iterations,
         std::uint64_t max_evaluations, double eps_theta, std::optional<double> crowding,
         std::uint64_t seed) {
        const SolverConfig c = make_config(max_iterations, max_evaluations, eps_theta, crowding, seed);
        Archive seeds;
        if (start) {
          std::vector<DecisionPoint> pts;
          for (Eigen::Index i = 0; i < start->rows(); ++i) pts.emplace_back(start->row(i).transpose());
          seeds = make_seed_archive(problem, pts);
        } else {
          const StartStrategy s = parse_strategy(strategy);
          seeds = initial_points(problem, s, instance_seed(seed, instance_name({problem.name(), problem.n()}, s)));
        }
        RunTrace tr;
        {
          py::gil_scoped_release release;
          tr = run_solver(solver, problem, seeds, c);
        }
        return trace_to_dict(tr);
      },
      py::arg("solver"), py::arg("problem"), py::arg("start") = py::none(),
      py::arg("strategy") = "midpoint", py::arg("max_iterations") = SolverConfig{}.max_iterations,
      py::arg("max_evaluations") = SolverConfig{}.max_evaluations,
      py::arg("eps_theta") = SolverConfig{}.eps_theta, py::arg("crowding") = 0.5,
      py::arg("seed") = 0,
      "Runs FSD or IFSD from the rows of `start`, or from the named start strategy.");

  mod.def(
      "purity",
      [](const Eigen::MatrixXd& f, const Eigen::MatrixXd& reference) {
        return purity(front_of(f), front_of(reference));
      },
      py::arg("F"), py::arg("reference"));
  mod.def(
      "gamma_spread",
      [](const Eigen::MatrixXd& f, std::optional<Eigen::MatrixXd> reference) {
        if (!reference) return gamma_spread(front_of(f));
        const FrontSet ref = front_of(*reference);
        return gamma_spread(front_of(f), &ref);
      },
      py::arg("F"), py::arg("reference") = py::none());
  mod.def(
      "delta_spread",
      [](const Eigen::MatrixXd& f, std::optional<Eigen::MatrixXd> reference) {
        if (!reference) return delta_spread(front_of(f));
        const FrontSet ref = front_of(*reference);
        return delta_spread(front_of(f), &ref);
      },
      py::arg("F"), py::arg("reference") = py::none());
  mod.def(
      "hypervolume",
      [](const Eigen::MatrixXd& f, const Eigen::VectorXd& ref_point) {
        return hypervolume(front_of(f), ObjectiveVector(ref_point)).value;
      },
      py::arg("F"), py::arg("ref_point"));
  mod.def(
      "performance_profiles",
      [](const std::vector<std::vector<double>>& values, const std::vector<std::string>& solvers,
         bool higher_better) {
        const ProfileResult r = performance_profiles(
            values, solvers,
            higher_better ? MetricDirection::higher_better : MetricDirection::lower_better);
        py::dict curves;
        for (const auto& c : r.curves) curves[py::str(c.solver)] = py::make_tuple(c.tau, c.rho);
        return curves;
      },
      py::arg("values"), py::arg("solvers"), py::arg("higher_better") = false,
      "values[s][p] per solver and instance; returns {solver: (tau, rho)}.");

  mod.def(
      "read_front_csv",
      [](const std::string& path) {
        const ArchiveCsv csv = read_archive_csv(path);
        return members_to_dict(csv.members, csv.n, csv.m);
      },
      py::arg("path"));
  mod.def(
      "validate_front",
      [](const std::string& path, std::optional<std::string> problem, double eps_theta,
         bool require_stationary) {
        const ValidationReport r = validate_front(path, problem, eps_theta);
        py::dict out;
        out["passed"] = r.passed(require_stationary);
        out["format_error"] = r.format_error;
        out["problem"] = r.problem;
        out["n"] = r.n;
        out["values_match"] = r.values_match();
        out["all_stationary"] = r.all_stationary();
        out["violations"] = r.nondominance_violations;
        std::vector<double> thetas, diffs;
        for (const auto& p : r.points) {
          thetas.push_back(p.theta);
          diffs.push_back(p.max_abs_diff);
        }
        out["theta"] = thetas;
        out["max_abs_diff"] = diffs;
        return out;
      },
      py::arg("path"), py::arg("problem") = py::none(), py::arg("eps_theta") = 1e-6,
      py::arg("require_stationary") = false);

  mod.def(
      "run_experiment",
      [](const std::vector<std::pair<std::string, std::string>>& settings) {
        ExperimentConfig c;
        apply_settings(c, settings);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c);
        }
        py::list runs;
        for (const auto& s : r.runs) {
          py::dict d;
          d["solver"] = s.solver;
          d["instance"] = s.instance;
          d["ok"] = s.ok;
          d["error"] = s.error;
          d["stop_reason"] = s.stop_reason;
          d["front_size"] = s.front_size;
          d["evaluations"] = s.evaluations;
          runs.append(d);
        }
        return runs;
      },
      py::arg("settings"),
      "Runs a grid described by (key, value) settings, as in a config file.");
}
