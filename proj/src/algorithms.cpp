#include "frontsd/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "frontsd/archive_io.hpp"
#include "frontsd/direction.hpp"
#include "frontsd/errors.hpp"

namespace frontsd {

void SolverConfig::validate() const {
  linesearch.validate();
  if (!(eps_theta > 0.0)) throw UsageError("eps_theta must be positive");
  if (!(descent_tol >= 0.0)) throw UsageError("descent_tol must be nonnegative");
  if (max_iterations < 1) throw UsageError("max_iterations must be >= 1");
  if (crowding.enabled && !(crowding.quantile >= 0.0 && crowding.quantile <= 1.0)) {
    throw UsageError("crowding quantile must lie in [0,1]");
  }
}

const FrontMember& RunTrace::member(std::uint64_t id) const {
  auto it = std::lower_bound(members.begin(), members.end(), id,
                             [](const FrontMember& m, std::uint64_t key) { return m.id < key; });
  if (it == members.end() || it->id != id) throw UsageError("trace has no member " + std::to_string(id));
  return *it;
}

Archive RunTrace::snapshot(std::size_t index) const {
  if (index >= snapshots.size()) throw UsageError("snapshot index out of range");
  Archive out;
  for (std::uint64_t id : snapshots[index]) out.insert_filtered(member(id));
  return out;
}

Archive RunTrace::final_archive() const {
  if (snapshots.empty()) return {};
  return snapshot(snapshots.size() - 1);
}

std::optional<std::string> stop_reason(const RunTrace& trace, const SolverConfig& config) {
  if (static_cast<int>(trace.iterations.size()) >= config.max_iterations) return "max_iterations";
  if (config.max_evaluations > 0 && trace.counters.evaluations > config.max_evaluations) {
    return "max_evaluations";
  }
  if (!trace.iterations.empty() && trace.snapshots.size() >= 2 &&
      trace.snapshots[trace.snapshots.size() - 1] == trace.snapshots[trace.snapshots.size() - 2]) {
    return "no_change";
  }
  return std::nullopt;
}

bool stopping_rule(const RunTrace& trace, const SolverConfig& config) {
  return stop_reason(trace, config).has_value();
}

std::vector<double> crowding_distances(const Archive& archive) {
  const std::size_t count = archive.size();
  if (count == 0) throw UsageError("crowding_distances: empty archive");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(count, 0.0);
  if (count <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  const std::size_t m = archive[0].fx.size();
  std::vector<std::size_t> order(count);
  for (std::size_t j = 0; j < m; ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Archive order is id order, so stable_sort breaks ties by id.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return archive[a].fx[j] < archive[b].fx[j];
    });
    const double lo = archive[order.front()].fx[j];
    const double hi = archive[order.back()].fx[j];
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = hi - lo;
    if (!(range > 0.0)) continue;
    for (std::size_t r = 1; r + 1 < count; ++r) {
      dist[order[r]] += (archive[order[r + 1]].fx[j] - archive[order[r - 1]].fx[j]) / range;
    }
  }
  return dist;
}

std::optional<double> finite_quantile(std::vector<double> values, double q) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

void validate_seed_archive(const Problem& problem, const Archive& seeds) {
  if (seeds.empty()) throw InputError("seed archive is empty");
  for (const auto& s : seeds) {
    if (s.x.size() != problem.n() || static_cast<int>(s.fx.size()) != problem.m()) {
      throw InputError("seed " + std::to_string(s.id) + " has wrong dimensions for " + problem.name());
    }
    Eigen::VectorXd f = problem.evaluate(s.x);
    if (!f.allFinite() || !(f.array() == s.fx.values().array()).all()) {
      throw InputError("seed " + std::to_string(s.id) + " objective vector does not match F(x)");
    }
  }
  if (!is_mutually_nondominated(seeds)) throw InputError("seed points are not mutually nondominated");
}

Archive make_seed_archive(const Problem& problem, const std::vector<DecisionPoint>& points) {
  std::vector<FrontMember> members;
  std::uint64_t id = 0;
  for (const auto& x : points) {
    FrontMember m;
    m.id = id++;
    m.x = x;
    m.fx = evaluate_checked(problem, x);
    members.push_back(std::move(m));
  }
  return Archive::from_members(std::move(members));
}

namespace {

using Clock = std::chrono::steady_clock;

/// State shared by both drivers.
class RunState {
 public:
  RunState(const Problem& problem, const Archive& seeds, const SolverConfig& config,
           std::string solver)
      : problem_(problem), config_(config), cache_(problem, &counters_), current_(seeds) {
    config.validate();
    validate_seed_archive(problem, seeds);
    trace_.solver = std::move(solver);
    trace_.n = problem.n();
    trace_.m = problem.m();
    trace_.members = seeds.members();
    trace_.snapshots.push_back(seeds.ids());
    next_id_ = seeds.members().back().id + 1;
    subsets_ = enumerate_subsets(problem.m());
  }

  const Problem& problem() const { return problem_; }
  const SolverConfig& config() const { return config_; }
  const std::vector<SubsetIndex>& subsets() const { return subsets_; }
  const Archive& current() const { return current_; }
  DirectionCache& cache() { return cache_; }
  EvalCounters& counters() { return counters_; }

  bool should_stop() {
    trace_.counters = counters_.snapshot();
    if (auto reason = stop_reason(trace_, config_)) {
      trace_.stop_reason = *reason;
      return true;
    }
    return false;
  }

  bool budget_exhausted() const {
    return config_.max_evaluations > 0 && counters_.evaluations.load() > config_.max_evaluations;
  }

  /// Inserts a new point into the working archive; returns the stored member on success.
  std::optional<FrontMember> insert(Archive& working, std::uint64_t parent, LineSearchResult ls) {
    // Duplicates and dominated points are dropped without consuming an id.
    if (working.dominates_point(ls.value) || working.contains_value(ls.value)) {
      ++skipped_insertions_;
      return std::nullopt;
    }
    FrontMember p;
    p.id = next_id_++;
    p.parent_id = parent;
    p.x = std::move(ls.point);
    p.fx = std::move(ls.value);
    working.insert_filtered(p);
    trace_.members.push_back(p);
    return p;
  }

  void finish_iteration(Archive working, IterationRecord record, Clock::time_point started) {
    current_ = std::move(working);
    for (std::size_t i = 0; i < current_.size(); ++i) {
      const auto& member = current_[i];
      const double theta =
          cache_.direction(member.id, member.x, SubsetIndex::full(problem_.m())).theta;
      record.max_theta = std::max(record.max_theta, std::abs(theta));
    }
    cache_.retain_only(current_);
    record.k = static_cast<int>(trace_.iterations.size()) + 1;
    record.member_count = current_.size();
    record.evaluations = counters_.evaluations.load();
    record.wallclock_seconds = std::chrono::duration<double>(Clock::now() - started).count();
    if (!config_.record_snapshots && trace_.snapshots.size() >= 2) trace_.snapshots.pop_back();
    trace_.snapshots.push_back(current_.ids());
    trace_.iterations.push_back(std::move(record));
  }

  RunTrace take() {
    trace_.counters = counters_.snapshot();
    return std::move(trace_);
  }

 private:
  const Problem& problem_;
  SolverConfig config_;
  EvalCounters counters_;
  DirectionCache cache_;
  Archive current_;
  RunTrace trace_;
  std::vector<SubsetIndex> subsets_;
  std::uint64_t next_id_ = 0;
  std::uint64_t skipped_insertions_ = 0;
};

bool gate_passes(const Archive& working, const FrontMember& x_c, const SubsetIndex& subset) {
  return std::none_of(working.begin(), working.end(), [&](const FrontMember& y) {
    return dominates_on(y.fx, x_c.fx, subset);
  });
}

}  // namespace

RunTrace fsd_run(const Problem& problem, const Archive& seeds, const SolverConfig& config) {
  RunState state(problem, seeds, config, "FSD");
  const auto& params = config.linesearch;
  while (!state.should_stop()) {
    const auto started = Clock::now();
    const Archive frozen = state.current();
    Archive working = frozen;
    IterationRecord record;
    bool out_of_budget = false;
    for (const auto& x_c : frozen) {
      for (const auto& subset : state.subsets()) {
        // The gate reads the working archive as it stands when (x_c, I) is processed.
        if (!gate_passes(working, x_c, subset)) continue;
        const DirectionResult& dir = state.cache().direction(x_c.id, x_c.x, subset);
        if (!(dir.theta < -config.descent_tol)) continue;
        record.launches.push_back({x_c.id, subset.label()});
        try {
          auto ls = armijo_front(problem, subset, working, x_c, dir.d, dir.theta, params,
                                 &state.counters());
          state.insert(working, x_c.id, std::move(ls));
        } catch (const LineSearchFailure&) {
          // counted by the search; the candidate is skipped
        }
        if (state.budget_exhausted()) {
          out_of_budget = true;
          break;
        }
      }
      if (out_of_budget) break;
    }
    state.finish_iteration(std::move(working), std::move(record), started);
  }
  return state.take();
}

RunTrace ifsd_run(const Problem& problem, const Archive& seeds, const SolverConfig& config) {
  RunState state(problem, seeds, config, "IFSD");
  const auto& params = config.linesearch;
  const SubsetIndex full = SubsetIndex::full(problem.m());
  while (!state.should_stop()) {
    const auto started = Clock::now();
    Archive frozen = state.current();
    Archive working = frozen;
    IterationRecord record;

    // Crowding is measured once on X^k; z inherits the value of the x_c it came from.
    std::optional<double> threshold;
    std::unordered_map<std::uint64_t, double> crowding;
    if (config.crowding.enabled) {
      const auto dist = crowding_distances(frozen);
      for (std::size_t i = 0; i < frozen.size(); ++i) crowding[frozen[i].id] = dist[i];
      threshold = finite_quantile(dist, config.crowding.quantile);
    }

    bool out_of_budget = false;
    for (const auto& x_c : frozen) {
      if (!working.contains(x_c.id)) continue;

      FrontMember z = x_c;
      const DirectionResult& common = state.cache().direction(x_c.id, x_c.x, full);
      if (common.theta < -config.descent_tol) {
        try {
          auto ls = armijo_single(problem, x_c, common.d, common.theta, params, &state.counters());
          if (auto stored = state.insert(working, x_c.id, std::move(ls))) z = std::move(*stored);
        } catch (const LineSearchFailure&) {
          // keep z = x_c
        }
      }
      if (state.budget_exhausted()) break;
      if (!working.contains(z.id)) continue;

      if (config.crowding.enabled && threshold) {
        const double c = crowding.at(x_c.id);
        if (!(std::isinf(c) || c >= *threshold)) continue;
      }

      for (const auto& subset : state.subsets()) {
        if (subset.is_full() && config.subset_policy == SubsetPolicy::exclude_full_in_partial_loop) {
          continue;
        }
        if (!working.contains(z.id)) break;
        const DirectionResult& dir = state.cache().direction(z.id, z.x, subset);
        if (!(dir.theta < -config.descent_tol)) continue;
        record.launches.push_back({z.id, subset.label()});
        try {
          auto ls = nondominance_backtrack(problem, working, z, dir.d, dir.theta, params,
                                           &state.counters());
          state.insert(working, x_c.id, std::move(ls));
        } catch (const LineSearchFailure&) {
        }
        if (state.budget_exhausted()) {
          out_of_budget = true;
          break;
        }
      }
      if (out_of_budget) break;
    }
    state.finish_iteration(std::move(working), std::move(record), started);
  }
  return state.take();
}

void write_trace_jsonl(std::ostream& out, const RunTrace& trace) {
  for (const auto& it : trace.iterations) {
    // Fixed key order and %.17g numbers keep the file byte-stable.
    out << "{\"k\":" << it.k << ",\"member_count\":" << it.member_count
        << ",\"evaluations\":" << it.evaluations
        << ",\"max_theta\":" << format_double(it.max_theta) << "}\n";
  }
}

}  // namespace frontsd
