#include "frontsd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "frontsd/errors.hpp"

namespace frontsd {

FrontSet::FrontSet(std::vector<ObjectiveVector> points, std::string solver, std::string instance)
    : points_(std::move(points)), solver_(std::move(solver)), instance_(std::move(instance)) {
  for (const auto& p : points_) {
    if (p.size() != points_.front().size()) {
      throw InputError("front " + solver_ + "/" + instance_ + ": mixed objective counts");
    }
  }
  if (nondominated_indices(points_).size() != points_.size()) {
    throw InputError("front " + solver_ + "/" + instance_ +
                     ": points are not mutually nondominated and distinct");
  }
}

FrontSet FrontSet::from_archive(const Archive& archive, std::string solver, std::string instance) {
  std::vector<ObjectiveVector> pts;
  pts.reserve(archive.size());
  for (const auto& m : archive) pts.push_back(m.fx);
  return FrontSet(std::move(pts), std::move(solver), std::move(instance));
}

FrontSet reference_front(const std::vector<FrontSet>& fronts) {
  std::vector<ObjectiveVector> all;
  std::string instance;
  for (const auto& f : fronts) {
    if (!f.empty() && !all.empty() && f.m() != all.front().size()) {
      throw InputError("reference_front: fronts have different objective counts");
    }
    if (instance.empty()) instance = f.instance();
    all.insert(all.end(), f.points().begin(), f.points().end());
  }
  std::vector<ObjectiveVector> kept;
  for (std::size_t i : nondominated_indices(all)) kept.push_back(all[i]);
  return FrontSet(std::move(kept), "reference", instance);
}

double purity(const FrontSet& front, const FrontSet& reference) {
  if (front.empty()) return 0.0;
  auto less = [](const ObjectiveVector& a, const ObjectiveVector& b) {
    return std::lexicographical_compare(a.values().begin(), a.values().end(), b.values().begin(),
                                        b.values().end());
  };
  std::set<ObjectiveVector, decltype(less)> ref(reference.points().begin(),
                                                reference.points().end(), less);
  std::size_t hits = 0;
  for (const auto& p : front.points()) hits += ref.count(p);
  return static_cast<double>(hits) / static_cast<double>(front.size());
}

namespace {

struct Extremes {
  std::vector<double> lo, hi;
};

std::optional<Extremes> extremes_of(const FrontSet* reference, std::size_t m) {
  if (reference == nullptr || reference->empty()) return std::nullopt;
  if (reference->m() != m) throw UsageError("reference front has a different objective count");
  Extremes e{std::vector<double>(m, std::numeric_limits<double>::infinity()),
             std::vector<double>(m, -std::numeric_limits<double>::infinity())};
  for (const auto& p : reference->points()) {
    for (std::size_t j = 0; j < m; ++j) {
      e.lo[j] = std::min(e.lo[j], p[j]);
      e.hi[j] = std::max(e.hi[j], p[j]);
    }
  }
  return e;
}

std::vector<double> sorted_column(const FrontSet& front, std::size_t j) {
  std::vector<double> col;
  col.reserve(front.size());
  for (const auto& p : front.points()) col.push_back(p[j]);
  std::sort(col.begin(), col.end());
  return col;
}

}  // namespace

double gamma_spread(const FrontSet& front, const FrontSet* reference) {
  if (front.empty()) return 0.0;
  const std::size_t m = front.m();
  const auto ext = extremes_of(reference, m);
  double gamma = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> col = sorted_column(front, j);
    if (ext) {
      col.push_back(ext->lo[j]);
      col.push_back(ext->hi[j]);
      std::sort(col.begin(), col.end());
    }
    for (std::size_t i = 1; i < col.size(); ++i) gamma = std::max(gamma, col[i] - col[i - 1]);
  }
  return gamma;
}

double delta_spread(const FrontSet& front, const FrontSet* reference) {
  if (front.empty()) return 0.0;
  const std::size_t m = front.m();
  const auto ext = extremes_of(reference, m);
  double delta = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double> col = sorted_column(front, j);
    const double d0 = ext ? std::abs(col.front() - ext->lo[j]) : 0.0;
    const double dn = ext ? std::abs(ext->hi[j] - col.back()) : 0.0;
    const std::size_t gaps = col.size() - 1;
    double mean = 0.0;
    for (std::size_t i = 1; i < col.size(); ++i) mean += col[i] - col[i - 1];
    if (gaps > 0) mean /= static_cast<double>(gaps);
    double dev = 0.0;
    for (std::size_t i = 1; i < col.size(); ++i) dev += std::abs(col[i] - col[i - 1] - mean);
    const double num = d0 + dn + dev;
    const double den = d0 + dn + static_cast<double>(gaps) * mean;
    if (den > 0.0) delta = std::max(delta, num / den);
  }
  return delta;
}

namespace {

// pts are (f1, f2) pairs strictly inside the reference box.
double hv2d(std::vector<std::pair<double, double>> pts, double r1, double r2) {
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double ceiling = r2;
  for (const auto& [a, b] : pts) {
    if (b < ceiling) {
      area += (r1 - a) * (ceiling - b);
      ceiling = b;
    }
  }
  return area;
}

}  // namespace

HypervolumeResult hypervolume(const FrontSet& front, const ObjectiveVector& ref_point) {
  HypervolumeResult out;
  const std::size_t m = ref_point.size();
  if (!front.empty() && front.m() != m) {
    throw UsageError("hypervolume: reference point length does not match the front");
  }
  if (m > 3) throw UsageError("hypervolume: only m <= 3 is supported");
  std::vector<const ObjectiveVector*> inside;
  for (const auto& p : front.points()) {
    bool strictly = true;
    for (std::size_t j = 0; j < m; ++j) strictly = strictly && p[j] < ref_point[j];
    if (strictly) {
      inside.push_back(&p);
    } else {
      ++out.excluded;
    }
  }
  if (inside.empty()) {
    out.warning = true;
    return out;
  }
  if (m == 1) {
    double best = ref_point[0];
    for (const auto* p : inside) best = std::min(best, (*p)[0]);
    out.value = ref_point[0] - best;
    return out;
  }
  if (m == 2) {
    std::vector<std::pair<double, double>> pts;
    for (const auto* p : inside) pts.emplace_back((*p)[0], (*p)[1]);
    out.value = hv2d(std::move(pts), ref_point[0], ref_point[1]);
    return out;
  }
  // Slab [z_k, z_{k+1}) is covered by the 2D front of all points with f_3 <= z_k.
  std::sort(inside.begin(), inside.end(),
            [](const ObjectiveVector* a, const ObjectiveVector* b) { return (*a)[2] < (*b)[2]; });
  std::vector<std::pair<double, double>> active;
  double volume = 0.0;
  std::size_t i = 0;
  while (i < inside.size()) {
    const double z = (*inside[i])[2];
    while (i < inside.size() && (*inside[i])[2] == z) {
      active.emplace_back((*inside[i])[0], (*inside[i])[1]);
      ++i;
    }
    const double next = i < inside.size() ? (*inside[i])[2] : ref_point[2];
    volume += hv2d(active, ref_point[0], ref_point[1]) * (next - z);
  }
  out.value = volume;
  return out;
}

ProfileResult performance_profiles(const std::vector<std::vector<double>>& values,
                                   const std::vector<std::string>& solvers,
                                   MetricDirection direction) {
  if (values.empty()) throw UsageError("performance_profiles: no solvers");
  if (solvers.size() != values.size()) {
    throw UsageError("performance_profiles: solver names do not match the value rows");
  }
  const std::size_t instances = values.front().size();
  for (const auto& row : values) {
    if (row.size() != instances) throw UsageError("performance_profiles: ragged value matrix");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  ProfileResult result;
  std::vector<std::vector<double>> ratios(values.size());
  for (std::size_t p = 0; p < instances; ++p) {
    std::vector<double> t(values.size());
    bool usable = true;
    for (std::size_t s = 0; s < values.size(); ++s) {
      double v = values[s][p];
      if (std::isnan(v)) {
        t[s] = inf;
        continue;
      }
      if (direction == MetricDirection::higher_better) {
        if (!(v > 0.0)) {
          usable = false;
          break;
        }
        v = 1.0 / v;
      }
      t[s] = v;
    }
    if (!usable) {
      result.excluded_instances.push_back(p);
      continue;
    }
    const double best = *std::min_element(t.begin(), t.end());
    for (std::size_t s = 0; s < values.size(); ++s) {
      double r = inf;
      if (std::isfinite(best)) {
        if (best == 0.0) {
          r = t[s] == 0.0 ? 1.0 : inf;
        } else {
          r = t[s] / best;
        }
      }
      ratios[s].push_back(r);
    }
  }
  std::vector<double> grid;
  for (const auto& row : ratios) {
    for (double r : row) {
      if (std::isfinite(r)) grid.push_back(r);
    }
  }
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t used = instances - result.excluded_instances.size();
  for (std::size_t s = 0; s < values.size(); ++s) {
    ProfileCurve curve;
    curve.solver = solvers[s];
    curve.tau = grid;
    std::vector<double> sorted = ratios[s];
    std::sort(sorted.begin(), sorted.end());
    for (double tau : grid) {
      const auto within = static_cast<std::size_t>(
          std::upper_bound(sorted.begin(), sorted.end(), tau) - sorted.begin());
      curve.rho.push_back(used == 0 ? 0.0
                                    : static_cast<double>(within) / static_cast<double>(used));
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

}  // namespace frontsd
