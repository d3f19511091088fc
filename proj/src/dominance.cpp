#include "frontsd/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "frontsd/errors.hpp"

namespace frontsd {

namespace {

void require_same_length(const ObjectiveVector& u, const ObjectiveVector& v) {
  if (u.size() != v.size()) {
    throw UsageError("objective vectors differ in length: " + std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()));
  }
}

void require_subset_fits(const ObjectiveVector& u, const SubsetIndex& subset) {
  if (static_cast<int>(u.size()) != subset.m()) {
    throw UsageError("subset defined for m=" + std::to_string(subset.m()) +
                     " applied to vector of length " + std::to_string(u.size()));
  }
}

}  // namespace

ObjectiveVector::ObjectiveVector(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() == 0) throw InputError("objective vector must be nonempty");
  if (!values_.allFinite()) throw InputError("objective vector contains non-finite entries");
}

ObjectiveVector::ObjectiveVector(std::initializer_list<double> values)
    : ObjectiveVector(Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                                        static_cast<Eigen::Index>(values.size()))) {}

SubsetIndex::SubsetIndex(std::vector<int> indices, int m) : indices_(std::move(indices)), m_(m) {
  if (indices_.empty()) throw UsageError("objective subset must be nonempty");
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw UsageError("objective subset contains duplicate indices");
  }
  if (indices_.front() < 0 || indices_.back() >= m) {
    throw UsageError("objective subset index out of range for m=" + std::to_string(m));
  }
}

SubsetIndex SubsetIndex::full(int m) {
  std::vector<int> all(static_cast<std::size_t>(std::max(m, 0)));
  for (int j = 0; j < m; ++j) all[static_cast<std::size_t>(j)] = j;
  return SubsetIndex(std::move(all), m);
}

SubsetIndex SubsetIndex::one_based(std::vector<int> indices, int m) {
  for (int& j : indices) --j;
  return SubsetIndex(std::move(indices), m);
}

std::string SubsetIndex::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(indices_[i] + 1);
  }
  return out + "}";
}

std::vector<SubsetIndex> enumerate_subsets(int m) {
  if (m < 1 || m > 20) throw UsageError("enumerate_subsets: m out of range");
  std::vector<std::vector<int>> all;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> members;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) members.push_back(j);
    }
    all.push_back(std::move(members));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<SubsetIndex> out;
  out.reserve(all.size());
  for (auto& s : all) out.emplace_back(std::move(s), m);
  return out;
}

bool leq(const ObjectiveVector& u, const ObjectiveVector& v) {
  require_same_length(u, v);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] > v[j]) return false;
  }
  return true;
}

bool dominates(const ObjectiveVector& u, const ObjectiveVector& v) {
  require_same_length(u, v);
  bool strict = false;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] > v[j]) return false;
    if (u[j] < v[j]) strict = true;
  }
  return strict;
}

bool strictly_dominates(const ObjectiveVector& u, const ObjectiveVector& v) {
  require_same_length(u, v);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!(u[j] < v[j])) return false;
  }
  return true;
}

ObjectiveVector restrict(const ObjectiveVector& u, const SubsetIndex& subset) {
  require_subset_fits(u, subset);
  Eigen::VectorXd out(static_cast<Eigen::Index>(subset.size()));
  Eigen::Index k = 0;
  for (int j : subset.indices()) out[k++] = u[static_cast<std::size_t>(j)];
  return ObjectiveVector(std::move(out));
}

bool leq_on(const ObjectiveVector& u, const ObjectiveVector& v, const SubsetIndex& subset) {
  require_same_length(u, v);
  require_subset_fits(u, subset);
  for (int j : subset.indices()) {
    const auto k = static_cast<std::size_t>(j);
    if (u[k] > v[k]) return false;
  }
  return true;
}

bool dominates_on(const ObjectiveVector& u, const ObjectiveVector& v, const SubsetIndex& subset) {
  require_same_length(u, v);
  require_subset_fits(u, subset);
  bool strict = false;
  for (int j : subset.indices()) {
    const auto k = static_cast<std::size_t>(j);
    if (u[k] > v[k]) return false;
    if (u[k] < v[k]) strict = true;
  }
  return strict;
}

Archive Archive::from_members(std::vector<FrontMember> members) {
  std::sort(members.begin(), members.end(),
            [](const FrontMember& a, const FrontMember& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0 && members[i].id == members[i - 1].id) {
      throw InputError("duplicate member id " + std::to_string(members[i].id));
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k == i) continue;
      if (members[k].fx.size() != members[i].fx.size()) {
        throw InputError("members have objective vectors of different lengths");
      }
      if (dominates(members[k].fx, members[i].fx)) {
        throw InputError("member " + std::to_string(members[i].id) + " is dominated by member " +
                         std::to_string(members[k].id));
      }
      if (k < i && members[k].fx == members[i].fx) {
        throw InputError("members " + std::to_string(members[k].id) + " and " +
                         std::to_string(members[i].id) + " share an objective vector");
      }
    }
  }
  Archive out;
  out.members_ = std::move(members);
  return out;
}

const FrontMember* Archive::find(std::uint64_t id) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), id,
                             [](const FrontMember& m, std::uint64_t key) { return m.id < key; });
  if (it == members_.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<std::uint64_t> Archive::ids() const {
  std::vector<std::uint64_t> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.id);
  return out;
}

bool Archive::dominates_point(const ObjectiveVector& f) const {
  return std::any_of(members_.begin(), members_.end(),
                     [&](const FrontMember& m) { return dominates(m.fx, f); });
}

bool Archive::contains_value(const ObjectiveVector& f) const {
  return std::any_of(members_.begin(), members_.end(),
                     [&](const FrontMember& m) { return m.fx == f; });
}

InsertOutcome Archive::insert_filtered(FrontMember p) {
  for (const auto& m : members_) {
    if (m.fx.size() != p.fx.size()) throw UsageError("inserted point has wrong objective count");
    if (m.fx == p.fx) return InsertOutcome::duplicate;
    if (dominates(m.fx, p.fx)) {
      throw ContractError("insert_filtered: point is dominated by archive member " +
                          std::to_string(m.id));
    }
  }
  std::erase_if(members_, [&](const FrontMember& m) { return dominates(p.fx, m.fx); });
  if (members_.empty() || members_.back().id < p.id) {
    members_.push_back(std::move(p));
  } else {
    auto it = std::lower_bound(members_.begin(), members_.end(), p.id,
                               [](const FrontMember& m, std::uint64_t key) { return m.id < key; });
    if (it != members_.end() && it->id == p.id) {
      throw ContractError("insert_filtered: id " + std::to_string(p.id) + " already present");
    }
    members_.insert(it, std::move(p));
  }
  return InsertOutcome::inserted;
}

Archive insert_filtered(const Archive& archive, FrontMember p) {
  Archive out = archive;
  out.insert_filtered(std::move(p));
  return out;
}

namespace {

// fx(i) yields the objective vector of the i-th point; the points must be
// mutually nondominated and pairwise distinct under the full objectives.
template <typename Get>
std::vector<std::size_t> positions_wrt(std::size_t count, const SubsetIndex& subset, Get fx) {
  std::vector<std::size_t> out;
  const auto idx = subset.indices();
  if (subset.is_full()) {
    out.resize(count);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  if (idx.size() == 1) {
    const auto j = static_cast<std::size_t>(idx[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) best = std::min(best, fx(i)[j]);
    for (std::size_t i = 0; i < count; ++i) {
      if (fx(i)[j] == best) out.push_back(i);
    }
    return out;
  }
  if (idx.size() == 2) {
    // Sweep in (f_a, f_b) order: a point survives iff it has the smallest f_b
    // in its f_a group and beats every earlier group strictly in f_b.
    const auto a = static_cast<std::size_t>(idx[0]);
    const auto b = static_cast<std::size_t>(idx[1]);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      if (fx(l)[a] != fx(r)[a]) return fx(l)[a] < fx(r)[a];
      return fx(l)[b] < fx(r)[b];
    });
    double best_b = std::numeric_limits<double>::infinity();
    std::size_t g = 0;
    while (g < count) {
      std::size_t e = g;
      while (e < count && fx(order[e])[a] == fx(order[g])[a]) ++e;
      const double group_min = fx(order[g])[b];
      if (group_min < best_b) {
        for (std::size_t r = g; r < e && fx(order[r])[b] == group_min; ++r) out.push_back(order[r]);
        best_b = group_min;
      }
      g = e;
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    bool dominated = false;
    for (std::size_t k = 0; k < count && !dominated; ++k) {
      dominated = k != i && dominates_on(fx(k), fx(i), subset);
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> nondominated_positions_wrt(const Archive& archive,
                                                    const SubsetIndex& subset) {
  if (!archive.empty() && archive[0].fx.size() != static_cast<std::size_t>(subset.m())) {
    throw UsageError("nondominated_positions_wrt: subset does not match the objective count");
  }
  return positions_wrt(archive.size(), subset,
                       [&](std::size_t i) -> const ObjectiveVector& { return archive[i].fx; });
}

std::vector<std::size_t> nondominated_positions_wrt(std::span<const ObjectiveVector> points,
                                                    const SubsetIndex& subset) {
  for (const auto& p : points) {
    if (p.size() != static_cast<std::size_t>(subset.m())) {
      throw UsageError("nondominated_positions_wrt: subset does not match the objective count");
    }
  }
  if (!is_mutually_nondominated(points)) {
    throw ContractError("nondominated_positions_wrt: points are not mutually nondominated");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (points[i] == points[k]) {
        throw ContractError("nondominated_positions_wrt: repeated objective vector");
      }
    }
  }
  return positions_wrt(points.size(), subset,
                       [&](std::size_t i) -> const ObjectiveVector& { return points[i]; });
}

Archive nondominated_subset_wrt(const Archive& archive, const SubsetIndex& subset) {
  Archive out;
  // A subset of a valid archive, taken in order, is itself valid.
  for (std::size_t i : nondominated_positions_wrt(archive, subset)) {
    out.members_.push_back(archive[i]);
  }
  return out;
}

bool is_mutually_nondominated(std::span<const ObjectiveVector> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (i != k && dominates(points[i], points[k])) return false;
    }
  }
  return true;
}

bool is_mutually_nondominated(const Archive& archive) {
  const auto& ms = archive.members();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t k = 0; k < ms.size(); ++k) {
      if (i != k && dominates(ms[i].fx, ms[k].fx)) return false;
    }
  }
  return true;
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points) {
  std::vector<std::size_t> out;
  const bool biobjective =
      !points.empty() && std::all_of(points.begin(), points.end(),
                                     [](const ObjectiveVector& p) { return p.size() == 2; });
  if (biobjective) {
    // Sorted by (f1, f2, position), a point survives iff it improves f2 strictly.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (points[a][0] != points[b][0]) return points[a][0] < points[b][0];
      if (points[a][1] != points[b][1]) return points[a][1] < points[b][1];
      return a < b;
    });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      if (points[i][1] < best) {
        best = points[i][1];
        out.push_back(i);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t k = 0; k < points.size() && keep; ++k) {
      if (k == i) continue;
      if (dominates(points[k], points[i])) keep = false;
      if (k < i && points[k] == points[i]) keep = false;
    }
    if (keep) out.push_back(i);
  }
  return out;
}

}  // namespace frontsd
