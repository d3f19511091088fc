#pragma once

/**
 * @file dominance.hpp
 * @brief Pareto ordering predicates and the mutually nondominated archive.
 *
 * All comparisons are exact floating-point comparisons on the nonnegative
 * orthant order (minimization). Near-duplicate handling is left to metrics.
 */

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace frontsd {

using DecisionPoint = Eigen::VectorXd;

/// Finite, nonempty vector of objective values.
class ObjectiveVector {
 public:
  ObjectiveVector() = default;
  /// Throws InputError if empty or if any entry is NaN or infinite.
  explicit ObjectiveVector(Eigen::VectorXd values);
  ObjectiveVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

  friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.values_.size() == b.values_.size() && (a.values_.array() == b.values_.array()).all();
  }

 private:
  Eigen::VectorXd values_;
};

/// Nonempty, strictly increasing set of zero-based objective indices below m.
class SubsetIndex {
 public:
  /// Throws UsageError on empty, out-of-range or duplicate indices.
  SubsetIndex(std::vector<int> indices, int m);

  static SubsetIndex full(int m);
  /// Convenience for the 1-based notation {1,...,m}.
  static SubsetIndex one_based(std::vector<int> indices, int m);

  std::span<const int> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  int m() const noexcept { return m_; }
  bool is_full() const noexcept { return static_cast<int>(indices_.size()) == m_; }
  /// 1-based label such as "{1,3}".
  std::string label() const;

  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;

 private:
  std::vector<int> indices_;
  int m_ = 0;
};

/// All 2^m - 1 nonempty subsets, ordered by cardinality then lexicographically.
std::vector<SubsetIndex> enumerate_subsets(int m);

bool leq(const ObjectiveVector& u, const ObjectiveVector& v);
/// u <= v componentwise and u != v.
bool dominates(const ObjectiveVector& u, const ObjectiveVector& v);
bool strictly_dominates(const ObjectiveVector& u, const ObjectiveVector& v);
ObjectiveVector restrict(const ObjectiveVector& u, const SubsetIndex& subset);

// Restricted variants that avoid materializing the projections.
bool leq_on(const ObjectiveVector& u, const ObjectiveVector& v, const SubsetIndex& subset);
bool dominates_on(const ObjectiveVector& u, const ObjectiveVector& v, const SubsetIndex& subset);

struct FrontMember {
  std::uint64_t id = 0;
  /// Member this point was generated from; absent for seed points.
  std::optional<std::uint64_t> parent_id;
  DecisionPoint x;
  ObjectiveVector fx;
  double crowding = std::numeric_limits<double>::infinity();
};

enum class InsertOutcome { inserted, duplicate };

/**
 * Mutually nondominated collection of front members kept in ascending id
 * order. No two members share an objective vector.
 */
class Archive {
 public:
  Archive() = default;

  /// Validates mutual nondominance and uniqueness; throws InputError otherwise.
  static Archive from_members(std::vector<FrontMember> members);

  const std::vector<FrontMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  const FrontMember& operator[](std::size_t i) const { return members_[i]; }

  const FrontMember* find(std::uint64_t id) const;
  bool contains(std::uint64_t id) const { return find(id) != nullptr; }
  std::vector<std::uint64_t> ids() const;

  /// True if some member's objective vector dominates f.
  bool dominates_point(const ObjectiveVector& f) const;
  bool contains_value(const ObjectiveVector& f) const;

  /**
   * Removes every member dominated by p and appends p. Inserting a vector
   * already present is a no-op that keeps the incumbent. Throws ContractError
   * if an existing member dominates p.
   */
  InsertOutcome insert_filtered(FrontMember p);

 private:
  friend Archive nondominated_subset_wrt(const Archive&, const SubsetIndex&);

  std::vector<FrontMember> members_;
};

/// Value-returning form of Archive::insert_filtered.
Archive insert_filtered(const Archive& archive, FrontMember p);

/// Members not dominated w.r.t. the restricted objectives by any other member.
Archive nondominated_subset_wrt(const Archive& archive, const SubsetIndex& subset);

/// Positions (ascending) of the members of nondominated_subset_wrt(archive, subset).
std::vector<std::size_t> nondominated_positions_wrt(const Archive& archive,
                                                    const SubsetIndex& subset);

/// Raw-input form; throws ContractError unless the points are mutually nondominated
/// and pairwise distinct.
std::vector<std::size_t> nondominated_positions_wrt(std::span<const ObjectiveVector> points,
                                                    const SubsetIndex& subset);

/// Brute-force O(N^2) check used by validation and tests.
bool is_mutually_nondominated(std::span<const ObjectiveVector> points);
bool is_mutually_nondominated(const Archive& archive);

/// Indices of the points that no other point dominates; exact duplicates keep the first.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points);

}  // namespace frontsd
