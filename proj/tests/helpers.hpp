#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frontsd/dominance.hpp"
#include "oracles.hpp"

namespace testing_support {

inline frontsd::FrontMember member(std::uint64_t id, std::initializer_list<double> f,
                                   std::optional<std::uint64_t> parent = std::nullopt) {
  frontsd::FrontMember m;
  m.id = id;
  m.parent_id = parent;
  m.x = Eigen::VectorXd::Zero(1);
  m.fx = frontsd::ObjectiveVector(f);
  return m;
}

inline frontsd::Archive archive(std::vector<std::vector<double>> points) {
  std::vector<frontsd::FrontMember> ms;
  std::uint64_t id = 0;
  for (auto& p : points) {
    frontsd::FrontMember m;
    m.id = id++;
    m.x = Eigen::VectorXd::Zero(1);
    m.fx = frontsd::ObjectiveVector(Eigen::Map<Eigen::VectorXd>(p.data(), p.size()));
    ms.push_back(std::move(m));
  }
  return frontsd::Archive::from_members(std::move(ms));
}

inline oracle::Point to_point(const frontsd::ObjectiveVector& v) {
  return oracle::Point(v.values().data(), v.values().data() + v.values().size());
}

inline std::vector<oracle::Point> points_of(const frontsd::Archive& a) {
  std::vector<oracle::Point> out;
  for (const auto& m : a) out.push_back(to_point(m.fx));
  return out;
}

}  // namespace testing_support
