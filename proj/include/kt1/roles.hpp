#pragma once

#include <optional>
#include <vector>

#include "kt1/graph.hpp"

namespace kt1 {

// Star and low-degree flags per node, fixed at initialization.
struct Roles {
  std::vector<bool> star;
  std::vector<bool> low;

  bool high_non_star(NodeIndex x) const { return !low[x] && !star[x]; }
};

struct RoleOptions {
  std::uint64_t seed = 1;
  std::optional<double> degree_threshold;  // replaces sqrt(n) log^1.5 n
  std::optional<double> star_probability;
  std::optional<std::vector<bool>> stars;  // explicit star set
};

Roles assign_roles(const Graph& g, const RoleOptions& opt);

}  // namespace kt1
