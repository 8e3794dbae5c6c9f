#pragma once

#include <vector>

#include "kt1/graph.hpp"

namespace kt1 {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Kruskal over the strict (base, name) order. Sorted by name.
std::vector<EdgeName> oracle_msf(const Graph& g);

// Names of an edge-index set, sorted.
std::vector<EdgeName> sorted_names(const Graph& g, const std::vector<EdgeIndex>& edges);

}  // namespace kt1
