#include "kt1/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace kt1 {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

std::vector<EdgeName> oracle_msf(const Graph& g) {
  std::vector<EdgeIndex> order(g.m());
  std::iota(order.begin(), order.end(), EdgeIndex{0});
  std::sort(order.begin(), order.end(),
            [&](EdgeIndex a, EdgeIndex b) { return g.edge(a).weight < g.edge(b).weight; });
  DisjointSets ds(g.n());
  std::vector<EdgeName> out;
  for (auto e : order)
    if (ds.unite(g.edge(e).u, g.edge(e).v)) out.push_back(g.edge(e).name);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeName> sorted_names(const Graph& g, const std::vector<EdgeIndex>& edges) {
  std::vector<EdgeName> out;
  out.reserve(edges.size());
  for (auto e : edges) out.push_back(g.edge(e).name);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kt1
