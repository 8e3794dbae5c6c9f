#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "kt1/types.hpp"

namespace kt1 {

EdgeName edge_name(NodeId u, NodeId v, unsigned b);

struct Incidence {
  NodeIndex neighbor;
  EdgeIndex edge;
};

struct Edge {
  NodeIndex u;
  NodeIndex v;
  EdgeName name;
  Weight weight;

  NodeIndex other(NodeIndex x) const { return x == u ? v : u; }
};

enum class DegreeClass : std::uint8_t { Low, High };

double degree_threshold(std::uint64_t n);
DegreeClass classify(std::uint64_t n, std::size_t degree);
double star_probability(std::uint64_t n);

class Graph;
// Each node independently, probability star_probability(n), node-local stream.
std::vector<bool> select_stars(const Graph& g, std::uint64_t seed);

class Graph {
 public:
  Graph() = default;

  std::size_t n() const { return ids_.size(); }
  std::size_t m() const { return edges_.size(); }
  unsigned c() const { return c_; }
  unsigned id_bits() const { return id_bits_; }

  NodeId id(NodeIndex x) const { return ids_[x]; }
  const std::vector<NodeId>& ids() const { return ids_; }
  std::optional<NodeIndex> index_of(NodeId id) const;

  // Sorted by neighbor index.
  std::span<const Incidence> adj(NodeIndex x) const { return adj_[x]; }
  std::size_t degree(NodeIndex x) const { return adj_[x].size(); }
  DegreeClass degree_class(NodeIndex x) const { return classify(n(), degree(x)); }

  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<EdgeIndex> find_edge(NodeIndex x, NodeIndex y) const;
  // Position of neighbor y inside adj(x).
  std::optional<std::size_t> slot_of(NodeIndex x, NodeIndex y) const;
  std::optional<EdgeIndex> edge_by_name(EdgeName name) const;

 private:
  friend class GraphBuilder;

  unsigned c_ = 2;
  unsigned id_bits_ = 0;
  std::vector<NodeId> ids_;
  std::vector<std::vector<Incidence>> adj_;
  std::vector<Edge> edges_;
  std::vector<std::pair<std::uint64_t, EdgeIndex>> by_name_;  // sorted
  std::vector<std::pair<std::uint64_t, NodeIndex>> by_id_;    // sorted
};

class GraphBuilder {
 public:
  GraphBuilder(std::size_t n, unsigned c);

  void set_id(NodeIndex x, NodeId id);
  void add_edge(NodeIndex u, NodeIndex v, std::uint64_t base);

  std::size_t n() const { return ids_.size(); }
  unsigned id_bits() const { return id_bits_; }
  bool has_edge(NodeIndex u, NodeIndex v) const;

  Graph build() const;

 private:
  unsigned c_;
  unsigned id_bits_;
  std::vector<NodeId> ids_;
  std::vector<std::tuple<NodeIndex, NodeIndex, std::uint64_t>> edges_;
  std::unordered_set<std::uint64_t> pair_keys_;  // u*n+v with u < v
};

// n^c capped at 2^b - 1: the ID range, also the weight-base range cap
std::uint64_t id_range(std::size_t n, unsigned c);
std::uint64_t weight_range(std::size_t n, unsigned c);

// Weakly connected components as a label per node.
std::vector<NodeIndex> component_labels(const Graph& g);
bool is_connected(const Graph& g);

void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);

}  // namespace kt1
