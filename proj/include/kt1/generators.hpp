#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kt1/graph.hpp"
#include "kt1/rng.hpp"

namespace kt1 {

enum class Family { Complete, Gnp, Path, Disconnected, Lollipop, LowIdChain };

struct FamilySpec {
  Family family = Family::Gnp;
  double p = 0.5;                   // gnp and the interior density of disconnected components
  std::vector<std::size_t> sizes;   // disconnected: component sizes, must sum to n
  bool connected = true;            // gnp: resample until connected
};

Family parse_family(const std::string& name);
std::string family_name(Family f);

Graph generate(const FamilySpec& spec, std::size_t n, unsigned c, std::uint64_t seed);

Graph complete_graph(std::size_t n, unsigned c, std::uint64_t seed);
Graph gnp_graph(std::size_t n, double p, unsigned c, std::uint64_t seed, bool connected = true);
Graph path_graph(std::size_t n, unsigned c, std::uint64_t seed);
Graph disconnected_graph(const std::vector<std::size_t>& sizes, double p, unsigned c,
                         std::uint64_t seed);
// K_{n - 2q} with paths of q = n/4 nodes hanging off two distinct clique nodes.
// IDs decrease from the left path end, through the clique, to the right path end.
Graph lollipop_graph(std::size_t n, unsigned c, std::uint64_t seed);
// Path v1..v_{n/2} with descending IDs whose last node belongs to a circulant
// cluster of degree about sqrt(n) on the last n/2 + 1 nodes.
Graph low_id_chain_graph(std::size_t n, unsigned c, std::uint64_t seed);

// Distinct random IDs in [1, id_range(n, c)].
std::vector<NodeId> random_ids(std::size_t n, unsigned c, Rng& rng);

}  // namespace kt1
