#include "kt1/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace kt1 {

namespace {

std::uint64_t draw_base(std::size_t n, unsigned c, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> d(1, weight_range(n, c));
  return d(rng);
}

GraphBuilder builder_with_ids(std::size_t n, unsigned c, std::uint64_t seed, bool descending) {
  GraphBuilder gb(n, c);
  auto rng = make_stream(seed, {stream::kIds});
  auto ids = random_ids(n, c, rng);
  if (descending) std::sort(ids.begin(), ids.end(), std::greater<>());
  for (NodeIndex x = 0; x < n; ++x) gb.set_id(x, ids[x]);
  return gb;
}

}  // namespace

std::vector<NodeId> random_ids(std::size_t n, unsigned c, Rng& rng) {
  std::uint64_t range = id_range(n, c);
  if (range < n) throw ConfigError("id range too small for n");
  std::vector<NodeId> out;
  out.reserve(n);
  if (range <= 4 * n) {
    std::vector<std::uint64_t> all(range);
    std::iota(all.begin(), all.end(), 1);
    std::shuffle(all.begin(), all.end(), rng);
    for (std::size_t i = 0; i < n; ++i) out.push_back(NodeId{all[i]});
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  std::uniform_int_distribution<std::uint64_t> d(1, range);
  while (out.size() < n) {
    auto v = d(rng);
    if (seen.insert(v).second) out.push_back(NodeId{v});
  }
  return out;
}

Family parse_family(const std::string& name) {
  if (name == "complete") return Family::Complete;
  if (name == "gnp") return Family::Gnp;
  if (name == "path") return Family::Path;
  if (name == "disconnected") return Family::Disconnected;
  if (name == "lollipop") return Family::Lollipop;
  if (name == "low-id-chain") return Family::LowIdChain;
  throw ConfigError("unknown graph family '" + name + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Complete: return "complete";
    case Family::Gnp: return "gnp";
    case Family::Path: return "path";
    case Family::Disconnected: return "disconnected";
    case Family::Lollipop: return "lollipop";
    case Family::LowIdChain: return "low-id-chain";
  }
  return "?";
}

Graph generate(const FamilySpec& spec, std::size_t n, unsigned c, std::uint64_t seed) {
  if (n < 1) throw ConfigError("n must be at least 1");
  switch (spec.family) {
    case Family::Complete: return complete_graph(n, c, seed);
    case Family::Gnp:
      if (spec.p < 0.0 || spec.p > 1.0) throw ConfigError("gnp p outside [0, 1]");
      return gnp_graph(n, spec.p, c, seed, spec.connected);
    case Family::Path: return path_graph(n, c, seed);
    case Family::Disconnected: {
      std::size_t total = std::accumulate(spec.sizes.begin(), spec.sizes.end(), std::size_t{0});
      if (total != n)
        throw ConfigError("component sizes sum to " + std::to_string(total) + ", expected n=" +
                          std::to_string(n));
      return disconnected_graph(spec.sizes, spec.p, c, seed);
    }
    case Family::Lollipop: return lollipop_graph(n, c, seed);
    case Family::LowIdChain: return low_id_chain_graph(n, c, seed);
  }
  throw ConfigError("unknown family");
}

Graph complete_graph(std::size_t n, unsigned c, std::uint64_t seed) {
  auto gb = builder_with_ids(n, c, seed, false);
  auto rng = make_stream(seed, {stream::kWeights});
  for (NodeIndex u = 0; u < n; ++u)
    for (NodeIndex v = u + 1; v < n; ++v) gb.add_edge(u, v, draw_base(n, c, rng));
  return gb.build();
}

Graph gnp_graph(std::size_t n, double p, unsigned c, std::uint64_t seed, bool connected) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto gb = builder_with_ids(n, c, seed, false);
    auto rng = make_stream(seed, {stream::kGraph, attempt});
    std::bernoulli_distribution coin(p);
    for (NodeIndex u = 0; u < n; ++u)
      for (NodeIndex v = u + 1; v < n; ++v)
        if (coin(rng)) gb.add_edge(u, v, draw_base(n, c, rng));
    Graph g = gb.build();
    if (!connected || is_connected(g)) return g;
    if (attempt > 1000) throw ConfigError("gnp: no connected sample, p too small for n");
  }
}

Graph path_graph(std::size_t n, unsigned c, std::uint64_t seed) {
  auto gb = builder_with_ids(n, c, seed, false);
  auto rng = make_stream(seed, {stream::kWeights});
  for (NodeIndex u = 0; u + 1 < n; ++u) gb.add_edge(u, u + 1, draw_base(n, c, rng));
  return gb.build();
}

Graph disconnected_graph(const std::vector<std::size_t>& sizes, double p, unsigned c,
                         std::uint64_t seed) {
  std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (n == 0) throw ConfigError("disconnected: empty size list");
  auto gb = builder_with_ids(n, c, seed, false);
  auto rng = make_stream(seed, {stream::kGraph});
  std::bernoulli_distribution coin(p);
  NodeIndex start = 0;
  for (auto size : sizes) {
    // random tree first, so every component is connected
    for (NodeIndex i = 1; i < size; ++i) {
      std::uniform_int_distribution<NodeIndex> pick(0, i - 1);
      gb.add_edge(start + i, start + pick(rng), draw_base(n, c, rng));
    }
    for (NodeIndex i = 0; i < size; ++i)
      for (NodeIndex j = i + 1; j < size; ++j)
        if (!gb.has_edge(start + i, start + j) && coin(rng))
          gb.add_edge(start + i, start + j, draw_base(n, c, rng));
    start += static_cast<NodeIndex>(size);
  }
  return gb.build();
}

Graph lollipop_graph(std::size_t n, unsigned c, std::uint64_t seed) {
  if (n < 4) return complete_graph(n, c, seed);
  auto gb = builder_with_ids(n, c, seed, true);
  auto rng = make_stream(seed, {stream::kWeights});
  std::size_t q = n / 4;
  std::size_t k = n - 2 * q;
  NodeIndex left = 0, clique = static_cast<NodeIndex>(q), right = static_cast<NodeIndex>(q + k);
  for (NodeIndex i = 0; i + 1 < q; ++i) gb.add_edge(left + i, left + i + 1, draw_base(n, c, rng));
  gb.add_edge(left + q - 1, clique, draw_base(n, c, rng));
  for (NodeIndex i = 0; i < k; ++i)
    for (NodeIndex j = i + 1; j < k; ++j) gb.add_edge(clique + i, clique + j, draw_base(n, c, rng));
  gb.add_edge(clique + k - 1, right, draw_base(n, c, rng));
  for (NodeIndex i = 0; i + 1 < q; ++i)
    gb.add_edge(right + i, right + i + 1, draw_base(n, c, rng));
  return gb.build();
}

Graph low_id_chain_graph(std::size_t n, unsigned c, std::uint64_t seed) {
  if (n < 4) return path_graph(n, c, seed);
  auto gb = builder_with_ids(n, c, seed, true);
  auto rng = make_stream(seed, {stream::kWeights});
  std::size_t half = n / 2;
  for (NodeIndex i = 0; i + 1 < half; ++i) gb.add_edge(i, i + 1, draw_base(n, c, rng));
  // cluster: nodes half-1 .. n-1
  NodeIndex first = static_cast<NodeIndex>(half - 1);
  std::size_t size = n - first;
  std::size_t reach = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(n))) / 2);
  reach = std::min(reach, (size - 1) / 2 == 0 ? std::size_t{1} : (size - 1) / 2);
  for (NodeIndex i = 0; i < size; ++i)
    for (std::size_t d = 1; d <= reach; ++d) {
      auto j = static_cast<NodeIndex>((i + d) % size);
      if (j != i && !gb.has_edge(first + i, first + j))
        gb.add_edge(first + i, first + j, draw_base(n, c, rng));
    }
  return gb.build();
}

}  // namespace kt1
