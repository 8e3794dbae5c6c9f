#include "kt1/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "kt1/rng.hpp"

namespace kt1 {

unsigned ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(x - 1));
}

unsigned word_unit(std::uint64_t n) { return std::max(ceil_log2(n), 2u); }

unsigned c_log_n(std::uint64_t n, unsigned c) {
  if (n <= 1) return 1;
  auto v = static_cast<unsigned>(std::ceil(c * std::log2(static_cast<double>(n)) - 1e-9));
  return std::max(v, 1u);
}

EdgeName edge_name(NodeId u, NodeId v, unsigned b) {
  if (u == v) throw InvalidEdge("self-loop on id " + std::to_string(u.value));
  auto lo = std::min(u.value, v.value);
  auto hi = std::max(u.value, v.value);
  return EdgeName{(lo << b) | hi};
}

double degree_threshold(std::uint64_t n) {
  if (n <= 1) return 0.0;
  double lg = std::log2(static_cast<double>(n));
  return std::sqrt(static_cast<double>(n)) * std::pow(lg, 1.5);
}

DegreeClass classify(std::uint64_t n, std::size_t degree) {
  if (n <= 3) return DegreeClass::Low;
  return static_cast<double>(degree) < degree_threshold(n) ? DegreeClass::Low : DegreeClass::High;
}

double star_probability(std::uint64_t n) {
  if (n <= 2) return 1.0;
  double p = 1.0 / std::sqrt(static_cast<double>(n) * std::log2(static_cast<double>(n)));
  return std::min(p, 1.0);
}

std::vector<bool> select_stars(const Graph& g, std::uint64_t seed) {
  double p = star_probability(g.n());
  std::vector<bool> out(g.n());
  for (NodeIndex x = 0; x < g.n(); ++x) {
    auto rng = make_stream(seed, {stream::kStars, x});
    out[x] = std::bernoulli_distribution(p)(rng);
  }
  return out;
}

std::uint64_t id_range(std::size_t n, unsigned c) {
  unsigned b = c * word_unit(n);
  std::uint64_t cap = (b >= 63) ? ~std::uint64_t{0} >> 1 : (std::uint64_t{1} << b) - 1;
  return std::min(weight_range(n, c), cap);
}

std::uint64_t weight_range(std::size_t n, unsigned c) {
  long double v = std::pow(static_cast<long double>(std::max<std::size_t>(n, 2)), c);
  if (v > 4.0e18L) return std::uint64_t{4'000'000'000'000'000'000ULL};
  return static_cast<std::uint64_t>(v);
}

std::optional<NodeIndex> Graph::index_of(NodeId id) const {
  auto it = std::lower_bound(by_id_.begin(), by_id_.end(), std::pair{id.value, NodeIndex{0}});
  if (it == by_id_.end() || it->first != id.value) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Graph::slot_of(NodeIndex x, NodeIndex y) const {
  const auto& a = adj_[x];
  auto it = std::lower_bound(a.begin(), a.end(), y,
                             [](const Incidence& inc, NodeIndex v) { return inc.neighbor < v; });
  if (it == a.end() || it->neighbor != y) return std::nullopt;
  return static_cast<std::size_t>(it - a.begin());
}

std::optional<EdgeIndex> Graph::find_edge(NodeIndex x, NodeIndex y) const {
  if (x >= adj_.size()) return std::nullopt;
  auto s = slot_of(x, y);
  if (!s) return std::nullopt;
  return adj_[x][*s].edge;
}

std::optional<EdgeIndex> Graph::edge_by_name(EdgeName name) const {
  auto it = std::lower_bound(by_name_.begin(), by_name_.end(), std::pair{name.value, EdgeIndex{0}});
  if (it == by_name_.end() || it->first != name.value) return std::nullopt;
  return it->second;
}

GraphBuilder::GraphBuilder(std::size_t n, unsigned c)
    : c_(c), id_bits_(c * word_unit(n)), ids_(n) {
  if (c < 2) throw ConfigError("c must be at least 2");
  for (std::size_t i = 0; i < n; ++i) ids_[i] = NodeId{i + 1};
}

void GraphBuilder::set_id(NodeIndex x, NodeId id) {
  if (id.value == 0 || id.value >= (std::uint64_t{1} << id_bits_))
    throw ConfigError("node id " + std::to_string(id.value) + " does not fit " +
                      std::to_string(id_bits_) + " bits");
  ids_.at(x) = id;
}

bool GraphBuilder::has_edge(NodeIndex u, NodeIndex v) const {
  if (u > v) std::swap(u, v);
  std::uint64_t key = std::uint64_t{u} * ids_.size() + v;
  return pair_keys_.contains(key);
}

void GraphBuilder::add_edge(NodeIndex u, NodeIndex v, std::uint64_t base) {
  if (u == v) throw InvalidEdge("self-loop at node index " + std::to_string(u));
  if (u >= ids_.size() || v >= ids_.size()) throw InvalidEdge("edge endpoint out of range");
  if (base == 0 || base > weight_range(ids_.size(), c_))
    throw ConfigError("weight base " + std::to_string(base) + " outside [1, n^c]");
  if (u > v) std::swap(u, v);
  std::uint64_t key = std::uint64_t{u} * ids_.size() + v;
  if (!pair_keys_.insert(key).second) throw InvalidEdge("parallel edge");
  edges_.emplace_back(u, v, base);
}

Graph GraphBuilder::build() const {
  Graph g;
  g.c_ = c_;
  g.id_bits_ = id_bits_;
  g.ids_ = ids_;
  g.adj_.assign(ids_.size(), {});
  g.by_id_.reserve(ids_.size());
  for (NodeIndex x = 0; x < ids_.size(); ++x) g.by_id_.emplace_back(ids_[x].value, x);
  std::sort(g.by_id_.begin(), g.by_id_.end());
  for (std::size_t i = 1; i < g.by_id_.size(); ++i)
    if (g.by_id_[i].first == g.by_id_[i - 1].first)
      throw ConfigError("duplicate node id " + std::to_string(g.by_id_[i].first));

  g.edges_.reserve(edges_.size());
  for (auto [u, v, base] : edges_) {
    auto e = static_cast<EdgeIndex>(g.edges_.size());
    EdgeName name = edge_name(ids_[u], ids_[v], id_bits_);
    g.edges_.push_back(Edge{u, v, name, Weight{base, name}});
    g.adj_[u].push_back(Incidence{v, e});
    g.adj_[v].push_back(Incidence{u, e});
    g.by_name_.emplace_back(name.value, e);
  }
  for (auto& a : g.adj_)
    std::sort(a.begin(), a.end(),
              [](const Incidence& p, const Incidence& q) { return p.neighbor < q.neighbor; });
  std::sort(g.by_name_.begin(), g.by_name_.end());
  return g;
}

std::vector<NodeIndex> component_labels(const Graph& g) {
  std::vector<NodeIndex> label(g.n(), kNoNode);
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.n(); ++s) {
    if (label[s] != kNoNode) continue;
    label[s] = s;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeIndex x = stack.back();
      stack.pop_back();
      for (auto inc : g.adj(x)) {
        if (label[inc.neighbor] == kNoNode) {
          label[inc.neighbor] = s;
          stack.push_back(inc.neighbor);
        }
      }
    }
  }
  return label;
}

bool is_connected(const Graph& g) {
  auto label = component_labels(g);
  return std::all_of(label.begin(), label.end(), [](NodeIndex l) { return l == 0; });
}

void write_graph(std::ostream& os, const Graph& g) {
  os << g.n() << ' ' << g.c() << '\n';
  for (NodeIndex x = 0; x < g.n(); ++x)
    if (g.degree(x) == 0) os << g.id(x).value << '\n';
  for (const auto& e : g.edges())
    os << g.id(e.u).value << ' ' << g.id(e.v).value << ' ' << e.weight.base << '\n';
}

Graph read_graph(std::istream& is) {
  std::string line;
  std::size_t n = 0;
  unsigned c = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream hs(line);
    if (!(hs >> n >> c)) throw ConfigError("graph header must be \"n c\"");
    break;
  }
  if (c == 0) throw ConfigError("missing graph header");

  std::vector<std::uint64_t> ids;
  std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> raw;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::uint64_t> vals;
    std::uint64_t v;
    while (ls >> v) vals.push_back(v);
    if (vals.size() == 1) {
      ids.push_back(vals[0]);
    } else if (vals.size() == 3) {
      raw.emplace_back(vals[0], vals[1], vals[2]);
      ids.push_back(vals[0]);
      ids.push_back(vals[1]);
    } else {
      throw ConfigError("graph line " + std::to_string(lineno) + ": expected \"u v w\" or \"id\"");
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() != n)
    throw ConfigError("graph declares n=" + std::to_string(n) + " but lists " +
                      std::to_string(ids.size()) + " node ids");

  GraphBuilder gb(n, c);
  for (NodeIndex x = 0; x < n; ++x) gb.set_id(x, NodeId{ids[x]});
  auto idx = [&](std::uint64_t id) {
    return static_cast<NodeIndex>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  for (auto [u, v, w] : raw) gb.add_edge(idx(u), idx(v), w);
  return gb.build();
}

}  // namespace kt1
