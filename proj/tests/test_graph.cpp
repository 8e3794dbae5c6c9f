#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "kt1/generators.hpp"
#include "kt1/oracle.hpp"

using namespace kt1;

TEST_CASE("edge_name encodes and is symmetric", "[graph]") {
  CHECK(edge_name(NodeId{3}, NodeId{5}, 4).value == 53);
  CHECK(edge_name(NodeId{5}, NodeId{3}, 4).value == 53);
  CHECK(edge_name(NodeId{1}, NodeId{2}, 8).value == 258);
  CHECK_THROWS_AS(edge_name(NodeId{4}, NodeId{4}, 4), InvalidEdge);
}

TEST_CASE("edge_name is injective over all pairs", "[graph]") {
  for (std::size_t n : {2, 5, 17, 64}) {
    unsigned b = 2 * word_unit(n);
    std::set<std::uint64_t> seen;
    for (std::uint64_t u = 1; u <= n; ++u)
      for (std::uint64_t v = u + 1; v <= n; ++v)
        CHECK(seen.insert(edge_name(NodeId{u}, NodeId{v}, b).value).second);
  }
}

TEST_CASE("classify uses sqrt(n) log^1.5 n", "[graph]") {
  CHECK(classify(256, 100) == DegreeClass::Low);
  CHECK(classify(256, 400) == DegreeClass::High);
  CHECK(classify(4, 3) == DegreeClass::Low);
  CHECK(degree_threshold(256) == Catch::Approx(16.0 * std::pow(8.0, 1.5)));
  for (std::uint64_t n = 2; n <= 4096; ++n) {
    double t = std::sqrt(double(n)) * std::pow(std::log2(double(n)), 1.5);
    auto below = static_cast<std::size_t>(std::ceil(t)) - 1;
    if (n > 3) {
      CHECK(classify(n, below) == DegreeClass::Low);
      CHECK(classify(n, below + 1) == DegreeClass::High);
    }
  }
  for (std::uint64_t n = 1; n <= 3; ++n) CHECK(classify(n, n) == DegreeClass::Low);
}

TEST_CASE("star probability", "[graph]") {
  CHECK(star_probability(256) == Catch::Approx(1.0 / std::sqrt(2048.0)).epsilon(1e-9));
  CHECK(256 * star_probability(256) == Catch::Approx(5.657).epsilon(1e-3));
}

TEST_CASE("generator edge counts", "[graph]") {
  CHECK(complete_graph(8, 2, 1).m() == 28);
  auto p = path_graph(5, 2, 1);
  CHECK(p.m() == 4);
  std::size_t maxdeg = 0;
  for (NodeIndex x = 0; x < p.n(); ++x) maxdeg = std::max(maxdeg, p.degree(x));
  CHECK(maxdeg == 2);
  CHECK(lollipop_graph(16, 2, 1).m() == 28 + 3 + 3 + 2);
  CHECK(is_connected(lollipop_graph(64, 2, 3)));
  CHECK(is_connected(low_id_chain_graph(64, 2, 3)));
  auto d = disconnected_graph({5, 7, 3}, 0.3, 2, 9);
  auto labels = component_labels(d);
  CHECK(std::set<NodeIndex>(labels.begin(), labels.end()).size() == 3);

  FamilySpec bad;
  bad.family = Family::Disconnected;
  bad.sizes = {3, 3};
  CHECK_THROWS_AS(generate(bad, 7, 2, 1), ConfigError);
}

TEST_CASE("low-id-chain and lollipop use descending ids along the layout", "[graph]") {
  auto g = low_id_chain_graph(32, 2, 5);
  for (NodeIndex x = 0; x + 1 < g.n(); ++x) CHECK(g.id(x) > g.id(x + 1));
  auto l = lollipop_graph(32, 2, 5);
  for (NodeIndex x = 0; x + 1 < l.n(); ++x) CHECK(l.id(x) > l.id(x + 1));
}

TEST_CASE("graph adjacency is symmetric and ids fit", "[graph]") {
  auto g = gnp_graph(40, 0.3, 2, 11);
  for (NodeIndex x = 0; x < g.n(); ++x) {
    CHECK(g.id(x).value < (std::uint64_t{1} << g.id_bits()));
    for (auto inc : g.adj(x)) {
      CHECK(g.find_edge(inc.neighbor, x) == inc.edge);
      CHECK(inc.neighbor != x);
    }
  }
}

TEST_CASE("oracle small cases", "[graph][oracle]") {
  GraphBuilder tri(3, 2);
  tri.add_edge(0, 1, 1);
  tri.add_edge(1, 2, 2);
  tri.add_edge(0, 2, 3);
  auto t = tri.build();
  auto mst = oracle_msf(t);
  REQUIRE(mst.size() == 2);
  CHECK(std::find(mst.begin(), mst.end(), t.edge(0).name) != mst.end());
  CHECK(std::find(mst.begin(), mst.end(), t.edge(1).name) != mst.end());

  GraphBuilder two(4, 2);
  two.add_edge(0, 1, 5);
  two.add_edge(2, 3, 5);
  CHECK(oracle_msf(two.build()).size() == 2);
}

namespace {

// Exhaustive: every (n-1)-subset of edges that forms a spanning tree, pick the lightest.
std::vector<EdgeName> brute_force_mst(const Graph& g) {
  std::size_t m = g.m(), need = g.n() - 1;
  std::vector<int> pick(m, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(need), 1);
  std::sort(pick.begin(), pick.end());
  std::vector<Weight> best_key;
  std::vector<EdgeName> best;
  do {
    DisjointSets ds(g.n());
    bool ok = true;
    std::vector<Weight> ws;
    std::vector<EdgeName> names;
    for (std::size_t e = 0; e < m && ok; ++e) {
      if (!pick[e]) continue;
      ok = ds.unite(g.edge(EdgeIndex(e)).u, g.edge(EdgeIndex(e)).v);
      ws.push_back(g.edge(EdgeIndex(e)).weight);
      names.push_back(g.edge(EdgeIndex(e)).name);
    }
    if (!ok) continue;
    // strict total order: compare sorted-descending weight lists (unique MST minimises all)
    std::sort(ws.rbegin(), ws.rend());
    if (best.empty() || ws < best_key) {
      best_key = ws;
      best = names;
    }
  } while (std::next_permutation(pick.begin(), pick.end()));
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace

TEST_CASE("oracle matches exhaustive spanning-tree search on n=8", "[graph][oracle]") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto g = gnp_graph(8, 0.45, 2, seed);
    if (g.m() > 16) continue;  // keep the enumeration small
    CHECK(oracle_msf(g) == brute_force_mst(g));
    CHECK(oracle_msf(g) == oracle_msf(g));
  }
}

TEST_CASE("graph text round trip", "[graph]") {
  auto g = disconnected_graph({4, 1, 3}, 0.5, 2, 21);
  std::stringstream ss;
  write_graph(ss, g);
  auto h = read_graph(ss);
  CHECK(h.n() == g.n());
  CHECK(h.m() == g.m());
  CHECK(oracle_msf(h) == oracle_msf(g));

  std::stringstream bad("3 2\n1 2 5\n");
  CHECK_THROWS_AS(read_graph(bad), ConfigError);
}

TEST_CASE("star counts over seeds", "[graph][stars]") {
  // mean star count over 10^4 seeds within 3 sigma of n p; per-node inclusion independent
  const std::size_t n = 256;
  double p = star_probability(n);
  const int runs = 10000;
  double sum = 0;
  std::vector<int> both(4, 0);  // joint outcomes of nodes 0 and 1
  auto g = path_graph(n, 2, 1);
  CHECK(select_stars(g, 77) == select_stars(g, 77));
  for (int s = 0; s < runs; ++s) {
    auto stars = select_stars(g, std::uint64_t(s));
    int count = static_cast<int>(std::count(stars.begin(), stars.end(), true));
    bool first = stars[0], second = stars[1];
    sum += count;
    both[first * 2 + second]++;
  }
  double mean = sum / runs;
  double sigma = std::sqrt(n * p * (1 - p) / runs);
  CHECK(std::abs(mean - n * p) <= 3 * sigma);
  // 2x2 independence chi-square, 1 dof, critical 10.83 at 0.001
  double r0 = both[0] + both[1], r1 = both[2] + both[3];
  double c0 = both[0] + both[2], c1 = both[1] + both[3];
  double chi = 0;
  double obs[4] = {double(both[0]), double(both[1]), double(both[2]), double(both[3])};
  double exp[4] = {r0 * c0 / runs, r0 * c1 / runs, r1 * c0 / runs, r1 * c1 / runs};
  for (int i = 0; i < 4; ++i)
    if (exp[i] > 0) chi += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  CHECK(chi < 10.83);
}
