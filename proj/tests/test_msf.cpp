#include <algorithm>

#include "catch_amalgamated.hpp"
#include "kt1/generators.hpp"
#include "kt1/inspector.hpp"
#include "kt1/msf.hpp"
#include "kt1/oracle.hpp"
#include "kt1/rng.hpp"

using namespace kt1;

namespace {

struct MsfRun {
  SimResult sim;
  std::vector<EdgeName> names;
  std::vector<Msf::Node> nodes;
  Msf::Stats stats;
  std::string violations;
};

MsfRun run_msf(const Graph& g, std::uint64_t seed, MsfConfig cfg, const char* policy = "uniform-random") {
  Msf msf(g, seed, cfg);
  Inspector insp;
  insp.attach(msf);
  SimOptions o;
  o.seed = seed;
  o.policy = DelayPolicy::parse(policy);
  Simulator sim(g, o);
  insp.watch(sim);
  MsfRun out;
  out.sim = sim.run(insp.wrap(msf));
  insp.finish(msf, out.sim);
  for (std::size_t i = 0; i < insp.violations().size() && i < 3; ++i)
    out.violations += insp.violations()[i].check + ": " + insp.violations()[i].detail + "; ";
  out.names = sorted_names(g, msf.forest_edges());
  for (NodeIndex x = 0; x < g.n(); ++x) out.nodes.push_back(msf.node(x));
  out.stats = msf.stats();
  return out;
}

MsfConfig no_stars(std::size_t n) {
  MsfConfig cfg;
  cfg.roles.stars = std::vector<bool>(n, false);
  cfg.roles.degree_threshold = 1e18;
  return cfg;
}

MsfConfig all_stars_high(std::size_t n) {
  MsfConfig cfg;
  cfg.roles.stars = std::vector<bool>(n, true);
  cfg.roles.degree_threshold = 0;
  return cfg;
}

// Random stars, then one extra star next to any high-degree node left without one.
MsfConfig mixed_roles(const Graph& g, std::uint64_t seed, double p, double threshold) {
  MsfConfig cfg;
  cfg.roles.seed = seed;
  cfg.roles.star_probability = p;
  cfg.roles.degree_threshold = threshold;
  auto r = assign_roles(g, cfg.roles);
  auto star = r.star;
  for (NodeIndex x = 0; x < g.n(); ++x) {
    if (r.low[x] || star[x]) continue;
    bool covered = false;
    for (auto inc : g.adj(x)) covered = covered || star[inc.neighbor];
    if (!covered) star[g.adj(x)[0].neighbor] = true;
  }
  cfg.roles.stars = star;
  return cfg;
}

std::uint64_t count(const SimResult& r, Kind k) { return r.metrics.per_kind[static_cast<std::size_t>(k)]; }

const char* kPolicies[] = {"uniform-random", "fifo-per-edge", "reorder-adversary", "region-stall"};

}  // namespace

TEST_CASE("GHS alone matches the oracle on starless graphs", "[msf]") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto g = gnp_graph(40, 0.15, 2, seed);
    for (auto p : kPolicies) {
      auto r = run_msf(g, seed, no_stars(g.n()), p);
      REQUIRE(r.sim.quiescent());
      CHECK(r.names == oracle_msf(g));
      CHECK(r.violations == "");
    }
  }
}

TEST_CASE("two starless triangles give two trees", "[msf]") {
  auto g = disconnected_graph({3, 3}, 1.0, 2, 4);
  auto r = run_msf(g, 4, no_stars(g.n()));
  REQUIRE(r.sim.quiescent());
  CHECK(r.names == oracle_msf(g));
  CHECK(r.names.size() == 4);
}

TEST_CASE("every Low-degree message is acknowledged once", "[msf]") {
  auto g = path_graph(2, 2, 1);
  auto r = run_msf(g, 1, no_stars(2));
  REQUIRE(r.sim.quiescent());
  CHECK(count(r.sim, Kind::LowDegree) == 2);
  CHECK(count(r.sim, Kind::LowDegreeAck) == 2);
  CHECK(r.names.size() == 1);
}

TEST_CASE("the highest star ID absorbs every other fragment", "[msf]") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto g = gnp_graph(24, 0.3, 2, seed);
    auto r = run_msf(g, seed, all_stars_high(g.n()), kPolicies[seed % 4]);
    REQUIRE(r.sim.quiescent());
    std::uint64_t top = 0;
    for (NodeIndex x = 0; x < g.n(); ++x) top = std::max(top, g.id(x).value);
    for (auto& s : r.nodes) CHECK(s.vid == top);
    CHECK(r.stats.halted_leaders == g.n() - 1);
    CHECK(r.names == oracle_msf(g));
    CHECK(r.violations == "");
  }
}

TEST_CASE("mixed roles match the oracle", "[msf]") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto g = gnp_graph(48, 0.15, 2, seed);
    for (double threshold : {3.0, 6.0, 10.0}) {
      auto cfg = mixed_roles(g, seed, 0.15, threshold);
      auto r = run_msf(g, seed, cfg, kPolicies[(seed + std::uint64_t(threshold)) % 4]);
      REQUIRE(r.sim.quiescent());
      CHECK(r.names == oracle_msf(g));
      CHECK(r.violations == "");
    }
  }
}

TEST_CASE("small mixed graphs under every policy", "[msf]") {
  for (std::size_t n : {6, 8, 12, 16}) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto g = gnp_graph(n, 0.3, 2, seed);
      auto cfg = mixed_roles(g, seed, 0.2, 4);
      for (auto p : kPolicies) {
        auto r = run_msf(g, seed, cfg, p);
        REQUIRE(r.sim.quiescent());
        CHECK(r.names == oracle_msf(g));
      CHECK(r.violations == "");
      }
    }
  }
}

TEST_CASE("default roles on standard families", "[msf]") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    MsfConfig cfg;
    cfg.roles.seed = seed;
    std::vector<Graph> gs;
    gs.push_back(gnp_graph(64, 0.2, 2, seed));
    gs.push_back(disconnected_graph({20, 12, 1, 30}, 0.3, 2, seed));
    gs.push_back(lollipop_graph(48, 2, seed));
    gs.push_back(complete_graph(32, 2, seed));
    for (auto& g : gs) {
      auto r = run_msf(g, seed, cfg, kPolicies[seed % 4]);
      REQUIRE(r.sim.quiescent());
      CHECK(r.names == oracle_msf(g));
      CHECK(r.violations == "");
    }
  }
}
