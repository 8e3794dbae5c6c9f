#include <map>

#include "catch_amalgamated.hpp"
#include "kt1/generators.hpp"
#include "kt1/simnet.hpp"

using namespace kt1;

namespace {

struct Silent : Protocol {
  void on_wake(NodeIndex, Outbox&) override {}
  void on_message(NodeIndex, NodeIndex, const Message&, Outbox&) override {}
  bool is_terminal(NodeIndex) const override { return true; }
};

struct Handshake : Protocol {
  explicit Handshake(const Graph& g) : g(g), got(g.n(), 0) {}
  void on_wake(NodeIndex self, Outbox& out) override {
    for (auto inc : g.adj(self)) out.send(inc.neighbor, Message::make(Kind::LowDegree));
  }
  void on_message(NodeIndex self, NodeIndex, const Message&, Outbox&) override { ++got[self]; }
  bool is_terminal(NodeIndex self) const override { return got[self] == g.degree(self); }
  const Graph& g;
  std::vector<std::size_t> got;
};

// Sends a numbered burst over one edge and records the arrival order.
struct Burst : Protocol {
  void on_wake(NodeIndex self, Outbox& out) override {
    if (self == 0)
      for (std::uint64_t i = 0; i < 32; ++i) out.send(1, Message::make(Kind::NameUp, {0, i}));
  }
  void on_message(NodeIndex, NodeIndex, const Message& m, Outbox&) override {
    order.push_back(m.f[1]);
  }
  bool is_terminal(NodeIndex) const override { return true; }
  std::vector<std::uint64_t> order;
};

struct PingPong : Protocol {
  void on_wake(NodeIndex self, Outbox& out) override {
    if (self == 0) out.send(1, Message::make(Kind::Done));
  }
  void on_message(NodeIndex, NodeIndex from, const Message& m, Outbox& out) override {
    out.send(from, m);
  }
  bool is_terminal(NodeIndex) const override { return false; }
};

struct Stray : Protocol {
  void on_wake(NodeIndex self, Outbox& out) override {
    if (self == 0) out.send(2, Message::make(Kind::Done));
  }
  void on_message(NodeIndex, NodeIndex, const Message&, Outbox&) override {}
  bool is_terminal(NodeIndex) const override { return true; }
};

bool in_order(const std::vector<std::uint64_t>& v) { return std::is_sorted(v.begin(), v.end()); }

}  // namespace

TEST_CASE("empty protocol sends nothing", "[simnet]") {
  auto g = complete_graph(6, 2, 1);
  Simulator sim(g, {});
  Silent p;
  auto r = sim.run(p);
  CHECK(r.metrics.total == 0);
  CHECK(r.quiescent());
}

TEST_CASE("one message per direction totals 2m", "[simnet]") {
  auto g = gnp_graph(20, 0.3, 2, 4);
  for (auto policy : {"uniform-random", "fifo-per-edge", "reorder-adversary", "region-stall"}) {
    SimOptions o;
    o.policy = DelayPolicy::parse(policy);
    o.policy.stalled = {0, 1, 2};
    Simulator sim(g, o);
    Handshake p(g);
    auto r = sim.run(p);
    CHECK(r.metrics.total == 2 * g.m());
    CHECK(r.metrics.edge_sum() == r.metrics.total);
    CHECK(r.deliveries == r.metrics.total);
    CHECK(r.quiescent());
    for (auto c : r.metrics.per_edge) CHECK(c == 2);
  }
}

TEST_CASE("same seed gives identical trace", "[simnet]") {
  auto g = gnp_graph(16, 0.4, 2, 2);
  auto run = [&](std::uint64_t seed) {
    SimOptions o;
    o.seed = seed;
    o.record_trace = true;
    o.policy = DelayPolicy::parse("reorder-adversary");
    Simulator sim(g, o);
    Handshake p(g);
    auto r = sim.run(p);
    std::vector<std::tuple<std::uint64_t, NodeIndex, NodeIndex>> t;
    for (auto& e : r.trace) t.emplace_back(e.seq, e.src, e.dst);
    return t;
  };
  CHECK(run(5) == run(5));
  CHECK(run(5) != run(6));
}

TEST_CASE("reorder adversary violates per-edge order, fifo does not", "[simnet]") {
  auto g = path_graph(2, 2, 1);
  bool reordered = false;
  for (std::uint64_t seed = 1; seed <= 20 && !reordered; ++seed) {
    SimOptions o;
    o.seed = seed;
    o.policy = DelayPolicy::parse("reorder-adversary");
    Simulator sim(g, o);
    Burst p;
    sim.run(p);
    reordered = !in_order(p.order);
  }
  CHECK(reordered);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimOptions o;
    o.seed = seed;
    o.policy = DelayPolicy::parse("fifo-per-edge");
    Simulator sim(g, o);
    Burst p;
    sim.run(p);
    CHECK(in_order(p.order));
  }
}

TEST_CASE("model violations", "[simnet]") {
  auto g = path_graph(3, 2, 1);
  Simulator sim(g, {});
  Stray s;
  CHECK_THROWS_AS(sim.run(s), ModelViolation);

  SimOptions o;
  o.event_cap = 100;
  Simulator sim2(g, o);
  PingPong pp;
  CHECK_THROWS_AS(sim2.run(pp), LivelockError);
}

TEST_CASE("faults drop or duplicate a chosen send", "[simnet]") {
  auto g = path_graph(4, 2, 1);
  SimOptions o;
  o.faults = {Fault{Kind::LowDegree, 2, FaultAction::Drop}, Fault{Kind::LowDegree, 4, FaultAction::Duplicate}};
  Simulator sim(g, o);
  Handshake p(g);
  auto r = sim.run(p);
  CHECK(r.metrics.total == 2 * g.m());  // one lost, one doubled
}

TEST_CASE("congest budget", "[simnet][codec]") {
  CHECK(congest_budget(256, 2) == 128);
  CHECK(congest_budget(2, 2) == 32);
}

namespace {

Message max_message(Kind k, const FieldWidths& w) {
  Message m;
  m.kind = k;
  auto fields = layout(k);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    unsigned width = w.width(fields[i]);
    m.f[i] = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  }
  return m;
}

}  // namespace

TEST_CASE("every message kind fits the budget at its widest", "[simnet][codec]") {
  for (std::uint64_t n : {2, 3, 4, 16, 100, 256, 1024, 4096, 32768}) {
    auto w = FieldWidths::for_graph(n, 2);
    for (std::size_t k = 0; k < kKindCount; ++k) {
      auto m = max_message(static_cast<Kind>(k), w);
      INFO("n=" << n << " kind=" << kind_name(m.kind));
      CHECK(encoded_bits(m, w) <= congest_budget(n, 2));
    }
  }
}

TEST_CASE("codec round trip and range checks", "[simnet][codec]") {
  auto w = FieldWidths::for_graph(256, 2);
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    auto k = static_cast<Kind>(rng() % kKindCount);
    Message m;
    m.kind = k;
    auto fields = layout(k);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      unsigned width = w.width(fields[i]);
      m.f[i] = rng() & ((std::uint64_t{1} << width) - 1);
    }
    auto bytes = encode(m, w);
    CHECK(bytes.size() * 8 >= encoded_bits(m, w));
    auto back = decode(bytes, w);
    CHECK(back.kind == m.kind);
    CHECK(back.f == m.f);
  }
  auto too_big = Message::make(Kind::AcceptID, {std::uint64_t{1} << w.id});
  CHECK_THROWS_AS(encoded_bits(too_big, w), CongestViolation);
}
