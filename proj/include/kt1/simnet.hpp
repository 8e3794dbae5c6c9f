#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <string>
#include <vector>

#include "kt1/graph.hpp"
#include "kt1/message.hpp"
#include "kt1/rng.hpp"

namespace kt1 {

class ModelViolation : public Error {
 public:
  using Error::Error;
};

class LivelockError : public Error {
 public:
  using Error::Error;
};

enum class DelayKind { UniformRandom, FifoPerEdge, ReorderAdversary, RegionStall };

struct DelayPolicy {
  DelayKind kind = DelayKind::UniformRandom;
  std::uint64_t max_delay = 16;
  double tail_alpha = 1.1;              // reorder-adversary Pareto exponent
  std::uint64_t tail_cap = 1u << 20;
  std::vector<NodeIndex> stalled;       // region-stall targets
  std::uint64_t stall_factor = 64;

  static DelayPolicy parse(const std::string& name);
  std::string name() const;
};

struct Metrics {
  std::vector<std::uint64_t> per_edge;  // by EdgeIndex
  std::array<std::uint64_t, kKindCount> per_kind{};
  std::uint64_t total = 0;
  unsigned max_payload_bits = 0;

  std::uint64_t edge_sum() const;
  Metrics& operator+=(const Metrics& other);
};

struct TraceEntry {
  std::uint64_t seq;
  NodeIndex src;
  NodeIndex dst;
  Kind kind;
};

void write_trace(std::ostream& os, const Graph& g, const std::vector<TraceEntry>& trace);

enum class FaultAction { Drop, Duplicate };

// Applied to the occurrence-th send (1-based) of a message kind.
struct Fault {
  Kind kind;
  std::uint64_t occurrence = 1;
  FaultAction action = FaultAction::Drop;
};

class Outbox;

class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual void on_wake(NodeIndex self, Outbox& out) = 0;
  virtual void on_message(NodeIndex self, NodeIndex from, const Message& msg, Outbox& out) = 0;
  virtual bool is_terminal(NodeIndex self) const = 0;
};

struct SimOptions {
  DelayPolicy policy;
  std::uint64_t seed = 1;
  unsigned c = 2;
  std::uint64_t event_cap = 0;  // 0: 10 n^3
  bool record_trace = false;
  std::vector<Fault> faults;
};

struct SimResult {
  Metrics metrics;
  std::uint64_t deliveries = 0;
  std::uint64_t final_time = 0;
  std::vector<NodeIndex> non_terminal;
  std::vector<TraceEntry> trace;

  bool quiescent() const { return non_terminal.empty(); }
};

class Simulator {
 public:
  Simulator(const Graph& g, SimOptions options);

  SimResult run(Protocol& protocol);

  const Graph& graph() const { return g_; }
  const FieldWidths& widths() const { return widths_; }
  std::uint64_t budget() const { return budget_; }

  using SendObserver = std::function<void(NodeIndex src, NodeIndex dst, const Message&)>;
  void set_send_observer(SendObserver obs) { observer_ = std::move(obs); }

 private:
  friend class Outbox;

  struct Envelope {
    std::uint64_t time;
    std::uint64_t seq;
    NodeIndex src;
    NodeIndex dst;
    EdgeIndex edge;
    Message msg;
  };
  struct Later {
    bool operator()(const Envelope& a, const Envelope& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void send(NodeIndex src, NodeIndex dst, const Message& msg);
  std::uint64_t delay(NodeIndex src, NodeIndex dst, EdgeIndex e);

  const Graph& g_;
  SimOptions opt_;
  FieldWidths widths_;
  std::uint64_t budget_;
  Rng delay_rng_;
  std::priority_queue<Envelope, std::vector<Envelope>, Later> queue_;
  std::vector<std::uint64_t> fifo_last_;
  std::vector<std::uint8_t> stalled_;
  std::array<std::uint64_t, kKindCount> sent_by_kind_{};
  std::uint64_t now_ = 0;
  std::uint64_t next_seq_ = 0;
  Metrics metrics_;
  SendObserver observer_;
};

class Outbox {
 public:
  Outbox(Simulator& sim, NodeIndex self) : sim_(&sim), self_(self) {}
  void send(NodeIndex to, const Message& msg) { sim_->send(self_, to, msg); }
  NodeIndex self() const { return self_; }

 private:
  Simulator* sim_;
  NodeIndex self_;
};

}  // namespace kt1
