#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "kt1/graph.hpp"
#include "kt1/message.hpp"
#include "kt1/sketch.hpp"

namespace kt1 {

enum class Purpose : std::uint8_t { Sample = 0, Connect = 1 };
enum class SampleClass : std::uint8_t { None = 0, Low = 1, High = 2 };

// What a node knows about its current fragment tree.
struct TreeView {
  NodeIndex parent = kNoNode;
  std::span<const NodeIndex> children;
  std::uint64_t tag = 0;
};

enum class OpKind : std::uint8_t { Query, FindAny, FindMin, ApproxCut };

struct OpResult {
  OpKind op = OpKind::Query;
  bool found = false;
  bool zero_vector = false;  // all-zero parity vector: no passing cut edge for this hash
  EdgeName edge;
  Weight weight;
  SampleClass cls = SampleClass::None;
  std::uint64_t estimate = 0;
  std::uint32_t rounds = 0;
};

class TreeHost {
 public:
  virtual ~TreeHost() = default;
  virtual const Graph& graph() const = 0;
  virtual TreeView tree(NodeIndex x) const = 0;
  virtual void send(NodeIndex from, NodeIndex to, const Message& m) = 0;
  // x is the in-fragment endpoint of the edge chosen by its leader. Return true
  // when x reports its class later through TreeOps::resolve_result.
  virtual bool on_chosen_edge(NodeIndex x, EdgeIndex e, Purpose p) = 0;
  virtual void on_leader_result(NodeIndex leader, const OpResult& r) = 0;
  // x finished its part of a wave (sent its up message, or the leader got the fold).
  virtual void on_wave_end(NodeIndex) {}
};

struct TreeOpsConfig {
  unsigned c = 2;
  unsigned findmin_patience = 4;        // R = patience * ceil(log2 n) consecutive failed rounds
  double approx_threshold_factor = 1.5;  // X_i > factor * c log n / 16
};

class TreeOps {
 public:
  TreeOps(TreeHost& host, std::size_t n, std::uint64_t seed, TreeOpsConfig cfg = {});

  static bool handles(Kind k);
  void on_message(NodeIndex self, NodeIndex from, const Message& m);

  // Fragment changed under x: forget any wave and query state.
  void reset_node(NodeIndex x);
  void resolve_result(NodeIndex x, SampleClass cls);

  // Leader operations; each reports once through TreeHost::on_leader_result.
  void query(NodeIndex leader, bool reset_exclusions);
  void find_any(NodeIndex leader, Purpose purpose);
  void find_min(NodeIndex leader);
  void approx_cut(NodeIndex leader);
  bool busy(NodeIndex leader) const { return drivers_[leader].op != Op::Idle; }
  bool wave_active(NodeIndex x) const { return nodes_[x].wave.active; }

  // Does the edge pass x's current query (exclusions and cap)?
  bool passes(NodeIndex x, EdgeIndex e) const;
  const std::vector<EdgeIndex>& exclusions(NodeIndex x) const { return nodes_[x].excluded; }

  unsigned rounds_per_approx() const { return approx_hashes_; }
  unsigned findmin_patience_rounds() const { return findmin_limit_; }

 private:
  enum class Op : std::uint8_t { Idle, Query, FindAny, FindMin, ApproxCut };
  enum class Step : std::uint8_t { Query, Hash, Index, Verify, Result };

  struct Wave {
    bool active = false;
    Kind up = Kind::QueryUp;
    std::uint32_t pending = 0;
    std::uint64_t acc0 = 0;
    std::uint64_t acc1 = 0;
  };

  struct NodeState {
    Wave wave;
    std::vector<EdgeIndex> excluded;  // sorted
    bool has_cap = false;
    Weight cap;  // strict: weight < cap
    HashFn hash;
    bool filtered = true;
  };

  struct Driver {
    Op op = Op::Idle;
    Step step = Step::Query;
    Purpose purpose = Purpose::Sample;
    HashFn hash;
    EdgeName candidate;
    Weight candidate_weight;
    std::optional<std::pair<EdgeName, Weight>> best;
    unsigned fails = 0;
    unsigned rounds = 0;
    unsigned hashes_left = 0;
    std::vector<ParityVector> vectors;
  };

  void start_wave(NodeIndex x, const Message& down);
  void contribute(NodeIndex x, const Message& down);
  void finish_if_done(NodeIndex x);
  void fold(Wave& w, const Message& up);
  Message up_message(NodeIndex x) const;
  void wave_done(NodeIndex leader, Kind up, std::uint64_t acc0, std::uint64_t acc1);

  void start_round(NodeIndex leader, bool filtered);
  void round_failed(NodeIndex leader, bool zero);
  void round_succeeded(NodeIndex leader);
  void send_query(NodeIndex leader, bool reset, const std::optional<Weight>& cap);
  void finish(NodeIndex leader, OpResult r);
  std::optional<EdgeIndex> incident_by_name(NodeIndex x, std::uint64_t name) const;

  TreeHost& host_;
  const Graph& g_;
  TreeOpsConfig cfg_;
  SketchParams params_;
  unsigned approx_hashes_;
  unsigned findmin_limit_;
  std::vector<NodeState> nodes_;
  std::vector<Driver> drivers_;
  std::vector<Rng> rngs_;
};

// ThresholdDetection: each event flips a coin with probability min(c log n / r, 1);
// heads travel up the fragment tree as Trigger messages tagged with the phase.
class ThresholdDetector {
 public:
  ThresholdDetector(TreeHost& host, std::size_t n, std::uint64_t seed, unsigned c);

  static double coin_probability(std::size_t n, unsigned c, std::uint64_t r);
  static unsigned leader_threshold(std::size_t n, unsigned c);

  // Leader: arm itself and broadcast SendTrigger to its children.
  void start(NodeIndex leader, std::uint64_t r, std::uint64_t phase, std::size_t events);
  // Non-leader accepting a SendTrigger: arm and pass it on to the children.
  void relay(NodeIndex x, const Message& send_trigger, std::size_t events);
  void disarm(NodeIndex x);
  void add_events(NodeIndex x, std::size_t events);
  bool armed(NodeIndex x) const { return nodes_[x].armed; }
  std::uint64_t armed_phase(NodeIndex x) const { return nodes_[x].phase; }

  void on_trigger(NodeIndex x, NodeIndex from, const Message& m);

  // Leader-side bookkeeping, read by the inspector.
  std::uint64_t received(NodeIndex leader) const { return nodes_[leader].received; }
  std::uint64_t generated_total(std::uint64_t tag, std::uint64_t phase) const;
  bool fired(NodeIndex leader) const { return nodes_[leader].fired; }

  std::function<void(NodeIndex leader, std::uint64_t phase)> on_fire;

 private:
  struct NodeState {
    bool armed = false;
    bool fired = false;
    std::uint64_t phase = 0;
    double p = 1.0;
    std::uint64_t received = 0;
  };
  void arm(NodeIndex x, std::uint64_t r, std::uint64_t phase, std::size_t events);
  void flip(NodeIndex x, std::size_t events);
  void deliver(NodeIndex x);

  TreeHost& host_;
  std::size_t n_;
  unsigned c_;
  unsigned threshold_;
  std::vector<NodeState> nodes_;
  std::vector<Rng> rngs_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> generated_;  // (tag, phase)
};

}  // namespace kt1
