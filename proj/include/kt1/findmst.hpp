#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "kt1/simnet.hpp"
#include "kt1/treeops.hpp"

namespace kt1 {

// Static control tree (a spanning tree per component). Roots have parent kNoNode.
struct ControlTree {
  std::vector<NodeIndex> parent;
  std::vector<std::vector<NodeIndex>> children;

  static ControlTree from_parents(const std::vector<NodeIndex>& parent);
  // BFS tree of the component of each root in `roots`, over graph edges.
  static ControlTree bfs(const Graph& g, const std::vector<NodeIndex>& roots);
  bool is_root(NodeIndex x) const { return parent[x] == kNoNode; }
};

struct FindMstConfig {
  unsigned c = 2;
  TreeOpsConfig ops;
  bool autostart = true;  // control roots start at wake-up; otherwise call start()
};

class FindMst : public Protocol, public TreeHost {
 public:
  struct Node {
    // fragment
    std::uint64_t frag = 0;
    std::uint64_t rank = 0;
    NodeIndex parent = kNoNode;
    std::vector<NodeIndex> children;
    NodeIndex connect_to = kNoNode;
    std::vector<std::pair<NodeIndex, Message>> held;      // Connects awaiting a rank increase
    std::vector<std::pair<NodeIndex, Message>> deferred;  // merge traffic during a wave
    bool terminated = false;
    // control tree
    std::uint32_t rank_pending = 0;
    std::uint64_t min_acc = 0;
    bool proceeded = false;
    std::uint64_t min_rank = 0;
    std::uint32_t done_pending = 0;
    bool done_sent = false;
  };

  FindMst(const Graph& g, ControlTree control, std::uint64_t seed, FindMstConfig cfg = {});

  void on_wake(NodeIndex self, Outbox& out) override;
  void on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) override;
  bool is_terminal(NodeIndex self) const override { return nodes_[self].terminated; }

  const Graph& graph() const override { return g_; }
  TreeView tree(NodeIndex x) const override;
  void send(NodeIndex from, NodeIndex to, const Message& m) override;
  bool on_chosen_edge(NodeIndex x, EdgeIndex e, Purpose p) override;
  void on_leader_result(NodeIndex leader, const OpResult& r) override;
  void on_wave_end(NodeIndex x) override;

  // Called at a control root whenever a merging phase completes (global-view hook),
  // and once more with final = true when its component terminates.
  std::function<void(const FindMst&, NodeIndex root, std::uint64_t phase, bool final)> on_phase;

  // Deferred start: a node's control links are set when it enters the protocol.
  void set_control(NodeIndex x, NodeIndex parent, std::vector<NodeIndex> children);
  void start(NodeIndex root, Outbox& out);

  const Node& node(NodeIndex x) const { return nodes_[x]; }
  const ControlTree& control() const { return control_; }
  // Completed merging phases at the root of x's component.
  std::uint64_t phases(NodeIndex root) const { return phases_[root]; }
  std::uint64_t max_phases() const;
  bool finished() const;

  // Fragment tree edges from parent pointers.
  std::vector<EdgeIndex> tree_edges() const;

 private:
  void start_phase(NodeIndex root);
  void on_rank_request(NodeIndex x);
  void rank_report(NodeIndex x);
  void on_proceed(NodeIndex x, std::uint64_t min_rank);
  void check_done(NodeIndex x);

  void on_merge(NodeIndex x, NodeIndex from, const Message& m);
  void accept(NodeIndex x, NodeIndex y);
  void raise_rank(NodeIndex x, NodeIndex via, std::uint64_t frag, std::uint64_t rank);
  void reconsider(NodeIndex x);
  void terminate(NodeIndex x);

  const Graph& g_;
  FindMstConfig cfg_;
  ControlTree control_;
  std::vector<Node> nodes_;
  std::vector<std::uint64_t> phases_;
  TreeOps ops_;
  Outbox* out_ = nullptr;
};

}  // namespace kt1
