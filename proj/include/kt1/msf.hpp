#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "kt1/findmst.hpp"
#include "kt1/findst.hpp"
#include "kt1/ghs.hpp"
#include "kt1/roles.hpp"
#include "kt1/simnet.hpp"
#include "kt1/treeops.hpp"

namespace kt1 {

struct MsfConfig {
  unsigned c = 2;
  RoleOptions roles;
  bool zero_exit = true;
  TreeOpsConfig ops;
};

// Slot flag on top of kFoundL / kFoundO: the edge is on Reject(x).
inline constexpr std::uint8_t kReject = 8;

// Minimum spanning forest without a preselected leader: stars grow fragments with
// ID-labelled expansions, low-degree non-stars run GHS, and each surviving star
// hands its spanning tree to FindMST.
class Msf : public Protocol, public TreeHost {
 public:
  enum class Stage : std::uint8_t { Idle, Expanding, Searching, Approx, Waiting, Done, Halted };

  struct Node {
    std::uint64_t vid = 0;
    NodeIndex parent = kNoNode;
    std::vector<NodeIndex> children;
    std::vector<std::uint8_t> flags;
    std::vector<bool> acked;                   // our Low-degree on this edge was acknowledged
    std::vector<std::vector<Message>> queued;  // sends waiting for that acknowledgment
    std::vector<std::uint64_t> rejected_ids;   // sorted
    bool star_seen = false;
    bool waiting = false;  // joined as a high-degree non-star, no Star yet
    bool expanding = false;
    std::uint32_t pending = 0;
    std::vector<NodeIndex> new_children;
    bool rejected_below = false;
    std::uint64_t phase_seen = 0;
    std::deque<std::pair<NodeIndex, Message>> held;
    bool in_mst = false;
    // star leaders only
    Stage stage = Stage::Idle;
    std::uint64_t phase = 0;
  };

  struct Stats {
    std::uint64_t expansions = 0;              // leader expansions started
    std::uint64_t successful_expansions = 0;   // completed without a lower-ID rejection
    std::uint64_t reject_forwards = 0;         // Expand sent over a Reject-list edge
    std::uint64_t halted_leaders = 0;
  };

  Msf(const Graph& g, std::uint64_t seed, MsfConfig cfg = {});

  void on_wake(NodeIndex self, Outbox& out) override;
  void on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) override;
  bool is_terminal(NodeIndex self) const override;

  const Graph& graph() const override { return g_; }
  TreeView tree(NodeIndex x) const override;
  void send(NodeIndex from, NodeIndex to, const Message& m) override;
  bool on_chosen_edge(NodeIndex x, EdgeIndex e, Purpose p) override;
  void on_leader_result(NodeIndex leader, const OpResult& r) override;

  // Global-view hooks.
  std::function<void(const Msf&, NodeIndex leader, std::uint64_t phase)> on_expand_done;
  std::function<void(const Msf&, NodeIndex x, std::uint64_t old_vid)> on_join;
  std::function<void(const Msf&, NodeIndex x, NodeIndex y)> on_event;

  const Roles& roles() const { return roles_; }
  const Node& node(NodeIndex x) const { return nodes_[x]; }
  const Ghs& ghs() const { return ghs_; }
  const FindMst& mst() const { return mst_; }
  FindMst& mst() { return mst_; }
  const Stats& stats() const { return stats_; }
  const std::vector<SearchRecord>& searches() const { return searches_; }
  std::size_t events(NodeIndex x) const;

  // Forest edges each node reports: FindMST parents and GHS branches.
  std::vector<EdgeIndex> forest_edges() const;

 private:
  bool busy(NodeIndex x) const { return nodes_[x].expanding || nodes_[x].waiting; }
  bool leader_active(NodeIndex x) const;
  void set_flag(NodeIndex x, NodeIndex y, std::uint8_t f);

  void on_expand(NodeIndex x, NodeIndex t, const Message& m);
  void join(NodeIndex x, NodeIndex t, std::uint64_t tid, std::uint64_t phase);
  void forward(NodeIndex x, std::vector<bool> targets, NodeIndex skip);
  std::vector<bool> lists(NodeIndex x, bool tree_links) const;
  void on_reply(NodeIndex x, NodeIndex from, const Message& m);
  void expand_done(NodeIndex x);
  void drain_held(NodeIndex x);
  void halt_leader(NodeIndex x);

  void start_phase(NodeIndex x);
  void finish_search(NodeIndex x);
  void arm_events(NodeIndex x);
  void start_mst(NodeIndex x);
  void enter_mst(NodeIndex x);

  const Graph& g_;
  MsfConfig cfg_;
  Roles roles_;
  unsigned clogn_;
  std::vector<Node> nodes_;
  TreeOps ops_;
  ThresholdDetector detector_;
  Ghs ghs_;
  FindMst mst_;
  std::vector<SearchLoop> search_;
  std::vector<SearchRecord> searches_;
  Stats stats_;
  Outbox* out_ = nullptr;
};

}  // namespace kt1
