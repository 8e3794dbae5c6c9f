#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kt1/roles.hpp"
#include "kt1/simnet.hpp"
#include "kt1/treeops.hpp"

namespace kt1 {

enum class SearchOutcome : std::uint8_t { Terminal, HighFound, FewEdges, Waited };

const char* outcome_name(SearchOutcome o);

struct SearchRecord {
  std::uint64_t phase = 0;
  SearchOutcome outcome = SearchOutcome::Terminal;
  unsigned samples = 0;
  unsigned found = 0;  // |A|
  std::uint64_t estimate = 0;
};

// Search-and-sampling bookkeeping shared by the single- and multi-leader protocols.
class SearchLoop {
 public:
  SearchLoop(unsigned clogn, bool zero_exit) : clogn_(clogn), zero_exit_(zero_exit) {}

  void begin(std::uint64_t phase);
  // Folds one FindAny result; true when sampling should stop.
  bool add(const OpResult& r);
  // Outcome once sampling stopped (Waited means: estimate the cut and wait).
  SearchOutcome outcome() const;
  SearchRecord& record() { return cur_; }

 private:
  unsigned clogn_;
  bool zero_exit_;
  SearchRecord cur_;
  bool any_high_ = false;
  unsigned zero_streak_ = 0;
};

struct FindStConfig {
  unsigned c = 2;
  std::optional<NodeIndex> leader;  // default: node with the largest ID
  RoleOptions roles;
  bool zero_exit = true;  // end Search after 2c log n consecutive all-zero vectors
  TreeOpsConfig ops;
};

// Per-slot flags over adj(x).
enum SlotFlag : std::uint8_t { kFoundL = 1, kFoundO = 2, kTNeighbor = 4 };

class FindSt : public Protocol, public TreeHost {
 public:
  struct Node {
    bool in_tree = false;
    NodeIndex parent = kNoNode;
    std::vector<NodeIndex> children;
    std::vector<std::uint8_t> flags;
    bool star_seen = false;
    bool waiting = false;  // joined, high-degree non-star, no Star yet
    bool expanding = false;
    std::uint32_t pending = 0;
    std::vector<NodeIndex> new_children;
    std::uint64_t phase_seen = 0;
  };

  FindSt(const Graph& g, std::uint64_t seed, FindStConfig cfg = {});

  void on_wake(NodeIndex self, Outbox& out) override;
  void on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) override;
  bool is_terminal(NodeIndex self) const override;

  const Graph& graph() const override { return g_; }
  TreeView tree(NodeIndex x) const override;
  void send(NodeIndex from, NodeIndex to, const Message& m) override;
  bool on_chosen_edge(NodeIndex x, EdgeIndex e, Purpose p) override;
  void on_leader_result(NodeIndex leader, const OpResult& r) override;

  // Called at the leader each time an Expand completes (global-view hook).
  std::function<void(const FindSt&, std::uint64_t phase)> on_expand_done;

  NodeIndex leader() const { return leader_; }
  const Roles& roles() const { return roles_; }
  const Node& node(NodeIndex x) const { return nodes_[x]; }
  bool finished() const { return stage_ == Stage::Done; }
  std::uint64_t phases() const { return phase_; }
  const std::vector<SearchRecord>& searches() const { return searches_; }
  std::size_t events(NodeIndex x) const;
  const ThresholdDetector& detector() const { return detector_; }

  // Tree edges from parent pointers.
  std::vector<EdgeIndex> tree_edges() const;

 private:
  enum class Stage : std::uint8_t { Idle, Expanding, Searching, Approx, Waiting, Done };

  void start_phase();
  void forward(NodeIndex x, NodeIndex skip, bool all_neighbors);
  void expand_done(NodeIndex x);
  void on_expand(NodeIndex x, NodeIndex from, const Message& m);
  void set_flag(NodeIndex x, NodeIndex y, std::uint8_t f);
  bool has_flag(NodeIndex x, NodeIndex y, std::uint8_t f) const;
  void finish_search();
  void next_sample();

  const Graph& g_;
  FindStConfig cfg_;
  Roles roles_;
  NodeIndex leader_;
  unsigned clogn_;
  std::vector<Node> nodes_;
  TreeOps ops_;
  ThresholdDetector detector_;
  Outbox* out_ = nullptr;

  Stage stage_ = Stage::Idle;
  std::uint64_t phase_ = 0;
  SearchLoop search_;
  std::vector<SearchRecord> searches_;
};

}  // namespace kt1
