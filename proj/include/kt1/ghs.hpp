#pragma once

#include <deque>
#include <functional>
#include <map>
#include <vector>

#include "kt1/graph.hpp"
#include "kt1/message.hpp"

namespace kt1 {

// Textbook GHS over the simulator's non-FIFO links. Every GHS message carries a
// per-link sequence number in its last field; receivers restore link order.
class Ghs {
 public:
  using SendFn = std::function<void(NodeIndex from, NodeIndex to, const Message& m)>;

  enum class State : std::uint8_t { Sleeping, Find, Found };
  enum EdgeState : std::uint8_t { kBasic = 0, kBranch = 1, kRejected = 2 };

  struct Cost {
    bool inf = true;
    Weight w;
    auto operator<=>(const Cost& o) const {
      if (inf != o.inf) return inf ? std::strong_ordering::greater : std::strong_ordering::less;
      if (inf) return std::strong_ordering::equal;
      return w <=> o.w;
    }
    bool operator==(const Cost& o) const { return (*this <=> o) == 0; }
  };

  struct Node {
    State state = State::Sleeping;
    std::uint64_t level = 0;
    Weight frag;
    std::vector<std::uint8_t> se;
    std::size_t in_branch = kNone;
    std::size_t best_edge = kNone;
    std::size_t test_edge = kNone;
    Cost best;
    unsigned find_count = 0;
    bool halted = false;
    bool abandoned = false;
    std::vector<std::uint64_t> send_seq;
    std::vector<std::uint64_t> recv_seq;
    std::vector<std::map<std::uint64_t, Message>> early;
    std::deque<std::pair<std::size_t, Message>> deferred;
  };

  static constexpr std::size_t kNone = ~std::size_t{0};

  Ghs(const Graph& g, SendFn send);

  void wake(NodeIndex x);
  void on_message(NodeIndex x, NodeIndex from, const Message& m);
  // x joined a star fragment: it stops answering and sending.
  void abandon(NodeIndex x) { nodes_[x].abandoned = true; }

  bool running(NodeIndex x) const {
    return nodes_[x].state != State::Sleeping && !nodes_[x].halted && !nodes_[x].abandoned;
  }
  bool halted(NodeIndex x) const { return nodes_[x].halted; }
  const Node& node(NodeIndex x) const { return nodes_[x]; }
  std::vector<EdgeIndex> branches(NodeIndex x) const;

 private:
  Weight weight(NodeIndex x, std::size_t slot) const;
  void send(NodeIndex x, std::size_t slot, Kind k, std::initializer_list<std::uint64_t> fields);
  void deliver(NodeIndex x, std::size_t slot, const Message& m);
  bool handle(NodeIndex x, std::size_t j, const Message& m);
  void wakeup(NodeIndex x);
  void test(NodeIndex x);
  void report(NodeIndex x);
  void change_root(NodeIndex x);
  void halt(NodeIndex x, std::size_t except);

  const Graph& g_;
  SendFn send_;
  std::vector<Node> nodes_;
};

}  // namespace kt1
