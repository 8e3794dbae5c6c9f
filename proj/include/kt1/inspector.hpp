#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "kt1/findmst.hpp"
#include "kt1/findst.hpp"
#include "kt1/msf.hpp"
#include "kt1/simnet.hpp"

namespace kt1 {

struct Violation {
  std::string check;
  std::string detail;
};

// Lemma-level phase classification for FindST: A = a high-degree node joined,
// B = outgoing edges to low-degree nodes fell to at most 3/4.
enum class PhaseKind : std::uint8_t { First, A, B, None };

const char* phase_kind_name(PhaseKind k);

struct PhaseEntry {
  std::uint64_t phase = 0;
  std::size_t tree_size = 0;
  std::size_t outgoing_low = 0;
  std::size_t high_in_tree = 0;
  PhaseKind kind = PhaseKind::First;
  double ratio = -1;  // outgoing_low / previous outgoing_low, when defined
};

enum class CheckLevel : std::uint8_t { Off, Phase, Full };

CheckLevel parse_check_level(const std::string& s);

// Global-view checker. Reads protocol state the nodes themselves cannot see.
class Inspector {
 public:
  explicit Inspector(CheckLevel level = CheckLevel::Full) : level_(level) {}

  // Counts protocol sends per link; pair with wrap() to count deliveries.
  void watch(Simulator& sim);
  Protocol& wrap(Protocol& inner);

  void attach(FindSt& st);
  void finish(const FindSt& st, const SimResult& r);
  void attach(FindMst& mst);
  void finish(const FindMst& mst, const SimResult& r);
  // Call before watch() so sends are checked against the MSF roles.
  void attach(Msf& msf);
  void finish(const Msf& msf, const SimResult& r);

  // Per link: Trigger deliveries never exceed Trigger sends.
  void check_conservation();

  void add(std::string check, std::string detail);
  const std::vector<Violation>& violations() const { return violations_; }
  const std::vector<PhaseEntry>& phase_log() const { return log_; }
  CheckLevel level() const { return level_; }

  // Checks usable on any rooted forest given as parent/children arrays.
  static void check_forest(const Graph& g, const std::vector<NodeIndex>& parent,
                           const std::vector<std::vector<NodeIndex>>& children,
                           const std::vector<bool>& member, std::vector<Violation>& out,
                           const std::string& label);

 private:
  class Tap : public Protocol {
   public:
    Tap(Inspector& owner, Protocol& inner) : owner_(owner), inner_(inner) {}
    void on_wake(NodeIndex self, Outbox& out) override { inner_.on_wake(self, out); }
    void on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) override;
    bool is_terminal(NodeIndex self) const override { return inner_.is_terminal(self); }

   private:
    Inspector& owner_;
    Protocol& inner_;
  };

  void findst_phase(const FindSt& st, std::uint64_t phase);
  void findmst_phase(const FindMst& mst, NodeIndex root, std::uint64_t phase, bool final);
  void msf_expansion(const Msf& msf, NodeIndex leader, std::uint64_t phase);
  void msf_send(NodeIndex src, NodeIndex dst, const Message& m);

  CheckLevel level_;
  std::vector<Violation> violations_;
  std::vector<PhaseEntry> log_;
  std::unordered_map<std::uint64_t, std::int64_t> trigger_balance_;  // src * 2^32 + dst
  std::vector<std::unique_ptr<Tap>> taps_;
  std::vector<std::uint64_t> last_rank_;
  const Msf* msf_ = nullptr;
};

}  // namespace kt1
