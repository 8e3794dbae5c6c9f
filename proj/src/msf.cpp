#include "kt1/msf.hpp"

#include <algorithm>

namespace kt1 {

namespace {

bool is_mst_kind(Kind k) {
  switch (k) {
    case Kind::RankRequest:
    case Kind::RankUp:
    case Kind::Proceed:
    case Kind::Connect:
    case Kind::Accept:
    case Kind::Done:
    case Kind::IdentityUpdate:
    case Kind::MstTerminate: return true;
    default: return false;
  }
}

FindMstConfig mst_config(const MsfConfig& cfg) {
  FindMstConfig m;
  m.c = cfg.c;
  m.ops = cfg.ops;
  m.autostart = false;
  return m;
}

ControlTree empty_control(std::size_t n) {
  ControlTree t;
  t.parent.assign(n, kNoNode);
  t.children.assign(n, {});
  return t;
}

}  // namespace

Msf::Msf(const Graph& g, std::uint64_t seed, MsfConfig cfg)
    : g_(g),
      cfg_(cfg),
      roles_(assign_roles(g, cfg.roles)),
      clogn_(c_log_n(g.n(), cfg.c)),
      nodes_(g.n()),
      ops_(*this, g.n(), seed, [&] {
        auto o = cfg.ops;
        o.c = cfg.c;
        return o;
      }()),
      detector_(*this, g.n(), seed, cfg.c),
      ghs_(g, [this](NodeIndex from, NodeIndex to, const Message& m) { send(from, to, m); }),
      mst_(g, empty_control(g.n()), seed + 1, mst_config(cfg)),
      search_(g.n(), SearchLoop(clogn_, cfg.zero_exit)) {
  for (NodeIndex x = 0; x < g.n(); ++x) {
    auto d = g.degree(x);
    nodes_[x].flags.assign(d, 0);
    nodes_[x].acked.assign(d, false);
    nodes_[x].queued.resize(d);
  }
  detector_.on_fire = [this](NodeIndex x, std::uint64_t phase) {
    auto& s = nodes_[x];
    if (leader_active(x) && s.stage == Stage::Waiting && phase == s.phase) start_phase(x);
  };
}

TreeView Msf::tree(NodeIndex x) const {
  return TreeView{nodes_[x].parent, nodes_[x].children, nodes_[x].vid};
}

// Low-degree nodes hold every message on an edge until their Low-degree on that
// edge is acknowledged.
void Msf::send(NodeIndex from, NodeIndex to, const Message& m) {
  if (roles_.low[from] && m.kind != Kind::LowDegree && m.kind != Kind::LowDegreeAck) {
    auto slot = *g_.slot_of(from, to);
    auto& s = nodes_[from];
    if (!s.acked[slot]) {
      s.queued[slot].push_back(m);
      return;
    }
  }
  out_->send(to, m);
}

bool Msf::is_terminal(NodeIndex x) const {
  if (nodes_[x].in_mst) return mst_.is_terminal(x);
  return ghs_.halted(x);
}

bool Msf::leader_active(NodeIndex x) const {
  const auto& s = nodes_[x];
  return roles_.star[x] && s.parent == kNoNode && s.vid == g_.id(x).value &&
         s.stage != Stage::Halted && s.stage != Stage::Idle;
}

void Msf::set_flag(NodeIndex x, NodeIndex y, std::uint8_t f) {
  if (auto s = g_.slot_of(x, y)) nodes_[x].flags[*s] |= f;
}

std::size_t Msf::events(NodeIndex x) const {
  std::size_t k = 0;
  for (auto f : nodes_[x].flags) k += (f & kFoundL) != 0;
  return k;
}

std::vector<EdgeIndex> Msf::forest_edges() const {
  std::vector<EdgeIndex> out;
  for (NodeIndex x = 0; x < g_.n(); ++x) {
    if (nodes_[x].in_mst) {
      auto p = mst_.node(x).parent;
      if (p != kNoNode) out.push_back(*g_.find_edge(x, p));
    } else if (ghs_.halted(x)) {
      auto b = ghs_.branches(x);
      out.insert(out.end(), b.begin(), b.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Msf::on_wake(NodeIndex self, Outbox& out) {
  out_ = &out;
  auto& s = nodes_[self];
  if (roles_.star[self]) {
    s.vid = g_.id(self).value;
    for (auto inc : g_.adj(self)) out.send(inc.neighbor, Message::make(Kind::Star));
  }
  if (roles_.low[self])
    for (auto inc : g_.adj(self)) out.send(inc.neighbor, Message::make(Kind::LowDegree));
  if (roles_.low[self] && !roles_.star[self]) ghs_.wake(self);
  if (roles_.star[self]) {
    s.stage = Stage::Expanding;
    start_phase(self);
  }
}

void Msf::on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) {
  out_ = &out;
  auto& s = nodes_[self];
  if (TreeOps::handles(m.kind)) {
    if (s.in_mst)
      mst_.on_message(self, from, m, out);
    else
      ops_.on_message(self, from, m);
    return;
  }
  if (is_mst_kind(m.kind)) {
    if (m.kind == Kind::RankRequest && !s.in_mst && from == s.parent) enter_mst(self);
    if (s.in_mst) mst_.on_message(self, from, m, out);
    return;
  }
  if (is_ghs_kind(m.kind)) {
    // only unattached low-degree non-stars answer GHS; everyone else stays silent
    if (s.vid == 0 && roles_.low[self] && !roles_.star[self]) ghs_.on_message(self, from, m);
    return;
  }
  switch (m.kind) {
    case Kind::LowDegreeAck: {
      auto slot = *g_.slot_of(self, from);
      s.acked[slot] = true;
      auto q = std::move(s.queued[slot]);
      s.queued[slot].clear();
      for (auto& msg : q) out.send(from, msg);
      break;
    }
    case Kind::LowDegree: {
      out.send(from, Message::make(Kind::LowDegreeAck));
      auto slot = *g_.slot_of(self, from);
      if (s.flags[slot] & kFoundL) break;
      s.flags[slot] |= kFoundL;
      if (detector_.armed(self)) {
        if (on_event) on_event(*this, self, from);
        detector_.add_events(self, 1);
      }
      break;
    }
    case Kind::Star:
      set_flag(self, from, kFoundO);
      s.star_seen = true;
      if (s.waiting) {
        s.waiting = false;
        forward(self, lists(self, false), s.parent);
      }
      break;
    case Kind::DegQuery:
      send(self, from, Message::make(Kind::DegReply, {roles_.low[self] ? 0U : 1U}));
      break;
    case Kind::DegReply:
      set_flag(self, from, m.f[0] ? kFoundO : kFoundL);
      ops_.resolve_result(self, m.f[0] ? SampleClass::High : SampleClass::Low);
      break;
    case Kind::ExpandID: on_expand(self, from, m); break;
    case Kind::AcceptID:
    case Kind::RejectedLowerID:
    case Kind::RejectSameTree: on_reply(self, from, m); break;
    case Kind::SendTrigger:
      if (s.vid != 0 && from == s.parent && m.f[0] == s.vid && m.f[2] == s.phase_seen) {
        arm_events(self);
        detector_.relay(self, m, events(self));
      }
      break;
    case Kind::Trigger: detector_.on_trigger(self, from, m); break;
    default: break;
  }
}

void Msf::on_expand(NodeIndex x, NodeIndex t, const Message& m) {
  auto& s = nodes_[x];
  std::uint64_t tid = m.f[0];
  auto slot = *g_.slot_of(x, t);
  if (tid < s.vid) {
    // answered at once, even mid-expansion, so fragments never wait on each other in a loop
    send(x, t, Message::make(Kind::RejectedLowerID, {tid, 0}));
    auto it = std::lower_bound(s.rejected_ids.begin(), s.rejected_ids.end(), tid);
    if (it == s.rejected_ids.end() || *it != tid) {
      s.rejected_ids.insert(it, tid);
      s.flags[slot] |= kReject;
    }
    return;
  }
  s.flags[slot] &= std::uint8_t(~(kFoundL | kFoundO));
  if (tid == s.vid && t != s.parent) {
    send(x, t, Message::make(Kind::RejectSameTree, {tid}));
    return;
  }
  if (busy(x)) {
    s.held.emplace_back(t, m);
    return;
  }
  if (tid > s.vid) {
    join(x, t, tid, m.f[1]);
    return;
  }
  s.phase_seen = m.f[1];
  forward(x, lists(x, true), t);
}

void Msf::join(NodeIndex x, NodeIndex t, std::uint64_t tid, std::uint64_t phase) {
  auto& s = nodes_[x];
  bool fresh = s.vid == 0;
  if (leader_active(x)) halt_leader(x);
  auto targets = lists(x, true);
  ops_.reset_node(x);
  detector_.disarm(x);
  if (fresh && roles_.low[x] && !roles_.star[x]) ghs_.abandon(x);
  std::uint64_t old = s.vid;
  s.vid = tid;
  s.parent = t;
  s.children.clear();
  s.phase_seen = phase;
  if (on_join) on_join(*this, x, old);
  if (!fresh) {
    forward(x, std::move(targets), t);
  } else if (roles_.high_non_star(x)) {
    if (!s.star_seen) {
      s.waiting = true;
      return;
    }
    forward(x, lists(x, false), t);
  } else {
    forward(x, std::vector<bool>(g_.degree(x), true), t);
  }
}

// Found and Reject edges, plus the current tree links when asked.
std::vector<bool> Msf::lists(NodeIndex x, bool tree_links) const {
  const auto& s = nodes_[x];
  std::vector<bool> out(s.flags.size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (s.flags[i] & (kFoundL | kFoundO | kReject)) != 0;
  if (tree_links) {
    if (s.parent != kNoNode) out[*g_.slot_of(x, s.parent)] = true;
    for (auto c : s.children) out[*g_.slot_of(x, c)] = true;
  }
  return out;
}

void Msf::forward(NodeIndex x, std::vector<bool> targets, NodeIndex skip) {
  auto& s = nodes_[x];
  auto adj = g_.adj(x);
  auto msg = Message::make(Kind::ExpandID, {s.vid, s.phase_seen});
  s.expanding = true;
  s.pending = 0;
  s.new_children.clear();
  s.rejected_below = false;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (!targets[i] || adj[i].neighbor == skip) continue;
    if (s.flags[i] & kReject) ++stats_.reject_forwards;
    s.flags[i] &= std::uint8_t(~(kFoundL | kFoundO | kReject));
    ++s.pending;
    send(x, adj[i].neighbor, msg);
  }
  if (s.pending == 0) expand_done(x);
}

void Msf::on_reply(NodeIndex x, NodeIndex from, const Message& m) {
  auto& s = nodes_[x];
  if (!s.expanding || s.pending == 0 || m.f[0] != s.vid) return;
  if (m.kind == Kind::AcceptID) s.new_children.push_back(from);
  if (m.kind == Kind::RejectedLowerID) {
    s.rejected_below = true;
    if (m.f[1]) s.new_children.push_back(from);
  }
  if (--s.pending == 0) expand_done(x);
}

void Msf::expand_done(NodeIndex x) {
  auto& s = nodes_[x];
  s.expanding = false;
  s.children = std::move(s.new_children);
  s.new_children.clear();
  std::sort(s.children.begin(), s.children.end());
  if (s.parent != kNoNode) {
    // the member bit keeps x a child of its parent even when its subtree met a higher ID
    send(x, s.parent,
         s.rejected_below ? Message::make(Kind::RejectedLowerID, {s.vid, 1})
                          : Message::make(Kind::AcceptID, {s.vid}));
  } else if (leader_active(x) && s.stage == Stage::Expanding) {
    if (s.rejected_below) {
      halt_leader(x);
    } else {
      ++stats_.successful_expansions;
      if (on_expand_done) on_expand_done(*this, x, s.phase);
      s.stage = Stage::Searching;
      search_[x].begin(s.phase);
      ops_.query(x, true);
    }
  }
  drain_held(x);
}

void Msf::drain_held(NodeIndex x) {
  // entries answered at once are drained even if a replay makes x busy again
  auto q = std::move(nodes_[x].held);
  nodes_[x].held.clear();
  for (auto& [from, m] : q) on_expand(x, from, m);
}

void Msf::halt_leader(NodeIndex x) {
  nodes_[x].stage = Stage::Halted;
  ++stats_.halted_leaders;
  detector_.disarm(x);
}

void Msf::start_phase(NodeIndex x) {
  auto& s = nodes_[x];
  ++s.phase;
  ++stats_.expansions;
  s.stage = Stage::Expanding;
  detector_.disarm(x);
  s.phase_seen = s.phase;
  // the first expansion of a star goes over every edge
  auto targets = s.phase == 1 ? std::vector<bool>(g_.degree(x), true) : lists(x, true);
  forward(x, std::move(targets), kNoNode);
}

bool Msf::on_chosen_edge(NodeIndex x, EdgeIndex e, Purpose) {
  send(x, g_.edge(e).other(x), Message::make(Kind::DegQuery));
  return true;
}

void Msf::on_leader_result(NodeIndex x, const OpResult& r) {
  auto& s = nodes_[x];
  if (!leader_active(x)) return;
  if (s.stage == Stage::Searching) {
    if (r.op == OpKind::Query) {
      ops_.find_any(x, Purpose::Sample);
      return;
    }
    if (search_[x].add(r))
      finish_search(x);
    else
      ops_.find_any(x, Purpose::Sample);
    return;
  }
  if (s.stage == Stage::Approx && r.op == OpKind::ApproxCut) {
    search_[x].record().estimate = r.estimate;
    searches_.push_back(search_[x].record());
    s.stage = Stage::Waiting;
    arm_events(x);
    detector_.start(x, r.estimate / 2, s.phase, events(x));
  }
}

void Msf::finish_search(NodeIndex x) {
  auto& s = nodes_[x];
  auto& rec = search_[x].record();
  rec.outcome = search_[x].outcome();
  switch (rec.outcome) {
    case SearchOutcome::Terminal:
      searches_.push_back(rec);
      s.stage = Stage::Done;
      start_mst(x);
      return;
    case SearchOutcome::HighFound:
    case SearchOutcome::FewEdges:
      searches_.push_back(rec);
      start_phase(x);
      return;
    case SearchOutcome::Waited:
      s.stage = Stage::Approx;
      ops_.approx_cut(x);
      return;
  }
}

// Reports the Found_L edges a node counts as events when it arms.
void Msf::arm_events(NodeIndex x) {
  if (!on_event) return;
  auto adj = g_.adj(x);
  for (std::size_t i = 0; i < adj.size(); ++i)
    if (nodes_[x].flags[i] & kFoundL) on_event(*this, x, adj[i].neighbor);
}

void Msf::start_mst(NodeIndex x) {
  auto& s = nodes_[x];
  s.in_mst = true;
  mst_.set_control(x, kNoNode, s.children);
  mst_.start(x, *out_);
}

void Msf::enter_mst(NodeIndex x) {
  auto& s = nodes_[x];
  s.in_mst = true;
  mst_.set_control(x, s.parent, s.children);
}

}  // namespace kt1
