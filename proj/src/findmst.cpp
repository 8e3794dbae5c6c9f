#include "kt1/findmst.hpp"

#include <algorithm>
#include <deque>

namespace kt1 {

ControlTree ControlTree::from_parents(const std::vector<NodeIndex>& parent) {
  ControlTree t;
  t.parent = parent;
  t.children.assign(parent.size(), {});
  for (NodeIndex x = 0; x < parent.size(); ++x)
    if (parent[x] != kNoNode) t.children[parent[x]].push_back(x);
  return t;
}

ControlTree ControlTree::bfs(const Graph& g, const std::vector<NodeIndex>& roots) {
  std::vector<NodeIndex> parent(g.n(), kNoNode);
  std::vector<bool> seen(g.n(), false);
  std::deque<NodeIndex> q;
  for (auto r : roots) {
    if (seen[r]) continue;
    seen[r] = true;
    q.push_back(r);
    while (!q.empty()) {
      auto x = q.front();
      q.pop_front();
      for (auto inc : g.adj(x))
        if (!seen[inc.neighbor]) {
          seen[inc.neighbor] = true;
          parent[inc.neighbor] = x;
          q.push_back(inc.neighbor);
        }
    }
  }
  for (NodeIndex x = 0; x < g.n(); ++x)
    if (!seen[x]) throw ConfigError("control tree roots do not cover every component");
  return from_parents(parent);
}

FindMst::FindMst(const Graph& g, ControlTree control, std::uint64_t seed, FindMstConfig cfg)
    : g_(g),
      cfg_(cfg),
      control_(std::move(control)),
      nodes_(g.n()),
      phases_(g.n(), 0),
      ops_(*this, g.n(), seed, [&] {
        auto o = cfg.ops;
        o.c = cfg.c;
        return o;
      }()) {
  if (control_.parent.size() != g.n() || control_.children.size() != g.n())
    throw ConfigError("control tree size differs from the graph");
  for (NodeIndex x = 0; x < g.n(); ++x) nodes_[x].frag = g.id(x).value;
}

TreeView FindMst::tree(NodeIndex x) const {
  return TreeView{nodes_[x].parent, nodes_[x].children, nodes_[x].frag};
}

void FindMst::send(NodeIndex, NodeIndex to, const Message& m) { out_->send(to, m); }

std::uint64_t FindMst::max_phases() const {
  return phases_.empty() ? 0 : *std::max_element(phases_.begin(), phases_.end());
}

bool FindMst::finished() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const Node& s) { return s.terminated; });
}

std::vector<EdgeIndex> FindMst::tree_edges() const {
  std::vector<EdgeIndex> out;
  for (NodeIndex x = 0; x < g_.n(); ++x)
    if (nodes_[x].parent != kNoNode) out.push_back(*g_.find_edge(x, nodes_[x].parent));
  std::sort(out.begin(), out.end());
  return out;
}

void FindMst::on_wake(NodeIndex self, Outbox& out) {
  out_ = &out;
  if (cfg_.autostart && control_.is_root(self)) start_phase(self);
}

void FindMst::set_control(NodeIndex x, NodeIndex parent, std::vector<NodeIndex> children) {
  control_.parent[x] = parent;
  control_.children[x] = std::move(children);
}

void FindMst::start(NodeIndex root, Outbox& out) {
  out_ = &out;
  start_phase(root);
}

void FindMst::start_phase(NodeIndex root) { on_rank_request(root); }

void FindMst::on_rank_request(NodeIndex x) {
  auto& s = nodes_[x];
  s.rank_pending = static_cast<std::uint32_t>(control_.children[x].size());
  s.min_acc = s.rank;
  s.proceeded = false;
  s.done_sent = false;
  for (auto c : control_.children[x]) out_->send(c, Message::make(Kind::RankRequest));
  if (s.rank_pending == 0) rank_report(x);
}

void FindMst::rank_report(NodeIndex x) {
  if (control_.is_root(x))
    on_proceed(x, nodes_[x].min_acc);
  else
    out_->send(control_.parent[x], Message::make(Kind::RankUp, {nodes_[x].min_acc}));
}

void FindMst::on_proceed(NodeIndex x, std::uint64_t min_rank) {
  auto& s = nodes_[x];
  s.min_rank = min_rank;
  s.proceeded = true;
  s.done_sent = false;
  s.done_pending = static_cast<std::uint32_t>(control_.children[x].size());
  for (auto c : control_.children[x]) out_->send(c, Message::make(Kind::Proceed, {min_rank}));
  if (s.parent == kNoNode && s.rank == min_rank && !s.terminated) ops_.find_min(x);
  check_done(x);
}

void FindMst::check_done(NodeIndex x) {
  auto& s = nodes_[x];
  if (!s.proceeded || s.done_sent || s.done_pending != 0 || s.rank <= s.min_rank || s.terminated)
    return;
  s.done_sent = true;
  if (!control_.is_root(x)) {
    out_->send(control_.parent[x], Message::make(Kind::Done));
    return;
  }
  ++phases_[x];
  if (on_phase) on_phase(*this, x, phases_[x], false);
  start_phase(x);
}

void FindMst::on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) {
  out_ = &out;
  auto& s = nodes_[self];
  if (TreeOps::handles(m.kind)) {
    ops_.on_message(self, from, m);
    return;
  }
  switch (m.kind) {
    case Kind::RankRequest:
      if (from == control_.parent[self]) on_rank_request(self);
      break;
    case Kind::RankUp:
      if (s.rank_pending == 0) break;
      s.min_acc = std::min(s.min_acc, m.f[0]);
      if (--s.rank_pending == 0) rank_report(self);
      break;
    case Kind::Proceed:
      if (from == control_.parent[self]) on_proceed(self, m.f[0]);
      break;
    case Kind::Done:
      if (s.done_pending == 0) break;
      --s.done_pending;
      check_done(self);
      break;
    case Kind::Connect:
    case Kind::Accept:
    case Kind::IdentityUpdate:
      if (ops_.wave_active(self))
        s.deferred.emplace_back(from, m);
      else
        on_merge(self, from, m);
      break;
    case Kind::MstTerminate:
      if (from == s.parent) terminate(self);
      break;
    default: break;
  }
}

void FindMst::on_merge(NodeIndex x, NodeIndex from, const Message& m) {
  auto& s = nodes_[x];
  switch (m.kind) {
    case Kind::Connect: {
      std::uint64_t r = m.f[1];
      if (s.rank > r) {
        accept(x, from);
      } else if (s.rank == r && s.connect_to == from) {
        // both fragments chose this edge; the larger identity stays the root
        if (s.frag > m.f[0]) {
          s.children.push_back(from);
          std::sort(s.children.begin(), s.children.end());
          raise_rank(x, from, s.frag, r + 1);
        } else {
          raise_rank(x, from, m.f[0], r + 1);
        }
      } else {
        s.held.emplace_back(from, m);
      }
      break;
    }
    case Kind::Accept: raise_rank(x, from, m.f[0], m.f[1]); break;
    case Kind::IdentityUpdate:
      if (m.f[1] > s.rank) raise_rank(x, from, m.f[0], m.f[1]);
      break;
    default: break;
  }
}

void FindMst::accept(NodeIndex x, NodeIndex y) {
  auto& s = nodes_[x];
  s.children.push_back(y);
  std::sort(s.children.begin(), s.children.end());
  out_->send(y, Message::make(Kind::Accept, {s.frag, s.rank}));
}

// Adopt (frag, rank) learned over the edge to `via`. A new identity re-roots x
// towards `via`; the update then floods x's other fragment edges.
void FindMst::raise_rank(NodeIndex x, NodeIndex via, std::uint64_t frag, std::uint64_t rank) {
  auto& s = nodes_[x];
  std::vector<NodeIndex> nbrs;
  if (s.parent != kNoNode && s.parent != via) nbrs.push_back(s.parent);
  for (auto c : s.children)
    if (c != via) nbrs.push_back(c);
  if (frag != s.frag) {
    s.parent = via;
    s.children = nbrs;
    std::sort(s.children.begin(), s.children.end());
  }
  s.frag = frag;
  s.rank = rank;
  s.connect_to = kNoNode;
  ops_.reset_node(x);
  for (auto y : nbrs) out_->send(y, Message::make(Kind::IdentityUpdate, {frag, rank}));
  reconsider(x);
  check_done(x);
}

void FindMst::reconsider(NodeIndex x) {
  auto& s = nodes_[x];
  if (ops_.wave_active(x)) return;
  auto deferred = std::move(s.deferred);
  s.deferred.clear();
  for (auto& [from, m] : deferred) on_merge(x, from, m);
  auto held = std::move(s.held);
  s.held.clear();
  for (auto& [from, m] : held) on_merge(x, from, m);
}

bool FindMst::on_chosen_edge(NodeIndex x, EdgeIndex e, Purpose) {
  auto& s = nodes_[x];
  NodeIndex y = g_.edge(e).other(x);
  s.connect_to = y;
  out_->send(y, Message::make(Kind::Connect, {s.frag, s.rank}));
  return false;
}

void FindMst::on_wave_end(NodeIndex x) { reconsider(x); }

void FindMst::on_leader_result(NodeIndex leader, const OpResult& r) {
  if (r.op == OpKind::FindMin && !r.found) terminate(leader);
}

void FindMst::terminate(NodeIndex x) {
  auto& s = nodes_[x];
  if (s.terminated) return;
  s.terminated = true;
  for (auto c : s.children) out_->send(c, Message::make(Kind::MstTerminate));
  if (s.parent == kNoNode && on_phase) {
    NodeIndex root = x;
    while (!control_.is_root(root)) root = control_.parent[root];
    on_phase(*this, root, phases_[root], true);
  }
}

}  // namespace kt1
