#include "kt1/findst.hpp"

#include <algorithm>

namespace kt1 {

const char* outcome_name(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Terminal: return "terminal";
    case SearchOutcome::HighFound: return "high-found";
    case SearchOutcome::FewEdges: return "few-edges";
    case SearchOutcome::Waited: return "waited";
  }
  return "?";
}

void SearchLoop::begin(std::uint64_t phase) {
  cur_ = SearchRecord{};
  cur_.phase = phase;
  any_high_ = false;
  zero_streak_ = 0;
}

bool SearchLoop::add(const OpResult& r) {
  ++cur_.samples;
  if (r.found) {
    ++cur_.found;
    zero_streak_ = 0;
    if (r.cls == SampleClass::High) any_high_ = true;
  } else {
    zero_streak_ = r.zero_vector ? zero_streak_ + 1 : 0;
  }
  return any_high_ || cur_.found >= 2 * clogn_ || cur_.samples >= 48 * clogn_ ||
         (zero_exit_ && zero_streak_ >= 2 * clogn_);
}

SearchOutcome SearchLoop::outcome() const {
  if (cur_.found == 0) return SearchOutcome::Terminal;
  if (any_high_) return SearchOutcome::HighFound;
  if (cur_.found < 2 * clogn_) return SearchOutcome::FewEdges;
  return SearchOutcome::Waited;
}

namespace {

NodeIndex max_id_node(const Graph& g) {
  NodeIndex best = 0;
  for (NodeIndex x = 1; x < g.n(); ++x)
    if (g.id(x) > g.id(best)) best = x;
  return best;
}

}  // namespace

FindSt::FindSt(const Graph& g, std::uint64_t seed, FindStConfig cfg)
    : g_(g),
      cfg_(cfg),
      roles_(assign_roles(g, cfg.roles)),
      leader_(cfg.leader.value_or(max_id_node(g))),
      clogn_(c_log_n(g.n(), cfg.c)),
      nodes_(g.n()),
      ops_(*this, g.n(), seed, [&] {
        auto o = cfg.ops;
        o.c = cfg.c;
        return o;
      }()),
      detector_(*this, g.n(), seed, cfg.c),
      search_(clogn_, cfg.zero_exit) {
  if (leader_ >= g.n()) throw ConfigError("leader out of range");
  for (NodeIndex x = 0; x < g.n(); ++x) nodes_[x].flags.assign(g.degree(x), 0);
  // the leader starts with every incident edge on its Found list
  for (auto& f : nodes_[leader_].flags) f |= kFoundL;
  nodes_[leader_].in_tree = true;
  detector_.on_fire = [this](NodeIndex x, std::uint64_t phase) {
    if (x == leader_ && stage_ == Stage::Waiting && phase == phase_) start_phase();
  };
}

TreeView FindSt::tree(NodeIndex x) const {
  return TreeView{nodes_[x].parent, nodes_[x].children, g_.id(leader_).value};
}

void FindSt::send(NodeIndex, NodeIndex to, const Message& m) { out_->send(to, m); }

bool FindSt::has_flag(NodeIndex x, NodeIndex y, std::uint8_t f) const {
  auto s = g_.slot_of(x, y);
  return s && (nodes_[x].flags[*s] & f);
}

void FindSt::set_flag(NodeIndex x, NodeIndex y, std::uint8_t f) {
  if (auto s = g_.slot_of(x, y)) nodes_[x].flags[*s] |= f;
}

std::size_t FindSt::events(NodeIndex x) const {
  std::size_t k = 0;
  for (auto f : nodes_[x].flags) k += (f & kFoundL) && !(f & kTNeighbor);
  return k;
}

std::vector<EdgeIndex> FindSt::tree_edges() const {
  std::vector<EdgeIndex> out;
  for (NodeIndex x = 0; x < g_.n(); ++x)
    if (nodes_[x].parent != kNoNode) out.push_back(*g_.find_edge(x, nodes_[x].parent));
  std::sort(out.begin(), out.end());
  return out;
}

bool FindSt::is_terminal(NodeIndex x) const {
  const auto& s = nodes_[x];
  if (s.waiting || s.expanding) return false;
  return x != leader_ || stage_ == Stage::Done;
}

void FindSt::on_wake(NodeIndex self, Outbox& out) {
  out_ = &out;
  if (roles_.star[self])
    for (auto inc : g_.adj(self)) out.send(inc.neighbor, Message::make(Kind::Star));
  if (roles_.low[self])
    for (auto inc : g_.adj(self)) out.send(inc.neighbor, Message::make(Kind::LowDegree));
  if (self == leader_) start_phase();
}

void FindSt::start_phase() {
  ++phase_;
  stage_ = Stage::Expanding;
  auto& s = nodes_[leader_];
  detector_.disarm(leader_);
  s.phase_seen = phase_;
  forward(leader_, kNoNode, false);
}

// Sends Expand over children and Found edges (or every neighbor), clearing the
// Found flags of every edge used. `skip` is the sender.
void FindSt::forward(NodeIndex x, NodeIndex skip, bool all_neighbors) {
  auto& s = nodes_[x];
  auto adj = g_.adj(x);
  auto msg = Message::make(Kind::Expand, {s.phase_seen});
  std::vector<bool> send_to(adj.size(), false);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (all_neighbors || (s.flags[i] & (kFoundL | kFoundO))) send_to[i] = true;
    s.flags[i] &= std::uint8_t(~(kFoundL | kFoundO));
  }
  if (!all_neighbors)
    for (auto c : s.children) send_to[*g_.slot_of(x, c)] = true;
  s.expanding = true;
  s.pending = 0;
  s.new_children.clear();
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (!send_to[i] || adj[i].neighbor == skip) continue;
    ++s.pending;
    out_->send(adj[i].neighbor, msg);
  }
  if (s.pending == 0) expand_done(x);
}

void FindSt::expand_done(NodeIndex x) {
  auto& s = nodes_[x];
  s.expanding = false;
  s.children = std::move(s.new_children);
  s.new_children.clear();
  std::sort(s.children.begin(), s.children.end());
  if (x != leader_) {
    out_->send(s.parent, Message::make(Kind::DoneByAccept));
    return;
  }
  if (on_expand_done) on_expand_done(*this, phase_);
  stage_ = Stage::Searching;
  search_.begin(phase_);
  ops_.query(leader_, true);
}

void FindSt::on_expand(NodeIndex x, NodeIndex from, const Message& m) {
  auto& s = nodes_[x];
  set_flag(x, from, kTNeighbor);
  if (auto slot = g_.slot_of(x, from)) s.flags[*slot] &= std::uint8_t(~(kFoundL | kFoundO));
  detector_.disarm(x);
  if (!s.in_tree) {
    s.in_tree = true;
    s.parent = from;
    s.phase_seen = m.f[0];
    if (roles_.high_non_star(x)) {
      if (!s.star_seen) {
        s.waiting = true;
        return;
      }
      forward(x, from, false);
    } else {
      forward(x, from, true);
    }
    return;
  }
  if (from != s.parent) {
    out_->send(from, Message::make(Kind::DoneByReject));
    return;
  }
  s.phase_seen = m.f[0];
  forward(x, from, false);
}

void FindSt::on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) {
  out_ = &out;
  auto& s = nodes_[self];
  if (TreeOps::handles(m.kind)) {
    ops_.on_message(self, from, m);
    return;
  }
  switch (m.kind) {
    case Kind::Star:
      set_flag(self, from, kFoundO);
      s.star_seen = true;
      if (s.waiting) {
        s.waiting = false;
        forward(self, s.parent, false);
      }
      break;
    case Kind::LowDegree: {
      bool fresh = !has_flag(self, from, kFoundL);
      set_flag(self, from, kFoundL);
      if (fresh && !has_flag(self, from, kTNeighbor)) detector_.add_events(self, 1);
      break;
    }
    case Kind::Expand: on_expand(self, from, m); break;
    case Kind::DoneByAccept:
    case Kind::DoneByReject:
      if (!s.expanding || s.pending == 0) break;
      set_flag(self, from, kTNeighbor);
      if (m.kind == Kind::DoneByAccept) s.new_children.push_back(from);
      if (--s.pending == 0) expand_done(self);
      break;
    case Kind::DegQuery:
      out.send(from, Message::make(Kind::DegReply, {roles_.low[self] ? 0U : 1U}));
      break;
    case Kind::DegReply:
      set_flag(self, from, m.f[0] ? kFoundO : kFoundL);
      ops_.resolve_result(self, m.f[0] ? SampleClass::High : SampleClass::Low);
      break;
    case Kind::SendTrigger:
      if (s.in_tree && from == s.parent && m.f[0] == tree(self).tag && m.f[2] == s.phase_seen)
        detector_.relay(self, m, events(self));
      break;
    case Kind::Trigger: detector_.on_trigger(self, from, m); break;
    default: break;
  }
}

bool FindSt::on_chosen_edge(NodeIndex x, EdgeIndex e, Purpose) {
  out_->send(g_.edge(e).other(x), Message::make(Kind::DegQuery));
  return true;
}

void FindSt::next_sample() { ops_.find_any(leader_, Purpose::Sample); }

void FindSt::on_leader_result(NodeIndex, const OpResult& r) {
  if (stage_ == Stage::Searching) {
    if (r.op == OpKind::Query) {
      next_sample();
      return;
    }
    if (search_.add(r))
      finish_search();
    else
      next_sample();
    return;
  }
  if (stage_ == Stage::Approx && r.op == OpKind::ApproxCut) {
    search_.record().estimate = r.estimate;
    searches_.push_back(search_.record());
    stage_ = Stage::Waiting;
    detector_.start(leader_, r.estimate / 2, phase_, events(leader_));
  }
}

void FindSt::finish_search() {
  auto& rec = search_.record();
  rec.outcome = search_.outcome();
  switch (rec.outcome) {
    case SearchOutcome::Terminal:
      searches_.push_back(rec);
      stage_ = Stage::Done;
      return;
    case SearchOutcome::HighFound:
    case SearchOutcome::FewEdges:
      searches_.push_back(rec);
      start_phase();
      return;
    case SearchOutcome::Waited:
      stage_ = Stage::Approx;
      ops_.approx_cut(leader_);
      return;
  }
}

}  // namespace kt1
