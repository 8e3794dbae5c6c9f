#include "kt1/inspector.hpp"

#include <algorithm>
#include <memory>

namespace kt1 {

const char* phase_kind_name(PhaseKind k) {
  switch (k) {
    case PhaseKind::First: return "first";
    case PhaseKind::A: return "A";
    case PhaseKind::B: return "B";
    case PhaseKind::None: return "none";
  }
  return "?";
}

CheckLevel parse_check_level(const std::string& s) {
  if (s == "off") return CheckLevel::Off;
  if (s == "phase") return CheckLevel::Phase;
  if (s == "full") return CheckLevel::Full;
  throw ConfigError("unknown check level '" + s + "'");
}

namespace {

std::uint64_t link_key(NodeIndex a, NodeIndex b) { return (std::uint64_t{a} << 32) | b; }

std::string id_of(const Graph& g, NodeIndex x) { return std::to_string(g.id(x).value); }

}  // namespace

void Inspector::add(std::string check, std::string detail) {
  violations_.push_back({std::move(check), std::move(detail)});
}

void Inspector::watch(Simulator& sim) {
  sim.set_send_observer([this](NodeIndex src, NodeIndex dst, const Message& m) {
    if (m.kind == Kind::Trigger) ++trigger_balance_[link_key(src, dst)];
    if (msf_) msf_send(src, dst, m);
  });
}

Protocol& Inspector::wrap(Protocol& inner) {
  taps_.push_back(std::make_unique<Tap>(*this, inner));
  return *taps_.back();
}

void Inspector::Tap::on_message(NodeIndex self, NodeIndex from, const Message& m, Outbox& out) {
  if (m.kind == Kind::Trigger) --owner_.trigger_balance_[link_key(from, self)];
  inner_.on_message(self, from, m, out);
}

void Inspector::check_conservation() {
  if (level_ == CheckLevel::Off) return;
  std::vector<std::pair<std::uint64_t, std::int64_t>> bad;
  for (auto [key, bal] : trigger_balance_)
    if (bal < 0) bad.emplace_back(key, bal);
  std::sort(bad.begin(), bad.end());
  for (auto [key, bal] : bad)
    add("trigger-conservation", "link " + std::to_string(key >> 32) + "->" +
                                    std::to_string(key & 0xffffffffu) + " delivered " +
                                    std::to_string(-bal) + " more Trigger than sent");
}

void Inspector::check_forest(const Graph& g, const std::vector<NodeIndex>& parent,
                             const std::vector<std::vector<NodeIndex>>& children,
                             const std::vector<bool>& member, std::vector<Violation>& out,
                             const std::string& label) {
  const std::size_t n = g.n();
  auto bad = [&](NodeIndex x, const std::string& what) {
    out.push_back({"tree", label + ": node " + id_of(g, x) + " " + what});
  };
  for (NodeIndex x = 0; x < n; ++x) {
    if (!member[x]) {
      if (parent[x] != kNoNode || !children[x].empty()) bad(x, "outside the tree has tree links");
      continue;
    }
    if (auto p = parent[x]; p != kNoNode) {
      if (!g.find_edge(x, p)) bad(x, "has a non-adjacent parent");
      else if (!member[p]) bad(x, "has a parent outside the tree");
      else if (std::find(children[p].begin(), children[p].end(), x) == children[p].end())
        bad(x, "is missing from its parent's children");
    }
    for (auto c : children[x])
      if (c >= n || parent[c] != x) bad(x, "lists a child whose parent differs");
  }
  // every member reaches a root within n steps
  std::vector<std::uint8_t> state(n, 0);  // 0 unknown, 1 on path, 2 reaches root
  for (NodeIndex x = 0; x < n; ++x) {
    if (!member[x] || state[x] == 2) continue;
    std::vector<NodeIndex> path;
    NodeIndex y = x;
    bool cycle = false;
    while (y != kNoNode && state[y] != 2) {
      if (state[y] == 1) {
        cycle = true;
        break;
      }
      state[y] = 1;
      path.push_back(y);
      y = parent[y];
    }
    if (cycle) bad(x, "lies on a parent cycle");
    for (auto z : path) state[z] = 2;
  }
}

void Inspector::attach(FindSt& st) {
  st.on_expand_done = [this](const FindSt& s, std::uint64_t phase) { findst_phase(s, phase); };
}

void Inspector::findst_phase(const FindSt& st, std::uint64_t phase) {
  if (level_ == CheckLevel::Off) return;
  const Graph& g = st.graph();
  const auto& roles = st.roles();
  const std::size_t n = g.n();
  std::vector<bool> in(n);
  std::vector<NodeIndex> parent(n);
  std::vector<std::vector<NodeIndex>> children(n);
  for (NodeIndex x = 0; x < n; ++x) {
    in[x] = st.node(x).in_tree;
    parent[x] = st.node(x).parent;
    children[x] = st.node(x).children;
  }
  std::string label = "phase " + std::to_string(phase);
  check_forest(g, parent, children, in, violations_, label);
  for (NodeIndex x = 0; x < n; ++x)
    if (in[x] && parent[x] == kNoNode && x != st.leader())
      add("tree", label + ": second root " + id_of(g, x));

  PhaseEntry e;
  e.phase = phase;
  for (NodeIndex x = 0; x < n; ++x) {
    if (!in[x]) continue;
    ++e.tree_size;
    if (!roles.low[x]) ++e.high_in_tree;
    bool star_near = roles.star[x];
    auto adj = g.adj(x);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      NodeIndex y = adj[i].neighbor;
      if (!in[y]) {
        if (roles.low[y]) ++e.outgoing_low;
        if (roles.star[x] || roles.low[x])
          add("invariant", label + ": neighbor " + id_of(g, y) + " of " +
                               (roles.star[x] ? "star " : "low-degree ") + id_of(g, x) +
                               " is outside T");
        continue;
      }
      if (roles.star[y]) star_near = true;
      if (roles.low[y] && !(st.node(x).flags[i] & kTNeighbor))
        add("observation", label + ": low-degree tree neighbor " + id_of(g, y) +
                               " missing from T-neighbor of " + id_of(g, x));
    }
    if (!roles.low[x] && !star_near)
      add("invariant", label + ": high-degree " + id_of(g, x) + " has no star neighbor in T");
  }
  if (!log_.empty()) {
    const auto& prev = log_.back();
    if (prev.outgoing_low > 0) e.ratio = double(e.outgoing_low) / double(prev.outgoing_low);
    if (e.high_in_tree > prev.high_in_tree)
      e.kind = PhaseKind::A;
    else if (prev.outgoing_low > 0 && 4 * e.outgoing_low <= 3 * prev.outgoing_low)
      e.kind = PhaseKind::B;
    else
      e.kind = PhaseKind::None;
    if (e.kind == PhaseKind::None)
      add("dichotomy", label + ": no high-degree node joined and outgoing-low went " +
                           std::to_string(prev.outgoing_low) + " -> " +
                           std::to_string(e.outgoing_low));
  }
  log_.push_back(e);
}

void Inspector::finish(const FindSt& st, const SimResult& r) {
  if (level_ == CheckLevel::Off) return;
  const Graph& g = st.graph();
  if (!st.finished()) add("tree", "leader did not terminate");
  for (auto x : r.non_terminal) add("tree", "node " + id_of(g, x) + " left an expansion open");
  for (NodeIndex x = 0; x < g.n(); ++x)
    if (!st.node(x).in_tree) add("tree", "node " + id_of(g, x) + " never joined T");
  check_conservation();
}

void Inspector::attach(FindMst& mst) {
  last_rank_.assign(mst.graph().n(), 0);
  mst.on_phase = [this](const FindMst& m, NodeIndex root, std::uint64_t phase, bool final) {
    findmst_phase(m, root, phase, final);
  };
}

// Fragment checks over the control component of `root`: forest shape, identity and
// rank agreement along fragment edges, root identity, rank <= ceil(log2 n), size >= 2^rank,
// rank monotonicity.
void Inspector::findmst_phase(const FindMst& mst, NodeIndex root, std::uint64_t phase,
                              bool final) {
  if (level_ == CheckLevel::Off) return;
  const Graph& g = mst.graph();
  const std::size_t n = g.n();
  const auto& ct = mst.control();
  std::vector<bool> in(n, false);
  std::vector<NodeIndex> stack{root};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    in[x] = true;
    for (auto c : ct.children[x]) stack.push_back(c);
  }
  std::string label = "mst phase " + std::to_string(phase) + (final ? " (final)" : "");
  std::vector<NodeIndex> parent(n, kNoNode);
  std::vector<std::vector<NodeIndex>> children(n);
  for (NodeIndex x = 0; x < n; ++x)
    if (in[x]) {
      parent[x] = mst.node(x).parent;
      children[x] = mst.node(x).children;
    }
  check_forest(g, parent, children, in, violations_, label);
  std::unordered_map<std::uint64_t, std::size_t> size;
  std::unordered_map<std::uint64_t, std::uint64_t> rank;
  unsigned max_rank = ceil_log2(std::max<std::size_t>(n, 1));
  for (NodeIndex x = 0; x < n; ++x) {
    if (!in[x]) continue;
    const auto& s = mst.node(x);
    ++size[s.frag];
    rank[s.frag] = std::max(rank[s.frag], s.rank);
    if (s.rank < last_rank_[x])
      add("rank", label + ": rank of " + id_of(g, x) + " decreased");
    last_rank_[x] = s.rank;
    if (s.rank > max_rank)
      add("rank", label + ": node " + id_of(g, x) + " has rank " + std::to_string(s.rank) +
                      " above ceil(log2 n)");
    if (s.parent == kNoNode) {
      if (g.id(x).value != s.frag)
        add("fragment", label + ": root " + id_of(g, x) + " carries another identity");
      continue;
    }
    const auto& p = mst.node(s.parent);
    if (p.frag != s.frag || p.rank != s.rank)
      add("fragment", label + ": node " + id_of(g, x) + " disagrees with its parent on identity or rank");
  }
  for (auto [frag, r] : rank)
    if (r < 64 && size[frag] < (std::size_t{1} << r))
      add("rank", label + ": fragment " + std::to_string(frag) + " of rank " + std::to_string(r) +
                      " has only " + std::to_string(size[frag]) + " nodes");
  if (phase > max_rank)
    add("rank", label + ": " + std::to_string(phase) + " merging phases exceed ceil(log2 n)");
}

void Inspector::finish(const FindMst& mst, const SimResult& r) {
  if (level_ == CheckLevel::Off) return;
  const Graph& g = mst.graph();
  for (auto x : r.non_terminal) add("tree", "node " + id_of(g, x) + " did not terminate");
}

void Inspector::attach(Msf& msf) {
  msf_ = &msf;
  last_rank_.assign(msf.graph().n(), 0);
  msf.on_expand_done = [this](const Msf& m, NodeIndex leader, std::uint64_t phase) {
    msf_expansion(m, leader, phase);
  };
  msf.on_join = [this](const Msf& m, NodeIndex x, std::uint64_t old_vid) {
    if (level_ == CheckLevel::Off) return;
    if (m.node(x).vid <= old_vid)
      add("fragment", "node " + id_of(m.graph(), x) + " moved from identity " +
                          std::to_string(old_vid) + " to " + std::to_string(m.node(x).vid));
  };
  msf.on_event = [this](const Msf& m, NodeIndex x, NodeIndex y) {
    if (level_ == CheckLevel::Off) return;
    const auto& g = m.graph();
    if (!m.roles().low[y])
      add("event", "node " + id_of(g, x) + " counted high-degree " + id_of(g, y) + " as an event");
    if (m.node(y).vid != 0 && m.node(y).vid == m.node(x).vid)
      add("event", "node " + id_of(g, x) + " counted fragment member " + id_of(g, y) + " as an event");
  };
}

// Members of the leader's fragment form one tree rooted at the leader.
void Inspector::msf_expansion(const Msf& msf, NodeIndex leader, std::uint64_t phase) {
  if (level_ == CheckLevel::Off) return;
  const Graph& g = msf.graph();
  const std::size_t n = g.n();
  const auto vid = msf.node(leader).vid;
  std::vector<bool> in(n);
  for (NodeIndex x = 0; x < n; ++x) in[x] = msf.node(x).vid == vid;
  std::vector<NodeIndex> parent(n, kNoNode);
  std::vector<std::vector<NodeIndex>> children(n);
  std::vector<bool> detached(n, false);  // parent already taken over by a higher identity
  for (NodeIndex x = 0; x < n; ++x) {
    if (!in[x]) continue;
    parent[x] = msf.node(x).parent;
    if (parent[x] != kNoNode && !in[parent[x]] && msf.node(parent[x]).vid > vid) {
      parent[x] = kNoNode;
      detached[x] = true;
    }
    for (auto c : msf.node(x).children)
      if (in[c]) children[x].push_back(c);
  }
  std::string label = "fragment " + std::to_string(vid) + " phase " + std::to_string(phase);
  check_forest(g, parent, children, in, violations_, label);
  for (NodeIndex x = 0; x < n; ++x)
    if (in[x] && parent[x] == kNoNode && x != leader && !detached[x])
      add("fragment", label + ": second root " + id_of(g, x));
}

void Inspector::msf_send(NodeIndex src, NodeIndex dst, const Message& m) {
  if (level_ == CheckLevel::Off) return;
  const auto& roles = msf_->roles();
  const Graph& g = msf_->graph();
  if (is_ghs_kind(m.kind) && !roles.low[src])
    add("ghs", "high-degree " + id_of(g, src) + " sent " + std::string(kind_name(m.kind)));
  if (!roles.low[src] || m.kind == Kind::LowDegree || m.kind == Kind::LowDegreeAck || m.kind == Kind::Star)
    return;
  if (msf_->node(src).in_mst) return;
  auto slot = g.slot_of(src, dst);
  if (slot && !msf_->node(src).acked[*slot])
    add("ack", "low-degree " + id_of(g, src) + " sent " + std::string(kind_name(m.kind)) + " to " +
                   id_of(g, dst) + " before its Low-degree was acknowledged");
}

void Inspector::finish(const Msf& msf, const SimResult& r) {
  if (level_ == CheckLevel::Off) return;
  const Graph& g = msf.graph();
  const std::size_t n = g.n();
  for (auto x : r.non_terminal) add("tree", "node " + id_of(g, x) + " did not terminate");
  // the largest star ID in a component owns all of it
  auto comp = component_labels(g);
  std::unordered_map<NodeIndex, std::uint64_t> top;
  std::size_t stars = 0;
  for (NodeIndex x = 0; x < n; ++x)
    if (msf.roles().star[x]) {
      ++stars;
      top[comp[x]] = std::max(top[comp[x]], g.id(x).value);
    }
  for (NodeIndex x = 0; x < n; ++x) {
    auto it = top.find(comp[x]);
    if (it != top.end() && msf.node(x).vid != it->second)
      add("fragment", "node " + id_of(g, x) + " ended in fragment " +
                          std::to_string(msf.node(x).vid) + " instead of " + std::to_string(it->second));
  }
  if (msf.stats().reject_forwards > n * stars)
    add("reject", std::to_string(msf.stats().reject_forwards) + " Reject-list forwards exceed n times the star count");
  check_conservation();
}

}  // namespace kt1
