#include "kt1/ghs.hpp"

namespace kt1 {

namespace {

std::size_t seq_field(Kind k) { return layout(k).size() - 1; }

}  // namespace

Ghs::Ghs(const Graph& g, SendFn send) : g_(g), send_(std::move(send)), nodes_(g.n()) {
  for (NodeIndex x = 0; x < g.n(); ++x) {
    auto d = g.degree(x);
    auto& s = nodes_[x];
    s.se.assign(d, kBasic);
    s.send_seq.assign(d, 0);
    s.recv_seq.assign(d, 0);
    s.early.resize(d);
  }
}

std::vector<EdgeIndex> Ghs::branches(NodeIndex x) const {
  std::vector<EdgeIndex> out;
  auto adj = g_.adj(x);
  for (std::size_t i = 0; i < adj.size(); ++i)
    if (nodes_[x].se[i] == kBranch) out.push_back(adj[i].edge);
  return out;
}

Weight Ghs::weight(NodeIndex x, std::size_t slot) const {
  return g_.edge(g_.adj(x)[slot].edge).weight;
}

void Ghs::send(NodeIndex x, std::size_t slot, Kind k, std::initializer_list<std::uint64_t> fields) {
  auto m = Message::make(k, fields);
  m.f[seq_field(k)] = nodes_[x].send_seq[slot]++;
  send_(x, g_.adj(x)[slot].neighbor, m);
}

void Ghs::wake(NodeIndex x) {
  if (nodes_[x].state == State::Sleeping) wakeup(x);
}

void Ghs::wakeup(NodeIndex x) {
  auto& s = nodes_[x];
  s.state = State::Found;
  s.level = 0;
  s.find_count = 0;
  if (s.se.empty()) {
    s.halted = true;
    return;
  }
  std::size_t m = 0;
  for (std::size_t i = 1; i < s.se.size(); ++i)
    if (weight(x, i) < weight(x, m)) m = i;
  s.se[m] = kBranch;
  send(x, m, Kind::GhsConnect, {0});
}

void Ghs::on_message(NodeIndex x, NodeIndex from, const Message& m) {
  auto& s = nodes_[x];
  if (s.abandoned || s.halted) return;
  auto slot = g_.slot_of(x, from);
  if (!slot) return;
  std::size_t j = *slot;
  std::uint64_t seq = m.f[seq_field(m.kind)];
  if (seq != s.recv_seq[j]) {
    s.early[j].emplace(seq, m);
    return;
  }
  deliver(x, j, m);
  ++s.recv_seq[j];
  for (auto it = s.early[j].find(s.recv_seq[j]); it != s.early[j].end();
       it = s.early[j].find(s.recv_seq[j])) {
    auto next = it->second;
    s.early[j].erase(it);
    deliver(x, j, next);
    ++s.recv_seq[j];
  }
}

// Processes m, or queues it when the current state cannot take it yet; every
// processed message retries the queue.
void Ghs::deliver(NodeIndex x, std::size_t slot, const Message& m) {
  auto& s = nodes_[x];
  if (s.halted || s.abandoned) return;
  if (!handle(x, slot, m)) {
    s.deferred.emplace_back(slot, m);
    return;
  }
  bool progress = true;
  while (progress && !s.deferred.empty() && !s.halted) {
    progress = false;
    for (std::size_t k = 0, n = s.deferred.size(); k < n; ++k) {
      auto [j, d] = s.deferred.front();
      s.deferred.pop_front();
      if (handle(x, j, d))
        progress = true;
      else
        s.deferred.emplace_back(j, d);
    }
  }
}

bool Ghs::handle(NodeIndex x, std::size_t j, const Message& m) {
  auto& s = nodes_[x];
  if (s.state == State::Sleeping) wakeup(x);
  switch (m.kind) {
    case Kind::GhsConnect: {
      std::uint64_t l = m.f[0];
      if (l < s.level) {
        s.se[j] = kBranch;
        send(x, j, Kind::GhsInitiate,
             {s.level, s.frag.base, s.frag.tiebreak.value, s.state == State::Find ? 1U : 0U});
        if (s.state == State::Find) ++s.find_count;
        return true;
      }
      if (s.se[j] == kBasic) return false;
      Weight w = weight(x, j);
      send(x, j, Kind::GhsInitiate, {s.level + 1, w.base, w.tiebreak.value, 1});
      return true;
    }
    case Kind::GhsInitiate: {
      s.level = m.f[0];
      s.frag = Weight{m.f[1], EdgeName{m.f[2]}};
      s.state = m.f[3] ? State::Find : State::Found;
      s.in_branch = j;
      s.best_edge = kNone;
      s.best = Cost{};
      for (std::size_t i = 0; i < s.se.size(); ++i) {
        if (i == j || s.se[i] != kBranch) continue;
        send(x, i, Kind::GhsInitiate, {m.f[0], m.f[1], m.f[2], m.f[3]});
        if (s.state == State::Find) ++s.find_count;
      }
      if (s.state == State::Find) test(x);
      return true;
    }
    case Kind::GhsTest: {
      std::uint64_t l = m.f[0];
      if (l > s.level) return false;
      Weight f{m.f[1], EdgeName{m.f[2]}};
      if (f != s.frag) {
        send(x, j, Kind::GhsAccept, {});
        return true;
      }
      if (s.se[j] == kBasic) s.se[j] = kRejected;
      if (s.test_edge != j)
        send(x, j, Kind::GhsReject, {});
      else
        test(x);
      return true;
    }
    case Kind::GhsAccept: {
      s.test_edge = kNone;
      Cost c{false, weight(x, j)};
      if (c < s.best) {
        s.best = c;
        s.best_edge = j;
      }
      report(x);
      return true;
    }
    case Kind::GhsReject:
      if (s.se[j] == kBasic) s.se[j] = kRejected;
      test(x);
      return true;
    case Kind::GhsReport: {
      Cost c{m.f[0] != 0, Weight{m.f[1], EdgeName{m.f[2]}}};
      if (c.inf) c.w = Weight{};
      if (j != s.in_branch) {
        --s.find_count;
        if (c < s.best) {
          s.best = c;
          s.best_edge = j;
        }
        report(x);
        return true;
      }
      if (s.state == State::Find) return false;
      if (s.best < c)
        change_root(x);
      else if (c.inf && s.best.inf)
        halt(x, s.in_branch);
      return true;
    }
    case Kind::GhsChangeRoot: change_root(x); return true;
    case Kind::GhsHalt: halt(x, j); return true;
    default: return true;
  }
}

void Ghs::test(NodeIndex x) {
  auto& s = nodes_[x];
  std::size_t best = kNone;
  for (std::size_t i = 0; i < s.se.size(); ++i)
    if (s.se[i] == kBasic && (best == kNone || weight(x, i) < weight(x, best))) best = i;
  if (best == kNone) {
    s.test_edge = kNone;
    report(x);
    return;
  }
  s.test_edge = best;
  send(x, best, Kind::GhsTest, {s.level, s.frag.base, s.frag.tiebreak.value});
}

void Ghs::report(NodeIndex x) {
  auto& s = nodes_[x];
  if (s.find_count != 0 || s.test_edge != kNone) return;
  s.state = State::Found;
  send(x, s.in_branch, Kind::GhsReport,
       {s.best.inf ? 1U : 0U, s.best.w.base, s.best.w.tiebreak.value});
}

void Ghs::change_root(NodeIndex x) {
  auto& s = nodes_[x];
  if (s.se[s.best_edge] == kBranch) {
    send(x, s.best_edge, Kind::GhsChangeRoot, {});
  } else {
    send(x, s.best_edge, Kind::GhsConnect, {s.level});
    s.se[s.best_edge] = kBranch;
  }
}

void Ghs::halt(NodeIndex x, std::size_t except) {
  auto& s = nodes_[x];
  if (s.halted) return;
  for (std::size_t i = 0; i < s.se.size(); ++i)
    if (i != except && s.se[i] == kBranch) send(x, i, Kind::GhsHalt, {});
  s.halted = true;
  s.deferred.clear();
}

}  // namespace kt1
