#include "kt1/treeops.hpp"

#include <algorithm>
#include <cmath>

namespace kt1 {

namespace {

Kind up_kind_of(Kind down) {
  switch (down) {
    case Kind::QueryBcast: return Kind::QueryUp;
    case Kind::HashBcast: return Kind::VecUp;
    case Kind::IndexBcast: return Kind::NameUp;
    case Kind::VerifyBcast: return Kind::VerifyUp;
    case Kind::ResultBcast: return Kind::ResultUp;
    default: return Kind::Count;
  }
}

bool is_down(Kind k) { return up_kind_of(k) != Kind::Count; }

}  // namespace

TreeOps::TreeOps(TreeHost& host, std::size_t n, std::uint64_t seed, TreeOpsConfig cfg)
    : host_(host),
      g_(host.graph()),
      cfg_(cfg),
      params_(SketchParams::for_graph(std::max<std::size_t>(n, 2), cfg.c)),
      approx_hashes_(c_log_n(n, cfg.c)),
      findmin_limit_(cfg.findmin_patience * std::max(ceil_log2(n), 1u)),
      nodes_(n),
      drivers_(n) {
  rngs_.reserve(n);
  for (NodeIndex x = 0; x < n; ++x) rngs_.push_back(make_stream(seed, {stream::kNode, x, 1}));
}

bool TreeOps::handles(Kind k) {
  switch (k) {
    case Kind::QueryBcast:
    case Kind::QueryUp:
    case Kind::HashBcast:
    case Kind::VecUp:
    case Kind::IndexBcast:
    case Kind::NameUp:
    case Kind::VerifyBcast:
    case Kind::VerifyUp:
    case Kind::ResultBcast:
    case Kind::ResultUp: return true;
    default: return false;
  }
}

void TreeOps::reset_node(NodeIndex x) {
  nodes_[x] = NodeState{};
  drivers_[x] = Driver{};
}

bool TreeOps::passes(NodeIndex x, EdgeIndex e) const {
  const auto& s = nodes_[x];
  if (std::binary_search(s.excluded.begin(), s.excluded.end(), e)) return false;
  if (s.has_cap && !(g_.edge(e).weight < s.cap)) return false;
  return true;
}

std::optional<EdgeIndex> TreeOps::incident_by_name(NodeIndex x, std::uint64_t name) const {
  auto ends = split_name(name, g_.id_bits());
  if (!ends) return std::nullopt;
  NodeId me = g_.id(x);
  NodeId other;
  if (ends->first == me) other = ends->second;
  else if (ends->second == me) other = ends->first;
  else return std::nullopt;
  auto y = g_.index_of(other);
  if (!y) return std::nullopt;
  return g_.find_edge(x, *y);
}

void TreeOps::on_message(NodeIndex self, NodeIndex from, const Message& m) {
  TreeView tv = host_.tree(self);
  if (m.f[0] != tv.tag) return;
  if (is_down(m.kind)) {
    if (from != tv.parent) return;
    start_wave(self, m);
    return;
  }
  auto& w = nodes_[self].wave;
  if (!w.active || w.up != m.kind) return;
  if (std::find(tv.children.begin(), tv.children.end(), from) == tv.children.end()) return;
  fold(w, m);
  --w.pending;
  finish_if_done(self);
}

void TreeOps::start_wave(NodeIndex x, const Message& down) {
  TreeView tv = host_.tree(x);
  auto& w = nodes_[x].wave;
  w = Wave{};
  w.active = true;
  w.up = up_kind_of(down.kind);
  w.pending = static_cast<std::uint32_t>(tv.children.size());
  for (auto c : tv.children) host_.send(x, c, down);
  contribute(x, down);
  finish_if_done(x);
}

void TreeOps::contribute(NodeIndex x, const Message& down) {
  auto& s = nodes_[x];
  auto& w = s.wave;
  auto adj = g_.adj(x);
  auto pass = [&](EdgeIndex e) { return !s.filtered || passes(x, e); };
  switch (down.kind) {
    case Kind::QueryBcast: {
      if (down.f[1] & 1U) s.excluded.clear();
      s.has_cap = (down.f[1] & 2U) != 0;
      s.cap = Weight{down.f[2], EdgeName{down.f[3]}};
      break;
    }
    case Kind::HashBcast: {
      s.hash = HashFn{down.f[1], down.f[2], params_.prime, params_.l};
      s.filtered = down.f[3] != 0;
      for (auto inc : adj)
        if (pass(inc.edge)) w.acc0 ^= range_mask(s.hash(g_.edge(inc.edge).name), s.hash.l);
      break;
    }
    case Kind::IndexBcast: {
      auto i = static_cast<unsigned>(down.f[1]);
      std::uint64_t bound = i >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << i;
      for (auto inc : adj) {
        auto name = g_.edge(inc.edge).name;
        if (pass(inc.edge) && s.hash(name) < bound) w.acc0 ^= name.value;
      }
      break;
    }
    case Kind::VerifyBcast: {
      auto e = incident_by_name(x, down.f[1]);
      if (e && pass(*e)) {
        w.acc0 = 1;
        w.acc1 = g_.edge(*e).weight.base;
      }
      break;
    }
    case Kind::ResultBcast: {
      auto e = incident_by_name(x, down.f[1]);
      if (!e) break;
      auto purpose = static_cast<Purpose>(down.f[2]);
      if (purpose == Purpose::Sample) {
        auto it = std::lower_bound(s.excluded.begin(), s.excluded.end(), *e);
        if (it == s.excluded.end() || *it != *e) s.excluded.insert(it, *e);
      }
      if (host_.on_chosen_edge(x, *e, purpose)) ++w.pending;
      break;
    }
    default: break;
  }
}

void TreeOps::resolve_result(NodeIndex x, SampleClass cls) {
  auto& w = nodes_[x].wave;
  if (!w.active || w.up != Kind::ResultUp || w.pending == 0) return;
  w.acc0 = std::max<std::uint64_t>(w.acc0, static_cast<std::uint64_t>(cls));
  --w.pending;
  finish_if_done(x);
}

void TreeOps::fold(Wave& w, const Message& up) {
  switch (up.kind) {
    case Kind::VecUp:
    case Kind::NameUp: w.acc0 ^= up.f[1]; break;
    case Kind::VerifyUp:
      w.acc0 = std::min<std::uint64_t>(3, w.acc0 + up.f[1]);
      if (up.f[1]) w.acc1 = up.f[2];
      break;
    case Kind::ResultUp: w.acc0 = std::max(w.acc0, up.f[1]); break;
    default: break;
  }
}

Message TreeOps::up_message(NodeIndex x) const {
  const auto& w = nodes_[x].wave;
  auto tag = host_.tree(x).tag;
  switch (w.up) {
    case Kind::QueryUp: return Message::make(Kind::QueryUp, {tag});
    case Kind::VecUp: return Message::make(Kind::VecUp, {tag, w.acc0});
    case Kind::NameUp: return Message::make(Kind::NameUp, {tag, w.acc0});
    case Kind::VerifyUp: return Message::make(Kind::VerifyUp, {tag, w.acc0, w.acc1});
    case Kind::ResultUp: return Message::make(Kind::ResultUp, {tag, w.acc0});
    default: return Message::make(Kind::QueryUp, {tag});
  }
}

void TreeOps::finish_if_done(NodeIndex x) {
  auto& w = nodes_[x].wave;
  if (!w.active || w.pending != 0) return;
  TreeView tv = host_.tree(x);
  if (tv.parent == kNoNode) {
    w.active = false;
    wave_done(x, w.up, w.acc0, w.acc1);
  } else {
    auto up = up_message(x);
    w.active = false;
    host_.send(x, tv.parent, up);
  }
  if (!nodes_[x].wave.active) host_.on_wave_end(x);
}

void TreeOps::query(NodeIndex leader, bool reset_exclusions) {
  auto& d = drivers_[leader];
  d = Driver{};
  d.op = Op::Query;
  send_query(leader, reset_exclusions, std::nullopt);
}

void TreeOps::find_any(NodeIndex leader, Purpose purpose) {
  auto& d = drivers_[leader];
  d = Driver{};
  d.op = Op::FindAny;
  d.purpose = purpose;
  start_round(leader, true);
}

void TreeOps::find_min(NodeIndex leader) {
  auto& d = drivers_[leader];
  d = Driver{};
  d.op = Op::FindMin;
  d.purpose = Purpose::Connect;
  send_query(leader, true, std::nullopt);
}

void TreeOps::approx_cut(NodeIndex leader) {
  auto& d = drivers_[leader];
  d = Driver{};
  d.op = Op::ApproxCut;
  start_round(leader, false);
}

void TreeOps::send_query(NodeIndex leader, bool reset, const std::optional<Weight>& cap) {
  auto& d = drivers_[leader];
  d.step = Step::Query;
  std::uint64_t flags = (reset ? 1U : 0U) | (cap ? 2U : 0U);
  Weight w = cap.value_or(Weight{});
  start_wave(leader, Message::make(Kind::QueryBcast, {host_.tree(leader).tag, flags, w.base,
                                                       w.tiebreak.value}));
}

void TreeOps::start_round(NodeIndex leader, bool filtered) {
  auto& d = drivers_[leader];
  ++d.rounds;
  d.step = Step::Hash;
  d.hash = sample_hash(rngs_[leader], params_);
  start_wave(leader, Message::make(Kind::HashBcast, {host_.tree(leader).tag, d.hash.a, d.hash.b,
                                                      filtered ? 1U : 0U}));
}

void TreeOps::finish(NodeIndex leader, OpResult r) {
  auto& d = drivers_[leader];
  r.rounds = d.rounds;
  d.op = Op::Idle;
  host_.on_leader_result(leader, r);
}

void TreeOps::round_failed(NodeIndex leader, bool zero) {
  auto& d = drivers_[leader];
  if (d.op == Op::FindAny) {
    OpResult r;
    r.op = OpKind::FindAny;
    r.zero_vector = zero;
    finish(leader, r);
    return;
  }
  // find_min
  if (++d.fails < findmin_limit_) {
    start_round(leader, true);
    return;
  }
  if (!d.best) {
    OpResult r;
    r.op = OpKind::FindMin;
    finish(leader, r);
    return;
  }
  d.step = Step::Result;
  start_wave(leader, Message::make(Kind::ResultBcast, {host_.tree(leader).tag, d.best->first.value,
                                                        static_cast<std::uint64_t>(Purpose::Connect)}));
}

void TreeOps::round_succeeded(NodeIndex leader) {
  auto& d = drivers_[leader];
  if (d.op == Op::FindAny) {
    d.step = Step::Result;
    start_wave(leader, Message::make(Kind::ResultBcast, {host_.tree(leader).tag, d.candidate.value,
                                                          static_cast<std::uint64_t>(d.purpose)}));
    return;
  }
  d.best = std::pair{d.candidate, d.candidate_weight};
  d.fails = 0;
  send_query(leader, false, d.candidate_weight);
}

void TreeOps::wave_done(NodeIndex leader, Kind up, std::uint64_t acc0, std::uint64_t acc1) {
  auto& d = drivers_[leader];
  if (d.op == Op::Idle) return;
  switch (up) {
    case Kind::QueryUp:
      if (d.op == Op::Query) {
        finish(leader, OpResult{});
      } else {
        start_round(leader, true);
      }
      return;
    case Kind::VecUp: {
      if (d.op == Op::ApproxCut) {
        d.vectors.push_back(ParityVector{acc0});
        if (d.vectors.size() < approx_hashes_) {
          start_round(leader, false);
          return;
        }
        unsigned l = params_.l;
        double threshold = cfg_.approx_threshold_factor * approx_hashes_ / 16.0;
        OpResult r;
        r.op = OpKind::ApproxCut;
        for (unsigned i = 0; i <= l; ++i) {
          unsigned xi = 0;
          for (auto v : d.vectors) xi += v.bit(i);
          if (xi > threshold) {
            unsigned shift = l - i;
            r.estimate = shift >= 6 ? (std::uint64_t{1} << shift) / 64 : 0;
            r.found = true;
            break;
          }
        }
        finish(leader, r);
        return;
      }
      ParityVector v{acc0};
      if (v.zero()) {
        round_failed(leader, true);
        return;
      }
      d.step = Step::Index;
      start_wave(leader, Message::make(Kind::IndexBcast, {host_.tree(leader).tag, v.lowest()}));
      return;
    }
    case Kind::NameUp:
      if (!split_name(acc0, g_.id_bits())) {
        round_failed(leader, false);
        return;
      }
      d.candidate = EdgeName{acc0};
      d.step = Step::Verify;
      start_wave(leader, Message::make(Kind::VerifyBcast, {host_.tree(leader).tag, acc0}));
      return;
    case Kind::VerifyUp:
      if (acc0 != 1) {
        round_failed(leader, false);
        return;
      }
      d.candidate_weight = Weight{acc1, d.candidate};
      round_succeeded(leader);
      return;
    case Kind::ResultUp: {
      OpResult r;
      r.found = true;
      if (d.op == Op::FindAny) {
        r.op = OpKind::FindAny;
        r.edge = d.candidate;
        r.weight = d.candidate_weight;
      } else {
        r.op = OpKind::FindMin;
        r.edge = d.best->first;
        r.weight = d.best->second;
      }
      r.cls = static_cast<SampleClass>(acc0);
      finish(leader, r);
      return;
    }
    default: return;
  }
}

ThresholdDetector::ThresholdDetector(TreeHost& host, std::size_t n, std::uint64_t seed, unsigned c)
    : host_(host), n_(n), c_(c), threshold_(leader_threshold(n, c)), nodes_(n) {
  rngs_.reserve(n);
  for (NodeIndex x = 0; x < n; ++x) rngs_.push_back(make_stream(seed, {stream::kNode, x, 2}));
}

double ThresholdDetector::coin_probability(std::size_t n, unsigned c, std::uint64_t r) {
  double clogn = c_log_n(n, c);
  if (r == 0) return 1.0;
  return std::min(clogn / static_cast<double>(r), 1.0);
}

unsigned ThresholdDetector::leader_threshold(std::size_t n, unsigned c) {
  return (c_log_n(n, c) + 1) / 2;
}

void ThresholdDetector::arm(NodeIndex x, std::uint64_t r, std::uint64_t phase, std::size_t events) {
  auto& s = nodes_[x];
  s.armed = true;
  s.fired = false;
  s.phase = phase;
  s.p = coin_probability(n_, c_, r);
  s.received = 0;
  flip(x, events);
}

void ThresholdDetector::start(NodeIndex leader, std::uint64_t r, std::uint64_t phase,
                              std::size_t events) {
  TreeView tv = host_.tree(leader);
  auto m = Message::make(Kind::SendTrigger, {tv.tag, r, phase});
  for (auto c : tv.children) host_.send(leader, c, m);
  arm(leader, r, phase, events);
}

void ThresholdDetector::relay(NodeIndex x, const Message& m, std::size_t events) {
  TreeView tv = host_.tree(x);
  for (auto c : tv.children) host_.send(x, c, m);
  arm(x, m.f[1], m.f[2], events);
}

void ThresholdDetector::disarm(NodeIndex x) { nodes_[x].armed = false; }

void ThresholdDetector::add_events(NodeIndex x, std::size_t events) {
  if (nodes_[x].armed) flip(x, events);
}

void ThresholdDetector::flip(NodeIndex x, std::size_t events) {
  auto& s = nodes_[x];
  std::bernoulli_distribution coin(s.p);
  for (std::size_t i = 0; i < events; ++i) {
    if (!coin(rngs_[x])) continue;
    ++generated_[{host_.tree(x).tag, s.phase}];
    deliver(x);
    if (!s.armed) return;  // fired and disarmed by the callback
  }
}

void ThresholdDetector::deliver(NodeIndex x) {
  auto& s = nodes_[x];
  TreeView tv = host_.tree(x);
  if (tv.parent != kNoNode) {
    host_.send(x, tv.parent, Message::make(Kind::Trigger, {tv.tag, s.phase}));
    return;
  }
  ++s.received;
  if (!s.fired && s.received >= threshold_) {
    s.fired = true;
    if (on_fire) on_fire(x, s.phase);
  }
}

void ThresholdDetector::on_trigger(NodeIndex x, NodeIndex, const Message& m) {
  auto& s = nodes_[x];
  if (!s.armed || m.f[0] != host_.tree(x).tag || m.f[1] != s.phase) return;
  deliver(x);
}

std::uint64_t ThresholdDetector::generated_total(std::uint64_t tag, std::uint64_t phase) const {
  auto it = generated_.find({tag, phase});
  return it == generated_.end() ? 0 : it->second;
}

}  // namespace kt1
