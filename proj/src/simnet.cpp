#include "kt1/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace kt1 {

DelayPolicy DelayPolicy::parse(const std::string& name) {
  DelayPolicy p;
  if (name == "uniform-random" || name == "uniform") p.kind = DelayKind::UniformRandom;
  else if (name == "fifo-per-edge" || name == "fifo") p.kind = DelayKind::FifoPerEdge;
  else if (name == "reorder-adversary" || name == "reorder") p.kind = DelayKind::ReorderAdversary;
  else if (name == "region-stall" || name == "stall") p.kind = DelayKind::RegionStall;
  else throw ConfigError("unknown delay policy '" + name + "'");
  return p;
}

std::string DelayPolicy::name() const {
  switch (kind) {
    case DelayKind::UniformRandom: return "uniform-random";
    case DelayKind::FifoPerEdge: return "fifo-per-edge";
    case DelayKind::ReorderAdversary: return "reorder-adversary";
    case DelayKind::RegionStall: return "region-stall";
  }
  return "?";
}

std::uint64_t Metrics::edge_sum() const {
  std::uint64_t s = 0;
  for (auto v : per_edge) s += v;
  return s;
}

Metrics& Metrics::operator+=(const Metrics& other) {
  if (per_edge.size() < other.per_edge.size()) per_edge.resize(other.per_edge.size(), 0);
  for (std::size_t i = 0; i < other.per_edge.size(); ++i) per_edge[i] += other.per_edge[i];
  for (std::size_t k = 0; k < kKindCount; ++k) per_kind[k] += other.per_kind[k];
  total += other.total;
  max_payload_bits = std::max(max_payload_bits, other.max_payload_bits);
  return *this;
}

void write_trace(std::ostream& os, const Graph& g, const std::vector<TraceEntry>& trace) {
  for (const auto& t : trace)
    os << t.seq << ' ' << g.id(t.src).value << ' ' << g.id(t.dst).value << ' '
       << kind_name(t.kind) << '\n';
}

Simulator::Simulator(const Graph& g, SimOptions options)
    : g_(g),
      opt_(std::move(options)),
      widths_(FieldWidths::for_graph(g.n(), opt_.c)),
      budget_(congest_budget(std::max<std::size_t>(g.n(), 2), opt_.c)),
      delay_rng_(make_stream(opt_.seed, {stream::kDelay})) {
  if (opt_.event_cap == 0) {
    long double n = static_cast<long double>(std::max<std::size_t>(g.n(), 2));
    long double cap = 10.0L * n * n * n;
    opt_.event_cap = cap > 1e18L ? std::uint64_t{1'000'000'000'000'000'000ULL}
                                 : static_cast<std::uint64_t>(cap);
  }
  if (opt_.policy.kind == DelayKind::FifoPerEdge) fifo_last_.assign(2 * g.m(), 0);
  stalled_.assign(g.n(), 0);
  for (auto x : opt_.policy.stalled)
    if (x < g.n()) stalled_[x] = 1;
  metrics_.per_edge.assign(g.m(), 0);
}

std::uint64_t Simulator::delay(NodeIndex src, NodeIndex dst, EdgeIndex e) {
  const auto& p = opt_.policy;
  std::uniform_int_distribution<std::uint64_t> uni(1, std::max<std::uint64_t>(p.max_delay, 1));
  switch (p.kind) {
    case DelayKind::UniformRandom: return uni(delay_rng_);
    case DelayKind::FifoPerEdge: {
      std::size_t slot = 2 * std::size_t{e} + (src < dst ? 0 : 1);
      std::uint64_t t = std::max(now_ + uni(delay_rng_), fifo_last_[slot]);
      fifo_last_[slot] = t;
      return t - now_;
    }
    case DelayKind::ReorderAdversary: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double x = 1.0 - u(delay_rng_);  // (0, 1]
      double d = std::pow(x, -1.0 / p.tail_alpha);
      if (!(d < static_cast<double>(p.tail_cap))) return p.tail_cap;
      return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(d));
    }
    case DelayKind::RegionStall: {
      std::uint64_t d = uni(delay_rng_);
      return stalled_[dst] ? d * p.stall_factor : d;
    }
  }
  return 1;
}

void Simulator::send(NodeIndex src, NodeIndex dst, const Message& msg) {
  auto e = g_.find_edge(src, dst);
  if (!e)
    throw ModelViolation("node " + std::to_string(g_.id(src).value) + " sent " +
                         std::string(kind_name(msg.kind)) + " to non-neighbor " +
                         (dst < g_.n() ? std::to_string(g_.id(dst).value) : std::string("?")));
  unsigned bits = encoded_bits(msg, widths_);
  if (bits > budget_)
    throw CongestViolation(std::string(kind_name(msg.kind)) + " needs " + std::to_string(bits) +
                           " bits, budget " + std::to_string(budget_));
  metrics_.max_payload_bits = std::max(metrics_.max_payload_bits, bits);
  if (observer_) observer_(src, dst, msg);

  int copies = 1;
  auto k = static_cast<std::size_t>(msg.kind);
  ++sent_by_kind_[k];
  for (const auto& f : opt_.faults) {
    if (f.kind == msg.kind && f.occurrence == sent_by_kind_[k])
      copies = f.action == FaultAction::Drop ? 0 : 2;
  }
  for (int i = 0; i < copies; ++i)
    queue_.push(Envelope{now_ + delay(src, dst, *e), next_seq_++, src, dst, *e, msg});
}

SimResult Simulator::run(Protocol& protocol) {
  SimResult result;
  for (NodeIndex x = 0; x < g_.n(); ++x) {
    Outbox out(*this, x);
    protocol.on_wake(x, out);
  }
  while (!queue_.empty()) {
    if (result.deliveries >= opt_.event_cap)
      throw LivelockError("event cap " + std::to_string(opt_.event_cap) + " reached");
    Envelope env = queue_.top();
    queue_.pop();
    now_ = env.time;
    ++result.deliveries;
    ++metrics_.per_edge[env.edge];
    ++metrics_.per_kind[static_cast<std::size_t>(env.msg.kind)];
    ++metrics_.total;
    if (opt_.record_trace)
      result.trace.push_back(TraceEntry{env.seq, env.src, env.dst, env.msg.kind});
    Outbox out(*this, env.dst);
    protocol.on_message(env.dst, env.src, env.msg, out);
  }
  for (NodeIndex x = 0; x < g_.n(); ++x)
    if (!protocol.is_terminal(x)) result.non_terminal.push_back(x);
  result.final_time = now_;
  result.metrics = metrics_;
  return result;
}

}  // namespace kt1
