#include "kt1/message.hpp"

#include <bit>
#include <string>

namespace kt1 {

namespace {

using enum Field;

constexpr Field kNone[] = {Bit};  // placeholder, never used with size

struct LayoutEntry {
  const Field* fields;
  std::size_t size;
};

template <std::size_t N>
constexpr LayoutEntry entry(const Field (&a)[N]) {
  return {a, N};
}
constexpr LayoutEntry empty_entry() { return {kNone, 0}; }

constexpr Field kDegReply[] = {Bit};
constexpr Field kExpand[] = {Counter};
constexpr Field kQueryBcast[] = {Id, Small, Base, Name};
constexpr Field kTagOnly[] = {Id};
constexpr Field kHashBcast[] = {Id, Coef, Coef, Bit};
constexpr Field kVecUp[] = {Id, Vec};
constexpr Field kIndexBcast[] = {Id, Index};
constexpr Field kTagName[] = {Id, Name};
constexpr Field kVerifyUp[] = {Id, Small, Base};
constexpr Field kResultBcast[] = {Id, Name, Small};
constexpr Field kResultUp[] = {Id, Small};
constexpr Field kSendTrigger[] = {Id, Vec, Counter};
constexpr Field kTagCounter[] = {Id, Counter};
constexpr Field kCounterOnly[] = {Counter};
constexpr Field kRejectedLower[] = {Id, Bit};
constexpr Field kGhsConnect[] = {Counter, Counter};
constexpr Field kGhsInitiate[] = {Counter, Base, Name, Bit, Counter};
constexpr Field kGhsTest[] = {Counter, Base, Name, Counter};
constexpr Field kGhsReport[] = {Bit, Base, Name, Counter};

constexpr std::array<LayoutEntry, kKindCount> kLayouts = [] {
  std::array<LayoutEntry, kKindCount> t{};
  for (auto& e : t) e = empty_entry();
  auto set = [&](Kind k, LayoutEntry e) { t[static_cast<std::size_t>(k)] = e; };
  set(Kind::DegReply, entry(kDegReply));
  set(Kind::Expand, entry(kExpand));
  set(Kind::QueryBcast, entry(kQueryBcast));
  set(Kind::QueryUp, entry(kTagOnly));
  set(Kind::HashBcast, entry(kHashBcast));
  set(Kind::VecUp, entry(kVecUp));
  set(Kind::IndexBcast, entry(kIndexBcast));
  set(Kind::NameUp, entry(kTagName));
  set(Kind::VerifyBcast, entry(kTagName));
  set(Kind::VerifyUp, entry(kVerifyUp));
  set(Kind::ResultBcast, entry(kResultBcast));
  set(Kind::ResultUp, entry(kResultUp));
  set(Kind::SendTrigger, entry(kSendTrigger));
  set(Kind::Trigger, entry(kTagCounter));
  set(Kind::RankRequest, entry(kCounterOnly));
  set(Kind::RankUp, entry(kCounterOnly));
  set(Kind::Proceed, entry(kCounterOnly));
  set(Kind::Connect, entry(kTagCounter));
  set(Kind::Accept, entry(kTagCounter));
  set(Kind::IdentityUpdate, entry(kTagCounter));
  set(Kind::ExpandID, entry(kTagCounter));
  set(Kind::AcceptID, entry(kTagOnly));
  set(Kind::RejectedLowerID, entry(kRejectedLower));
  set(Kind::RejectSameTree, entry(kTagOnly));
  set(Kind::GhsConnect, entry(kGhsConnect));
  set(Kind::GhsInitiate, entry(kGhsInitiate));
  set(Kind::GhsTest, entry(kGhsTest));
  set(Kind::GhsAccept, entry(kCounterOnly));
  set(Kind::GhsReject, entry(kCounterOnly));
  set(Kind::GhsReport, entry(kGhsReport));
  set(Kind::GhsChangeRoot, entry(kCounterOnly));
  set(Kind::GhsHalt, entry(kCounterOnly));
  return t;
}();

constexpr std::array<std::string_view, kKindCount> kNames = {
    "Star",          "LowDegree",      "LowDegreeAck",  "DegQuery",    "DegReply",
    "Expand",        "DoneByAccept",   "DoneByReject",  "QueryBcast",  "QueryUp",
    "HashBcast",     "VecUp",          "IndexBcast",    "NameUp",      "VerifyBcast",
    "VerifyUp",      "ResultBcast",    "ResultUp",      "SendTrigger", "Trigger",
    "RankRequest",   "RankUp",         "Proceed",       "Connect",     "Accept",
    "Done",          "IdentityUpdate", "MstTerminate",  "ExpandID",    "AcceptID",
    "RejectedLowerID", "RejectSameTree", "GhsConnect",  "GhsInitiate", "GhsTest",
    "GhsAccept",     "GhsReject",      "GhsReport",     "GhsChangeRoot", "GhsHalt"};

}  // namespace

std::string_view kind_name(Kind k) { return kNames[static_cast<std::size_t>(k)]; }

bool is_ghs_kind(Kind k) { return k >= Kind::GhsConnect && k <= Kind::GhsHalt; }

Message Message::make(Kind k, std::initializer_list<std::uint64_t> fields) {
  Message m;
  m.kind = k;
  std::size_t i = 0;
  for (auto v : fields) m.f.at(i++) = v;
  return m;
}

FieldWidths FieldWidths::for_graph(std::uint64_t n, unsigned c) {
  FieldWidths w;
  unsigned L = word_unit(n);
  unsigned b = c * L;
  unsigned l = c_log_n(n, 2 * c);
  w.id = b;
  w.name = 2 * b;
  w.base = b + 1;
  w.coef = 2 * b + 1;  // the field prime lies in (2^{2b}, 2^{2b+1})
  w.vec = l + 1;
  w.index = static_cast<unsigned>(std::bit_width(l));
  w.counter = 2 * L;
  return w;
}

unsigned FieldWidths::width(Field f) const {
  switch (f) {
    case Id: return id;
    case Name: return name;
    case Base: return base;
    case Coef: return coef;
    case Vec: return vec;
    case Index: return index;
    case Counter: return counter;
    case Small: return 2;
    case Bit: return 1;
  }
  return 0;
}

std::span<const Field> layout(Kind k) {
  auto e = kLayouts[static_cast<std::size_t>(k)];
  return {e.fields, e.size};
}

std::uint64_t congest_budget(std::uint64_t n, unsigned c) { return 8ULL * c * word_unit(n); }

unsigned encoded_bits(const Message& m, const FieldWidths& w) {
  if (static_cast<std::size_t>(m.kind) >= kKindCount) throw CongestViolation("bad message kind");
  unsigned bits = kTagBits;
  auto fields = layout(m.kind);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    unsigned width = w.width(fields[i]);
    if (width < 64 && (m.f[i] >> width) != 0)
      throw CongestViolation(std::string(kind_name(m.kind)) + " field " + std::to_string(i) +
                             " value " + std::to_string(m.f[i]) + " exceeds " +
                             std::to_string(width) + " bits");
    bits += width;
  }
  return bits;
}

std::vector<std::uint8_t> encode(const Message& m, const FieldWidths& w) {
  unsigned total = encoded_bits(m, w);
  std::vector<std::uint8_t> out((total + 7) / 8, 0);
  unsigned pos = 0;
  auto put = [&](std::uint64_t v, unsigned width) {
    for (unsigned i = 0; i < width; ++i, ++pos)
      if ((v >> i) & 1U) out[pos / 8] |= static_cast<std::uint8_t>(1U << (pos % 8));
  };
  put(static_cast<std::uint64_t>(m.kind), kTagBits);
  auto fields = layout(m.kind);
  for (std::size_t i = 0; i < fields.size(); ++i) put(m.f[i], w.width(fields[i]));
  return out;
}

Message decode(std::span<const std::uint8_t> bytes, const FieldWidths& w) {
  unsigned pos = 0;
  auto get = [&](unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i, ++pos) {
      if (pos / 8 >= bytes.size()) throw CongestViolation("truncated message");
      if ((bytes[pos / 8] >> (pos % 8)) & 1U) v |= std::uint64_t{1} << i;
    }
    return v;
  };
  Message m;
  auto tag = get(kTagBits);
  if (tag >= kKindCount) throw CongestViolation("bad message kind");
  m.kind = static_cast<Kind>(tag);
  auto fields = layout(m.kind);
  for (std::size_t i = 0; i < fields.size(); ++i) m.f[i] = get(w.width(fields[i]));
  return m;
}

}  // namespace kt1
