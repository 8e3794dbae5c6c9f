#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kt1/types.hpp"

namespace kt1 {

enum class Kind : std::uint8_t {
  // initialization and degree queries
  Star,
  LowDegree,
  LowDegreeAck,
  DegQuery,
  DegReply,
  // single-leader expansion
  Expand,
  DoneByAccept,
  DoneByReject,
  // tree operations
  QueryBcast,
  QueryUp,
  HashBcast,
  VecUp,
  IndexBcast,
  NameUp,
  VerifyBcast,
  VerifyUp,
  ResultBcast,
  ResultUp,
  SendTrigger,
  Trigger,
  // rank-synchronised merging
  RankRequest,
  RankUp,
  Proceed,
  Connect,
  Accept,
  Done,
  IdentityUpdate,
  MstTerminate,
  // multi-leader expansion
  ExpandID,
  AcceptID,
  RejectedLowerID,
  RejectSameTree,
  // GHS
  GhsConnect,
  GhsInitiate,
  GhsTest,
  GhsAccept,
  GhsReject,
  GhsReport,
  GhsChangeRoot,
  GhsHalt,
  Count
};

inline constexpr std::size_t kKindCount = static_cast<std::size_t>(Kind::Count);
inline constexpr unsigned kTagBits = 6;
static_assert(kKindCount <= (1u << kTagBits));

std::string_view kind_name(Kind k);
bool is_ghs_kind(Kind k);

struct Message {
  Kind kind = Kind::Star;
  std::array<std::uint64_t, 5> f{};

  static Message make(Kind k, std::initializer_list<std::uint64_t> fields = {});
};

enum class Field : std::uint8_t { Id, Name, Base, Coef, Vec, Index, Counter, Small, Bit };

// Bit widths of every field class for one (n, c).
struct FieldWidths {
  unsigned id = 0;
  unsigned name = 0;
  unsigned base = 0;
  unsigned coef = 0;
  unsigned vec = 0;
  unsigned index = 0;
  unsigned counter = 0;

  static FieldWidths for_graph(std::uint64_t n, unsigned c);
  unsigned width(Field f) const;
};

std::span<const Field> layout(Kind k);

std::uint64_t congest_budget(std::uint64_t n, unsigned c);

class CongestViolation : public Error {
 public:
  using Error::Error;
};

// Serialized size in bits; throws CongestViolation if a field value does not fit its width.
unsigned encoded_bits(const Message& m, const FieldWidths& w);
std::vector<std::uint8_t> encode(const Message& m, const FieldWidths& w);
Message decode(std::span<const std::uint8_t> bytes, const FieldWidths& w);

}  // namespace kt1
