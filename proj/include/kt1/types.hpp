#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kt1 {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

inline constexpr NodeIndex kNoNode = ~NodeIndex{0};

struct NodeId {
  std::uint64_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

struct EdgeName {
  std::uint64_t value = 0;
  auto operator<=>(const EdgeName&) const = default;
};

// Lexicographic on (base, tiebreak). The tiebreak is the edge name, which orders
// pairs (low id, high id) the same way a tuple comparison would.
struct Weight {
  std::uint64_t base = 0;
  EdgeName tiebreak;
  auto operator<=>(const Weight&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidEdge : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ceil(log2 x) for x >= 1
unsigned ceil_log2(std::uint64_t x);

// max(ceil(log2 n), 2): the word unit every field width is derived from
unsigned word_unit(std::uint64_t n);

// ceil(c * log2 n), at least 1
unsigned c_log_n(std::uint64_t n, unsigned c);

}  // namespace kt1
