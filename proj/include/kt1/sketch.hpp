#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kt1/graph.hpp"
#include "kt1/rng.hpp"

namespace kt1 {

bool is_prime(std::uint64_t x);
std::uint64_t next_prime_above(std::uint64_t x);

struct SketchParams {
  std::uint64_t prime = 0;  // smallest prime > 2^{2b}
  unsigned l = 0;           // output bits, ceil(2c log2 n)

  static SketchParams for_graph(std::uint64_t n, unsigned c);
};

struct HashFn {
  std::uint64_t a = 1;
  std::uint64_t b = 0;
  std::uint64_t p = 2;
  unsigned l = 1;

  std::uint64_t operator()(EdgeName x) const {
    auto v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * x.value + b) % p);
    return l >= 64 ? v : v & ((std::uint64_t{1} << l) - 1);
  }
};

HashFn sample_hash(Rng& rng, const SketchParams& params);
std::vector<HashFn> hash_family_sample(std::uint64_t seed, std::size_t count, std::uint64_t n,
                                       unsigned c);

// Bit i is the parity of edges hashing into [0, 2^i), i = 0..l.
struct ParityVector {
  std::uint64_t bits = 0;

  bool bit(unsigned i) const { return (bits >> i) & 1U; }
  bool zero() const { return bits == 0; }
  // smallest i with bit i set; requires !zero()
  unsigned lowest() const;
  ParityVector& operator^=(ParityVector o) {
    bits ^= o.bits;
    return *this;
  }
  friend ParityVector operator^(ParityVector a, ParityVector b) { return a ^= b; }
  bool operator==(const ParityVector&) const = default;
};

// Mask of the range bits an edge with hash value v toggles.
std::uint64_t range_mask(std::uint64_t v, unsigned l);

template <typename Pred>
ParityVector node_vector(const HashFn& h, std::span<const EdgeName> incident, Pred pass) {
  ParityVector out;
  for (auto e : incident)
    if (pass(e)) out.bits ^= range_mask(h(e), h.l);
  return out;
}

inline ParityVector node_vector(const HashFn& h, std::span<const EdgeName> incident) {
  return node_vector(h, incident, [](EdgeName) { return true; });
}

template <typename Pred>
std::uint64_t name_xor(const HashFn& h, unsigned i, std::span<const EdgeName> incident, Pred pass) {
  std::uint64_t acc = 0;
  for (auto e : incident)
    if (pass(e) && (i >= 64 || h(e) < (std::uint64_t{1} << i))) acc ^= e.value;
  return acc;
}

// Candidate edge from an aggregated name XOR, if it names an edge of g.
// The caller still has to check the candidate crosses the cut.
std::optional<EdgeName> recover_single(unsigned i, std::uint64_t xored, const Graph& g);

// Decodes an edge name into its endpoint IDs when it is well formed for bit width b.
std::optional<std::pair<NodeId, NodeId>> split_name(std::uint64_t name, unsigned b);

}  // namespace kt1
