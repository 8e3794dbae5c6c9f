#include "kt1/sketch.hpp"

#include <bit>

namespace kt1 {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (x % q == 0) return x == q;
  }
  std::uint64_t d = x - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic for all 64-bit inputs
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t y = powmod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      y = mulmod(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime_above(std::uint64_t x) {
  std::uint64_t y = x + 1;
  while (!is_prime(y)) ++y;
  return y;
}

SketchParams SketchParams::for_graph(std::uint64_t n, unsigned c) {
  unsigned b = c * word_unit(n);
  if (2 * b > 62) throw ConfigError("n too large for 64-bit edge names at this c");
  SketchParams s;
  s.prime = next_prime_above(std::uint64_t{1} << (2 * b));
  s.l = c_log_n(n, 2 * c);
  if (s.l > 62) throw ConfigError("hash output width exceeds 62 bits");
  return s;
}

HashFn sample_hash(Rng& rng, const SketchParams& params) {
  std::uniform_int_distribution<std::uint64_t> da(1, params.prime - 1);
  std::uniform_int_distribution<std::uint64_t> db(0, params.prime - 1);
  HashFn h;
  h.a = da(rng);
  h.b = db(rng);
  h.p = params.prime;
  h.l = params.l;
  return h;
}

std::vector<HashFn> hash_family_sample(std::uint64_t seed, std::size_t count, std::uint64_t n,
                                       unsigned c) {
  auto params = SketchParams::for_graph(n, c);
  Rng rng(splitmix64(seed));
  std::vector<HashFn> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_hash(rng, params));
  return out;
}

unsigned ParityVector::lowest() const { return static_cast<unsigned>(std::countr_zero(bits)); }

std::uint64_t range_mask(std::uint64_t v, unsigned l) {
  // v < 2^i  <=>  i >= bit_width(v)
  auto t = static_cast<unsigned>(std::bit_width(v));
  std::uint64_t all = (l + 1 >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << (l + 1)) - 1;
  std::uint64_t below = t >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t) - 1;
  return all & ~below;
}

std::optional<std::pair<NodeId, NodeId>> split_name(std::uint64_t name, unsigned b) {
  std::uint64_t mask = (std::uint64_t{1} << b) - 1;
  std::uint64_t lo = name >> b;
  std::uint64_t hi = name & mask;
  if (lo == 0 || hi == 0 || lo >= hi || lo > mask) return std::nullopt;
  return std::pair{NodeId{lo}, NodeId{hi}};
}

std::optional<EdgeName> recover_single(unsigned, std::uint64_t xored, const Graph& g) {
  if (xored == 0) return std::nullopt;
  if (!g.edge_by_name(EdgeName{xored})) return std::nullopt;
  return EdgeName{xored};
}

}  // namespace kt1
