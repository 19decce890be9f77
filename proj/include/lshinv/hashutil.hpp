#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "lshinv/rng.hpp"

namespace lshinv {

/// Canonical byte-string hash value (the codomain of an amplified hash).
using HashKey = std::string;

/// FNV-1a 64-bit fingerprint of a byte string.
inline std::uint64_t fingerprint64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Incremental FNV-1a, for fingerprinting fixed-width part outputs without
/// materializing the key bytes. Feeding the same bytes in the same order
/// yields exactly fingerprint64 of the serialized key.
struct Fnv64 {
  std::uint64_t h = 0xcbf29ce484222325ull;

  void add_byte(std::uint8_t c) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  void add_u64_le(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
};

inline constexpr std::uint64_t kMersenne61 = (1ull << 61) - 1;

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p) & kMersenne61;
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  if (s >= kMersenne61) s -= kMersenne61;
  return s;
}

/// One member of the multiply-mod-prime family x -> ((a*x + b) mod p) mod m
/// with p = 2^61 - 1. Pairwise independent on [p); used both as the chain
/// re-randomizer of the inversion tables and, applied to key fingerprints,
/// as the universal hash into small bucket spaces.
class MulModHash {
 public:
  MulModHash() = default;
  MulModHash(std::uint64_t a, std::uint64_t b, std::uint64_t m)
      : a_(a), b_(b), m_(m) {}

  static MulModHash sample(SplitMix64& rng, std::uint64_t m) {
    std::uint64_t a = 1 + rng.next_below(kMersenne61 - 1);
    std::uint64_t b = rng.next_below(kMersenne61);
    return MulModHash(a, b, m);
  }

  std::uint64_t operator()(std::uint64_t x) const {
    std::uint64_t v = mulmod61(a_, x >= kMersenne61 ? x % kMersenne61 : x);
    v += b_;
    if (v >= kMersenne61) v -= kMersenne61;
    return v % m_;
  }

  std::uint64_t a() const { return a_; }
  std::uint64_t b() const { return b_; }
  std::uint64_t modulus() const { return m_; }

 private:
  std::uint64_t a_ = 1;
  std::uint64_t b_ = 0;
  std::uint64_t m_ = 1;
};

/// Universal hash from byte-string keys to [m]: multiply-mod-prime applied to
/// a 64-bit fingerprint of the key. Fingerprint collisions cost time, never
/// correctness; callers verify candidates against the exact key.
class UniversalHash {
 public:
  UniversalHash() = default;
  UniversalHash(std::uint64_t a, std::uint64_t b, std::uint64_t m) : cw_(a, b, m) {}

  static UniversalHash sample(SplitMix64& rng, std::uint64_t m) {
    UniversalHash u;
    u.cw_ = MulModHash::sample(rng, m);
    return u;
  }

  std::uint64_t operator()(std::string_view key) const {
    return cw_(fingerprint64(key));
  }
  std::uint64_t apply_fingerprint(std::uint64_t fp) const { return cw_(fp); }

  std::uint64_t a() const { return cw_.a(); }
  std::uint64_t b() const { return cw_.b(); }
  std::uint64_t modulus() const { return cw_.modulus(); }

 private:
  MulModHash cw_;
};

}  // namespace lshinv
