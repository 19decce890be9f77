#pragma once

#include <cmath>
#include <cstdint>

namespace lshinv {

/// Deterministic 64-bit generator (SplitMix64). The algorithm is fixed so a
/// seed reproduces the same stream on every platform; all randomness in the
/// library flows through this type.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound), bound >= 1. Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t v = next();
      if (v >= threshold) return v % bound;
    }
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1].
  double next_double_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  bool next_bool(double p) { return next_double() < p; }

  /// Standard normal via Box-Muller. One value per call; the pair partner is
  /// discarded so the stream position stays a simple function of call count.
  double next_normal() {
    double u1 = next_double_pos();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.28318530717958647692 * u2);
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent child seed from a parent seed and tag words, so
/// every substructure gets its own reproducible stream regardless of build
/// order.
inline std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t tag) {
  SplitMix64 g(seed);
  SplitMix64 h(g.next() ^ (tag * 0xff51afd7ed558ccdull + 0x2545f4914f6cdd1dull));
  return h.next();
}

template <typename... Tags>
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t tag, std::uint64_t tag2,
                       Tags... rest) {
  return seed_mix(seed_mix(seed, tag), tag2, rest...);
}

}  // namespace lshinv
