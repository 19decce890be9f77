#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lshinv/hashutil.hpp"
#include "lshinv/inversion.hpp"

namespace lshinv {

/// A function [N] -> D whose full preimages the inverter recovers. `key`
/// returns the canonical byte-string value; `fingerprint` is a fast 64-bit
/// digest of the same bytes (the structure only ever hashes fingerprints;
/// digest collisions are screened out by exact key verification).
class KeyFn {
 public:
  virtual ~KeyFn() = default;
  virtual HashKey key(std::uint64_t j) const = 0;
  virtual std::uint64_t fingerprint(std::uint64_t j) const {
    return fingerprint64(key(j));
  }
};

struct AllInverterConfig {
  /// "A": each size-guess level kappa holds A * kappa * ceil(ln N) sets.
  std::uint32_t sets_per_unit = 8;
  /// "C2": levels stop at the largest power of two below N / (C2 * log2 N);
  /// larger preimages fall back to a full domain scan.
  std::uint32_t fallback_divisor = 4;
  /// Optional extra cap on the largest level built (0 = none). Lowering it
  /// trades structure size for more fallback scans on huge preimages.
  std::uint32_t max_kappa = 0;
  /// Reuse one collection of sample sets for every function instead of
  /// drawing fresh sets per function. Per-function bucket hashes and chain
  /// tables are always fresh.
  bool shared_samples = false;
  std::uint32_t resample_attempts = 100;
};

/// Space envelope: stored entries <= C * (N + N*R/sigma) * log2(N)^3.
constexpr double kAllInversionSpaceConstant = 4.0;
/// Build envelope: f-evaluations <= C' * N * R * log2(N)^3.
constexpr double kAllInversionBuildConstant = 4.0;
/// Query envelope: f-evaluations <= B' * sigma^3 * log2(N)^3 * (1 + |preimage|),
/// except when the fallback scan triggers (then <= N + prior work).
constexpr double kAllInversionQueryConstant = 256.0;

/// Recovers the full preimage of any of R functions f_1..f_R: [N] -> D.
///
/// For each function and each preimage-size guess kappa = 2, 4, ..., the
/// structure holds sets drawn by keeping every domain element independently
/// with probability 1/kappa (resampled until the size lands in
/// [N/(2 kappa), 2N/kappa]). Each set carries a universal bucket hash into
/// [|set|] and a chain-table inverter for the composed map
/// x -> bucket_hash(f(set[x])). Queries guess kappa = 2 and double the guess
/// while at least kappa distinct verified preimage elements have been found;
/// past the largest level they scan the domain directly.
///
/// Immutable after build; queries are read-only and safe concurrently.
class AllInverter {
 public:
  struct FnSet {
    std::uint32_t pool_index = 0;  // which sample array in the pool
    UniversalHash bucket_hash;
    InversionTable table;
  };
  struct FnLevel {
    std::uint32_t kappa = 0;
    std::vector<FnSet> sets;
  };

  std::uint64_t domain_size() const { return domain_; }
  std::uint32_t function_count() const { return function_count_; }
  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  const AllInverterConfig& config() const { return config_; }
  std::uint32_t kappa_max() const { return kappa_max_; }

  const std::vector<FnLevel>& levels(std::size_t fn_index) const;
  std::uint32_t pool_size() const { return static_cast<std::uint32_t>(pool_.size()); }
  const std::vector<std::uint32_t>& sample_array(std::uint32_t pool_index) const {
    return pool_[pool_index];
  }

  std::uint64_t stored_entries() const;
  std::size_t footprint_bytes() const;

  /// Fault-injection hook: empties every chain table so lookups find
  /// nothing. Completeness checks must then fail; used by the self-test.
  void corrupt_for_testing();

 private:
  friend struct AllInverterAccess;

  std::uint64_t domain_ = 0;
  std::uint32_t function_count_ = 0;
  double sigma_ = 1;
  std::uint64_t seed_ = 0;
  AllInverterConfig config_;
  std::uint32_t kappa_max_ = 0;  // 0 = no levels, everything falls back
  std::vector<std::vector<std::uint32_t>> pool_;   // sorted sample arrays
  std::vector<std::vector<FnLevel>> functions_;    // [R] x levels
};

struct AllInvertBuildStats {
  std::uint64_t f_evals = 0;
  std::uint64_t stored_entries = 0;
};

/// Builds the structure for fs[0..R-1], all over domain [N], with space knob
/// sigma. Deterministic in seed. Requires N >= 1, R >= 1, 1 <= sigma <= N.
AllInverter build_all_inverter(const std::vector<const KeyFn*>& fs, std::uint64_t N,
                               double sigma, std::uint64_t seed,
                               const AllInverterConfig& config = {},
                               AllInvertBuildStats* stats = nullptr);

struct InvertStats {
  std::uint64_t f_evals = 0;
  bool fallback = false;
};

/// Returns a sorted set of domain indices mapping to `target` under function
/// fn_index. Always a subset of the true preimage (every element is verified
/// against the exact key); equals it with high probability. The caller must
/// pass the same function the structure was built for.
std::vector<std::uint64_t> invert_all(const AllInverter& inv, std::size_t fn_index,
                                      const KeyFn& f, const HashKey& target,
                                      InvertStats* stats = nullptr);

/// Exact preimage by full scan; O(N) evaluations. Also the test oracle.
std::vector<std::uint64_t> brute_preimage(const KeyFn& f, std::uint64_t N,
                                          const HashKey& target,
                                          std::uint64_t* f_evals = nullptr);

struct CheckedInvert {
  std::vector<std::uint64_t> result;
  std::vector<std::uint64_t> exact;
  bool sound = false;  // result is a subset of exact
  bool equal = false;
};

/// Runs the doubling query and the fallback scan side by side; for tests and
/// the self-test suites.
CheckedInvert invert_all_checked(const AllInverter& inv, std::size_t fn_index,
                                 const KeyFn& f, const HashKey& target);

std::string save_inverter_bytes(const AllInverter& inv);
AllInverter load_inverter_bytes(std::string_view bytes);
void save_inverter(const AllInverter& inv, const std::string& path);
AllInverter load_inverter(const std::string& path);

}  // namespace lshinv
