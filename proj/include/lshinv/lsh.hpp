#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "lshinv/dataset.hpp"
#include "lshinv/hashutil.hpp"
#include "lshinv/point.hpp"
#include "lshinv/rng.hpp"

namespace lshinv {

/// Collision probabilities of a hash family at the near and far radii.
/// p1 applies at distance <= radius, p2 at distance >= far_radius.
struct SensitivityProfile {
  double p1 = 0;
  double p2 = 0;
  double radius = 0;
  double far_radius = 0;

  double rho() const { return std::log(p1) / std::log(p2); }
};

enum class FamilyKind : std::uint8_t { bit_sampling = 0, pstable_euclidean = 1 };

/// A locality-sensitive hash family together with its sensitivity profile.
/// Two families are provided: bit sampling over Hamming space, and bucketed
/// random projections (floor((<a,x>+b)/w) with Gaussian a) over Euclidean
/// space.
struct LshFamily {
  FamilyKind kind = FamilyKind::bit_sampling;
  std::uint32_t dim = 0;
  double radius = 0;
  double approx = 0;
  double bucket_width = 0;  // pstable only
  SensitivityProfile profile;

  static LshFamily bit_sampling(std::uint32_t dim, double r, double c);
  static LshFamily pstable_euclidean(std::uint32_t dim, double r, double c,
                                     double bucket_width);
  static LshFamily for_metric(Metric metric, std::uint32_t dim, double r, double c,
                              double bucket_width = 4.0);

  Metric metric() const {
    return kind == FamilyKind::bit_sampling ? Metric::hamming : Metric::euclidean;
  }
};

/// Collision probability of one bucketed-projection hash at distance `dist`,
/// computed by adaptive numeric integration (1e-9 absolute tolerance).
double pstable_collision_probability(double dist, double bucket_width);

/// One concatenated hash: `part_count` base hashes evaluated in order, their
/// outputs serialized fixed-width little-endian into a canonical byte key.
/// Bit-sampling parts are one byte (0/1); projection parts are 8-byte int64.
class AmplifiedHash {
 public:
  FamilyKind kind() const { return kind_; }
  std::uint32_t part_count() const { return parts_; }
  std::uint32_t key_width() const {
    return parts_ * (kind_ == FamilyKind::bit_sampling ? 1 : 8);
  }

  HashKey eval(const Point& x) const;
  void eval_into(const Point& x, char* out) const;
  std::uint64_t eval_fingerprint(const Point& x) const;

  HashKey eval_row(const Dataset& ds, std::uint64_t j) const;
  void eval_row_into(const Dataset& ds, std::uint64_t j, char* out) const;
  std::uint64_t eval_row_fingerprint(const Dataset& ds, std::uint64_t j) const;

  std::size_t footprint_bytes() const;

 private:
  friend class HashBattery;
  friend AmplifiedHash sample_amplified(const LshFamily&, std::uint32_t, SplitMix64&);

  FamilyKind kind_ = FamilyKind::bit_sampling;
  std::uint32_t dim_ = 0;
  std::uint32_t parts_ = 0;
  std::vector<std::uint32_t> coords_;  // bit sampling: sampled coordinate per part
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      projections_;            // pstable: parts x dim
  Eigen::VectorXd offsets_;    // pstable: parts
  double bucket_width_ = 0;
};

/// Samples one amplified hash of `parts` independent base hashes.
AmplifiedHash sample_amplified(const LshFamily& family, std::uint32_t parts,
                               SplitMix64& rng);

/// Concatenation length: smallest k with p2^k <= 1/n, i.e. ceil(log_{1/p2} n).
std::uint32_t concat_length(std::uint64_t n, double p2);

/// Smallest R with (1 - p1^k)^R <= target_miss, k = concat_length(n, p2).
/// With `doubled`, returns 2R (used by the inverted index). Throws InputError
/// when p1^k underflows or R would be absurdly large.
std::uint32_t repetition_count(std::uint64_t n, const SensitivityProfile& profile,
                               double target_miss = 0.1, bool doubled = false);

/// The repetition battery: R independently seeded amplified hashes.
/// Immutable after build; evaluation is pure, safe for concurrent callers.
class HashBattery {
 public:
  HashBattery() = default;

  const SensitivityProfile& profile() const { return profile_; }
  std::uint32_t repetitions() const { return static_cast<std::uint32_t>(hashes_.size()); }
  std::uint32_t concat() const { return concat_; }
  std::uint64_t seed() const { return seed_; }

  const AmplifiedHash& hash(std::size_t i) const;
  HashKey eval(std::size_t i, const Point& x) const { return hash(i).eval(x); }

  std::size_t footprint_bytes() const;

 private:
  friend HashBattery build_battery(std::uint64_t, const LshFamily&, std::uint64_t,
                                   double, bool);

  SensitivityProfile profile_;
  std::uint32_t concat_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<AmplifiedHash> hashes_;
};

HashBattery build_battery(std::uint64_t n, const LshFamily& family,
                          std::uint64_t seed, double target_miss = 0.1,
                          bool doubled = false);

}  // namespace lshinv
