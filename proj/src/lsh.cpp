#include "lshinv/lsh.hpp"

#include <cmath>
#include <cstring>

#include "lshinv/errors.hpp"

namespace lshinv {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double pstable_integrand(double t, double u) {
  return (2.0 / u) * normal_pdf(t / u);
}

// Adaptive Simpson on the collision integrand. The (1 - t/w) factor is
// linear, so it is folded in by integrating f(t)*(1 - t/w) directly.
struct PStableIntegrand {
  double u, w;
  double operator()(double t) const {
    return pstable_integrand(t, u) * (1.0 - t / w);
  }
};

double adaptive_simpson(const PStableIntegrand& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

}  // namespace

double pstable_collision_probability(double dist, double bucket_width) {
  if (!(bucket_width > 0)) throw InputError("bucket width must be > 0");
  if (dist < 0) throw InputError("distance must be >= 0");
  if (dist == 0) return 1.0;
  PStableIntegrand f{dist, bucket_width};
  double a = 0.0, b = bucket_width;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, 1e-9, 48);
}

LshFamily LshFamily::bit_sampling(std::uint32_t dim, double r, double c) {
  if (dim == 0) throw InputError("bit sampling: dimension must be >= 1");
  if (!(r > 0)) throw InputError("bit sampling: radius must be > 0");
  if (!(c > 1)) throw InputError("bit sampling: approximation factor must be > 1");
  if (c * r >= static_cast<double>(dim))
    throw InputError("bit sampling: c*r must be < d (far collision probability would be <= 0)");
  LshFamily fam;
  fam.kind = FamilyKind::bit_sampling;
  fam.dim = dim;
  fam.radius = r;
  fam.approx = c;
  fam.profile = {1.0 - r / dim, 1.0 - c * r / dim, r, c * r};
  return fam;
}

LshFamily LshFamily::pstable_euclidean(std::uint32_t dim, double r, double c,
                                       double bucket_width) {
  if (dim == 0) throw InputError("pstable: dimension must be >= 1");
  if (!(r > 0)) throw InputError("pstable: radius must be > 0");
  if (!(c > 1)) throw InputError("pstable: approximation factor must be > 1");
  if (!(bucket_width > 0)) throw InputError("pstable: bucket width must be > 0");
  LshFamily fam;
  fam.kind = FamilyKind::pstable_euclidean;
  fam.dim = dim;
  fam.radius = r;
  fam.approx = c;
  fam.bucket_width = bucket_width;
  fam.profile = {pstable_collision_probability(r, bucket_width),
                 pstable_collision_probability(c * r, bucket_width), r, c * r};
  return fam;
}

LshFamily LshFamily::for_metric(Metric metric, std::uint32_t dim, double r, double c,
                                double bucket_width) {
  switch (metric) {
    case Metric::hamming:
      return bit_sampling(dim, r, c);
    case Metric::euclidean:
      return pstable_euclidean(dim, r, c, bucket_width);
    case Metric::manhattan:
      throw InputError("no hash family provided for the Manhattan metric");
  }
  throw InputError("unknown metric tag");
}

AmplifiedHash sample_amplified(const LshFamily& family, std::uint32_t parts,
                               SplitMix64& rng) {
  AmplifiedHash h;
  h.kind_ = family.kind;
  h.dim_ = family.dim;
  h.parts_ = parts;
  if (family.kind == FamilyKind::bit_sampling) {
    h.coords_.resize(parts);
    for (auto& c : h.coords_) c = static_cast<std::uint32_t>(rng.next_below(family.dim));
  } else {
    h.projections_.resize(parts, family.dim);
    h.offsets_.resize(parts);
    h.bucket_width_ = family.bucket_width;
    for (std::uint32_t p = 0; p < parts; ++p) {
      for (std::uint32_t i = 0; i < family.dim; ++i)
        h.projections_(p, i) = rng.next_normal();
      h.offsets_[p] = rng.next_double() * family.bucket_width;
    }
  }
  return h;
}

namespace {

std::int64_t bucket_of(double proj, double offset, double width) {
  return static_cast<std::int64_t>(std::floor((proj + offset) / width));
}

}  // namespace

void AmplifiedHash::eval_into(const Point& x, char* out) const {
  if (kind_ == FamilyKind::bit_sampling) {
    for (std::uint32_t p = 0; p < parts_; ++p)
      out[p] = static_cast<char>(x.bit(coords_[p]) ? 1 : 0);
    return;
  }
  for (std::uint32_t p = 0; p < parts_; ++p) {
    double proj = projections_.row(p).dot(x.coords);
    std::uint64_t v = static_cast<std::uint64_t>(bucket_of(proj, offsets_[p], bucket_width_));
    std::memcpy(out + 8 * p, &v, 8);  // little-endian hosts only; asserted in CMake
  }
}

HashKey AmplifiedHash::eval(const Point& x) const {
  HashKey key(key_width(), '\0');
  eval_into(x, key.data());
  return key;
}

std::uint64_t AmplifiedHash::eval_fingerprint(const Point& x) const {
  Fnv64 f;
  if (kind_ == FamilyKind::bit_sampling) {
    for (std::uint32_t p = 0; p < parts_; ++p)
      f.add_byte(x.bit(coords_[p]) ? 1 : 0);
  } else {
    for (std::uint32_t p = 0; p < parts_; ++p) {
      double proj = projections_.row(p).dot(x.coords);
      f.add_u64_le(static_cast<std::uint64_t>(bucket_of(proj, offsets_[p], bucket_width_)));
    }
  }
  return f.h;
}

void AmplifiedHash::eval_row_into(const Dataset& ds, std::uint64_t j, char* out) const {
  if (kind_ == FamilyKind::bit_sampling) {
    auto row = ds.bit_row(j);
    for (std::uint32_t p = 0; p < parts_; ++p) {
      std::uint32_t c = coords_[p];
      out[p] = static_cast<char>((row[c >> 6] >> (c & 63u)) & 1u);
    }
    return;
  }
  auto row = ds.real_row(j);
  for (std::uint32_t p = 0; p < parts_; ++p) {
    double proj = projections_.row(p).dot(row);
    std::uint64_t v = static_cast<std::uint64_t>(bucket_of(proj, offsets_[p], bucket_width_));
    std::memcpy(out + 8 * p, &v, 8);
  }
}

HashKey AmplifiedHash::eval_row(const Dataset& ds, std::uint64_t j) const {
  HashKey key(key_width(), '\0');
  eval_row_into(ds, j, key.data());
  return key;
}

std::uint64_t AmplifiedHash::eval_row_fingerprint(const Dataset& ds,
                                                  std::uint64_t j) const {
  Fnv64 f;
  if (kind_ == FamilyKind::bit_sampling) {
    auto row = ds.bit_row(j);
    for (std::uint32_t p = 0; p < parts_; ++p) {
      std::uint32_t c = coords_[p];
      f.add_byte(static_cast<std::uint8_t>((row[c >> 6] >> (c & 63u)) & 1u));
    }
  } else {
    auto row = ds.real_row(j);
    for (std::uint32_t p = 0; p < parts_; ++p) {
      double proj = projections_.row(p).dot(row);
      f.add_u64_le(static_cast<std::uint64_t>(bucket_of(proj, offsets_[p], bucket_width_)));
    }
  }
  return f.h;
}

std::size_t AmplifiedHash::footprint_bytes() const {
  return coords_.size() * sizeof(std::uint32_t) +
         static_cast<std::size_t>(projections_.size()) * sizeof(double) +
         static_cast<std::size_t>(offsets_.size()) * sizeof(double);
}

std::uint32_t concat_length(std::uint64_t n, double p2) {
  if (n < 2) throw InputError("concat_length: n must be >= 2");
  if (!(p2 > 0.0) || p2 >= 1.0) throw InputError("concat_length: p2 must be in (0, 1)");
  double target = 1.0 / static_cast<double>(n);
  double ratio = std::log(static_cast<double>(n)) / std::log(1.0 / p2);
  std::uint32_t k = static_cast<std::uint32_t>(std::ceil(ratio));
  if (k < 1) k = 1;
  // Resolve floating-point ties right at the ceiling boundary.
  while (k > 1 && std::pow(p2, static_cast<double>(k - 1)) <= target) --k;
  while (std::pow(p2, static_cast<double>(k)) > target) ++k;
  return k;
}

std::uint32_t repetition_count(std::uint64_t n, const SensitivityProfile& profile,
                               double target_miss, bool doubled) {
  if (!(profile.p1 > 0.0) || profile.p1 > 1.0 || profile.p2 <= 0.0 ||
      profile.p2 >= 1.0 || profile.p1 <= profile.p2)
    throw InputError("repetition_count: invalid sensitivity profile");
  if (!(target_miss > 0.0) || target_miss >= 1.0)
    throw InputError("repetition_count: target miss must be in (0, 1)");
  std::uint32_t k = concat_length(n, profile.p2);
  double pk = std::pow(profile.p1, static_cast<double>(k));
  if (pk <= 0.0)
    throw InputError("repetition_count: infeasible parameters, p1^k underflows to 0");
  const double reps_cap = static_cast<double>(1ull << 31);
  std::uint64_t reps;
  if (pk >= 1.0) {
    reps = 1;
  } else {
    double raw = std::log(target_miss) / std::log1p(-pk);
    if (!(raw < reps_cap))
      throw InputError("repetition_count: infeasible parameters, repetition count too large");
    reps = static_cast<std::uint64_t>(std::ceil(raw));
    if (reps < 1) reps = 1;
    // Same boundary fix-up as concat_length: R is the smallest integer with
    // (1 - pk)^R <= target_miss.
    while (reps > 1 &&
           static_cast<double>(reps - 1) * std::log1p(-pk) <= std::log(target_miss))
      --reps;
    while (static_cast<double>(reps) * std::log1p(-pk) > std::log(target_miss)) ++reps;
  }
  if (doubled) reps *= 2;
  if (static_cast<double>(reps) > reps_cap)
    throw InputError("repetition_count: infeasible parameters, repetition count too large");
  return static_cast<std::uint32_t>(reps);
}

const AmplifiedHash& HashBattery::hash(std::size_t i) const {
  if (i >= hashes_.size()) throw InputError("battery hash index out of range");
  return hashes_[i];
}

std::size_t HashBattery::footprint_bytes() const {
  std::size_t total = 0;
  for (const auto& h : hashes_) total += h.footprint_bytes();
  return total;
}

HashBattery build_battery(std::uint64_t n, const LshFamily& family,
                          std::uint64_t seed, double target_miss, bool doubled) {
  // Degenerate single-point datasets still get a battery; the concatenation
  // length is planned as if n were 2.
  std::uint64_t n_eff = n < 2 ? 2 : n;
  HashBattery b;
  b.profile_ = family.profile;
  b.concat_ = concat_length(n_eff, family.profile.p2);
  b.seed_ = seed;
  std::uint32_t reps = repetition_count(n_eff, family.profile, target_miss, doubled);
  b.hashes_.reserve(reps);
  for (std::uint32_t i = 0; i < reps; ++i) {
    SplitMix64 rng(seed_mix(seed, 0xba77, i));
    b.hashes_.push_back(sample_amplified(family, b.concat_, rng));
  }
  return b;
}

}  // namespace lshinv
