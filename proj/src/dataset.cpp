#include "lshinv/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lshinv/io.hpp"
#include "lshinv/rng.hpp"

namespace lshinv {

namespace {

constexpr std::uint16_t kFormatVersion = 1;
constexpr int kFarResampleCap = 1000;

// Seed stream tags for the generator's independent substreams.
enum : std::uint64_t { kTagQuery = 1, kTagPlanted = 2, kTagFar = 3, kTagIndex = 4 };

void fill_random_bits(std::span<std::uint64_t> words, std::uint32_t dim,
                      SplitMix64& rng) {
  for (auto& w : words) w = rng.next();
  std::uint32_t tail = dim & 63u;
  if (tail != 0) words.back() &= (1ull << tail) - 1;  // padding bits never count
}

// Flips `count` distinct coordinates of p.
void flip_distinct_bits(Point& p, std::uint32_t count, SplitMix64& rng) {
  std::vector<std::uint32_t> picked;
  picked.reserve(count);
  while (picked.size() < count) {
    std::uint32_t c = static_cast<std::uint32_t>(rng.next_below(p.dim));
    bool dup = false;
    for (std::uint32_t q : picked) dup |= (q == c);
    if (!dup) {
      picked.push_back(c);
      p.flip_bit(c);
    }
  }
}

// Unit direction under the metric's norm: normalized Gaussian for l2,
// sign-flipped exponentials normalized by their sum for l1.
Eigen::VectorXd unit_direction(Metric metric, std::uint32_t dim, SplitMix64& rng) {
  Eigen::VectorXd v(dim);
  if (metric == Metric::euclidean) {
    for (std::uint32_t i = 0; i < dim; ++i) v[i] = rng.next_normal();
    double norm = v.norm();
    if (norm == 0) {
      v.setZero();
      v[0] = 1.0;
      return v;
    }
    return v / norm;
  }
  for (std::uint32_t i = 0; i < dim; ++i) {
    double mag = -std::log(rng.next_double_pos());
    v[i] = rng.next_bool(0.5) ? mag : -mag;
  }
  double norm = v.lpNorm<1>();
  if (norm == 0) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / norm;
}

void validate_spec(const PlantedSpec& spec) {
  if (spec.n < 1) throw InputError("planted spec: n must be >= 1");
  if (spec.dim < 1) throw InputError("planted spec: dimension must be >= 1");
  if (!(spec.approx > 1.0)) throw InputError("planted spec: approximation factor c must be > 1");
  if (!(spec.radius > 0.0)) throw InputError("planted spec: radius must be > 0");
  if (spec.metric == Metric::hamming) {
    if (spec.approx * spec.radius >= static_cast<double>(spec.dim))
      throw InputError("planted spec: infeasible geometry, c*r must be < d for Hamming");
  }
}

}  // namespace

Dataset::Dataset(Metric metric, std::uint32_t dim, std::uint64_t n,
                 std::uint64_t seed)
    : metric_(metric), dim_(dim), wpp_(words_per_point(dim)), n_(n), seed_(seed) {
  if (is_real_metric(metric)) {
    reals_.setZero(static_cast<Eigen::Index>(n), dim);
    wpp_ = 0;
  } else {
    words_.assign(n * wpp_, 0);
  }
}

Point Dataset::point(std::uint64_t j) const {
  Point p = Point::zeros(metric_, dim_);
  if (is_real_metric(metric_))
    p.coords = real_row(j).transpose();
  else {
    auto row = bit_row(j);
    p.words.assign(row.begin(), row.end());
  }
  return p;
}

double Dataset::distance_to(std::uint64_t j, const Point& q) const {
  if (q.metric != metric_ || q.dim != dim_)
    throw InputError("distance_to: query does not match dataset metric/dimension");
  switch (metric_) {
    case Metric::hamming:
      return hamming_distance(bit_row(j), q.words);
    case Metric::euclidean:
      return (real_row(j).transpose() - q.coords).norm();
    case Metric::manhattan:
      return (real_row(j).transpose() - q.coords).lpNorm<1>();
  }
  throw InputError("unknown metric tag");
}

std::size_t Dataset::footprint_bytes() const {
  return words_.size() * sizeof(std::uint64_t) +
         static_cast<std::size_t>(reals_.size()) * sizeof(double);
}

bool Dataset::operator==(const Dataset& other) const {
  if (metric_ != other.metric_ || dim_ != other.dim_ || n_ != other.n_ ||
      seed_ != other.seed_)
    return false;
  if (words_ != other.words_) return false;
  if (reals_.size() != other.reals_.size()) return false;
  for (Eigen::Index i = 0; i < reals_.size(); ++i)
    if (reals_.data()[i] != other.reals_.data()[i]) return false;
  return true;
}

PlantedInstance generate_planted(const PlantedSpec& spec) {
  validate_spec(spec);
  const double far_radius = spec.approx * spec.radius;

  PlantedInstance out;
  out.dataset = Dataset(spec.metric, spec.dim, spec.n, spec.seed);
  Dataset& ds = out.dataset;

  SplitMix64 qrng(seed_mix(spec.seed, kTagQuery));
  Point q = Point::zeros(spec.metric, spec.dim);
  if (spec.metric == Metric::hamming) {
    fill_random_bits(q.words, spec.dim, qrng);
  } else {
    for (std::uint32_t i = 0; i < spec.dim; ++i) q.coords[i] = qrng.next_normal();
  }

  SplitMix64 irng(seed_mix(spec.seed, kTagIndex));
  out.planted_index = irng.next_below(spec.n);

  // Planted point: within `radius` of q. For Hamming, q with exactly
  // floor(radius) distinct bits flipped; for real metrics, q plus a unit
  // direction scaled to radius * beta with beta in [1/2, 1).
  {
    SplitMix64 prng(seed_mix(spec.seed, kTagPlanted));
    Point planted = q;
    if (spec.metric == Metric::hamming) {
      std::uint32_t flips = static_cast<std::uint32_t>(std::floor(spec.radius));
      flip_distinct_bits(planted, flips, prng);
      auto row = ds.bit_row(out.planted_index);
      std::copy(planted.words.begin(), planted.words.end(), row.begin());
    } else {
      double beta = 0.5 + 0.5 * prng.next_double();
      planted.coords += unit_direction(spec.metric, spec.dim, prng) *
                        (spec.radius * beta);
      ds.real_row(out.planted_index) = planted.coords.transpose();
    }
  }

  // Far points: everything else at distance > c*r from q. Hamming points are
  // resampled uniformly until far enough; real points sit on the metric's
  // sphere of radius 2*c*r around q, pushed outward by a radial perturbation
  // in [1, 2).
  for (std::uint64_t j = 0; j < spec.n; ++j) {
    if (j == out.planted_index) continue;
    SplitMix64 frng(seed_mix(spec.seed, kTagFar, j));
    bool placed = false;
    for (int attempt = 0; attempt < kFarResampleCap && !placed; ++attempt) {
      if (spec.metric == Metric::hamming) {
        auto row = ds.bit_row(j);
        fill_random_bits(row, spec.dim, frng);
        placed = hamming_distance(row, q.words) > far_radius;
      } else {
        double stretch = 1.0 + frng.next_double();
        Eigen::VectorXd cand =
            q.coords + unit_direction(spec.metric, spec.dim, frng) *
                           (2.0 * far_radius * stretch);
        ds.real_row(j) = cand.transpose();
        placed = ds.distance_to(j, q) > far_radius;
      }
    }
    if (!placed)
      throw InputError("planted spec: could not place a far point within the resample cap");
  }

  out.query = std::move(q);
  return out;
}

std::pair<Point, std::uint64_t> plant_query(const Dataset& ds, double radius,
                                            std::uint64_t seed) {
  if (ds.size() == 0) throw InputError("plant_query: empty dataset");
  if (!(radius > 0)) throw InputError("plant_query: radius must be > 0");
  SplitMix64 rng(seed_mix(seed, 0x71c9));
  std::uint64_t j = rng.next_below(ds.size());
  Point q = ds.point(j);
  if (ds.metric() == Metric::hamming) {
    std::uint32_t flips = static_cast<std::uint32_t>(
        std::min(std::floor(radius), static_cast<double>(ds.dim())));
    flip_distinct_bits(q, flips, rng);
  } else {
    double beta = 0.5 + 0.5 * rng.next_double();
    q.coords += unit_direction(ds.metric(), ds.dim(), rng) * (radius * beta);
  }
  return {std::move(q), j};
}

std::string save_dataset_bytes(const Dataset& ds) {
  ByteWriter w;
  w.bytes("ANNI");
  w.u16(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(ds.metric()));
  w.u8(0);
  w.u64(ds.size());
  w.u32(ds.dim());
  w.u64(ds.seed());
  if (is_real_metric(ds.metric())) {
    for (std::uint64_t j = 0; j < ds.size(); ++j) {
      auto row = ds.real_row(j);
      for (std::uint32_t i = 0; i < ds.dim(); ++i) w.f64(row[i]);
    }
  } else {
    for (std::uint64_t j = 0; j < ds.size(); ++j)
      for (std::uint64_t word : ds.bit_row(j)) w.u64(word);
  }
  return w.take();
}

namespace {

// Shared envelope parser for ANNI / ANNQ. Returns (metric, n, dim, seed).
struct Envelope {
  Metric metric;
  std::uint64_t n;
  std::uint32_t dim;
  std::uint64_t seed;
};

Envelope read_envelope(ByteReader& r, std::string_view magic, const std::string& what) {
  r.expect_magic(magic, what);
  std::size_t at = r.offset();
  std::uint16_t version = r.u16();
  if (version != kFormatVersion)
    throw FormatError("unsupported " + what + " format version " +
                          std::to_string(version),
                      at);
  at = r.offset();
  std::uint8_t metric_tag = r.u8();
  if (metric_tag > 2) throw FormatError("invalid metric tag", at);
  at = r.offset();
  if (r.u8() != 0) throw FormatError("nonzero reserved byte", at);
  Envelope e;
  e.metric = static_cast<Metric>(metric_tag);
  e.n = r.u64();
  at = r.offset();
  e.dim = r.u32();
  if (e.dim == 0) throw FormatError("zero dimension", at);
  e.seed = r.u64();
  return e;
}

void check_tail_bits(std::span<const std::uint64_t> words, std::uint32_t dim,
                     std::size_t offset) {
  std::uint32_t tail = dim & 63u;
  if (tail != 0 && (words.back() & ~((1ull << tail) - 1)) != 0)
    throw FormatError("nonzero padding bits in bit-packed point", offset);
}

}  // namespace

Dataset load_dataset_bytes(std::string_view bytes, const std::string& what) {
  ByteReader r(bytes);
  Envelope e = read_envelope(r, "ANNI", what);
  if (e.n == 0) throw FormatError("dataset with zero points", 8);
  Dataset ds(e.metric, e.dim, e.n, e.seed);
  if (is_real_metric(e.metric)) {
    for (std::uint64_t j = 0; j < e.n; ++j) {
      auto row = ds.real_row(j);
      for (std::uint32_t i = 0; i < e.dim; ++i) row[i] = r.f64();
    }
  } else {
    for (std::uint64_t j = 0; j < e.n; ++j) {
      std::size_t at = r.offset();
      auto row = ds.bit_row(j);
      for (auto& word : row) word = r.u64();
      check_tail_bits(row, e.dim, at);
    }
  }
  r.expect_end(what);
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  write_file(path, save_dataset_bytes(ds));
}

Dataset load_dataset(const std::string& path) { return load_dataset_bytes(read_file(path)); }

std::string save_query_bytes(const Point& q, std::uint64_t planted_index,
                             std::uint64_t seed) {
  ByteWriter w;
  w.bytes("ANNQ");
  w.u16(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(q.metric));
  w.u8(0);
  w.u64(1);
  w.u32(q.dim);
  w.u64(seed);
  if (is_real_metric(q.metric))
    for (std::uint32_t i = 0; i < q.dim; ++i) w.f64(q.coords[i]);
  else
    for (std::uint64_t word : q.words) w.u64(word);
  w.u64(planted_index);
  return w.take();
}

std::pair<Point, std::uint64_t> load_query_bytes(std::string_view bytes) {
  ByteReader r(bytes);
  Envelope e = read_envelope(r, "ANNQ", "query");
  if (e.n != 1) throw FormatError("query file must contain exactly one point", 8);
  Point q = Point::zeros(e.metric, e.dim);
  if (is_real_metric(e.metric)) {
    for (std::uint32_t i = 0; i < e.dim; ++i) q.coords[i] = r.f64();
  } else {
    std::size_t at = r.offset();
    for (auto& word : q.words) word = r.u64();
    check_tail_bits(q.words, e.dim, at);
  }
  std::uint64_t planted = r.u64();
  r.expect_end("query");
  return {std::move(q), planted};
}

void save_query(const Point& q, std::uint64_t planted_index, std::uint64_t seed,
                const std::string& path) {
  write_file(path, save_query_bytes(q, planted_index, seed));
}

std::pair<Point, std::uint64_t> load_query(const std::string& path) {
  return load_query_bytes(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace lshinv
