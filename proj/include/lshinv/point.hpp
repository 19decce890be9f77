#pragma once

#include <Eigen/Core>
#include <bit>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lshinv/errors.hpp"

namespace lshinv {

enum class Metric : std::uint8_t { hamming = 0, euclidean = 1, manhattan = 2 };

const char* metric_name(Metric m);
Metric metric_from_name(std::string_view name);

inline bool is_real_metric(Metric m) { return m != Metric::hamming; }

inline std::uint32_t words_per_point(std::uint32_t dim) { return (dim + 63) / 64; }

/// A single point. Hamming points are bit-packed into 64-bit words with the
/// tail of the last word zeroed; Euclidean/Manhattan points are real vectors.
struct Point {
  Metric metric = Metric::hamming;
  std::uint32_t dim = 0;
  std::vector<std::uint64_t> words;
  Eigen::VectorXd coords;

  static Point zeros(Metric metric, std::uint32_t dim);

  bool bit(std::uint32_t i) const { return (words[i >> 6] >> (i & 63u)) & 1u; }
  void set_bit(std::uint32_t i, bool v) {
    std::uint64_t mask = 1ull << (i & 63u);
    if (v)
      words[i >> 6] |= mask;
    else
      words[i >> 6] &= ~mask;
  }
  void flip_bit(std::uint32_t i) { words[i >> 6] ^= 1ull << (i & 63u); }
};

inline double hamming_distance(std::span<const std::uint64_t> x,
                               std::span<const std::uint64_t> y) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::popcount(x[i] ^ y[i]);
  return static_cast<double>(acc);
}

/// d(x, y) under the tagged metric. Throws InputError on a metric or
/// dimension mismatch.
double distance(const Point& x, const Point& y);

}  // namespace lshinv
