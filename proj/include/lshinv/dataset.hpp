#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lshinv/point.hpp"

namespace lshinv {

/// An ordered point set with a fixed metric and dimension. Immutable once
/// built: index j always refers to the same point, so structures built over
/// point indices stay valid. Safe for any number of concurrent readers.
class Dataset {
 public:
  using RealMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Dataset() = default;
  Dataset(Metric metric, std::uint32_t dim, std::uint64_t n, std::uint64_t seed);

  Metric metric() const { return metric_; }
  std::uint32_t dim() const { return dim_; }
  std::uint64_t size() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const std::uint64_t> bit_row(std::uint64_t j) const {
    return {words_.data() + j * wpp_, wpp_};
  }
  std::span<std::uint64_t> bit_row(std::uint64_t j) {
    return {words_.data() + j * wpp_, wpp_};
  }
  Eigen::Ref<const Eigen::RowVectorXd> real_row(std::uint64_t j) const {
    return reals_.row(static_cast<Eigen::Index>(j));
  }
  Eigen::Ref<Eigen::RowVectorXd> real_row(std::uint64_t j) {
    return reals_.row(static_cast<Eigen::Index>(j));
  }

  Point point(std::uint64_t j) const;
  double distance_to(std::uint64_t j, const Point& q) const;

  std::size_t footprint_bytes() const;

  bool operator==(const Dataset& other) const;

 private:
  friend Dataset load_dataset_bytes(std::string_view, const std::string&);

  Metric metric_ = Metric::hamming;
  std::uint32_t dim_ = 0;
  std::uint32_t wpp_ = 0;  // words per point (hamming)
  std::uint64_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> words_;  // hamming payload, n * wpp
  RealMatrix reals_;                  // real payload, n x dim
};

/// Description of a synthetic test instance: exactly one point within
/// `radius` of the query, every other point farther than `approx * radius`.
struct PlantedSpec {
  std::uint64_t n = 0;
  std::uint32_t dim = 0;
  Metric metric = Metric::hamming;
  double radius = 0;
  double approx = 0;  // c > 1
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  Dataset dataset;
  Point query;
  std::uint64_t planted_index = 0;  // 0-based
};

/// Builds a planted instance. Deterministic in spec.seed. Throws InputError
/// on infeasible geometry (c <= 1, r <= 0, or Hamming with c*r >= d).
PlantedInstance generate_planted(const PlantedSpec& spec);

/// Plants a fresh query near a uniformly chosen existing dataset point, at
/// distance at most `radius`. Used by the benchmark harness to issue many
/// queries against one built index. Returns (query, chosen index).
std::pair<Point, std::uint64_t> plant_query(const Dataset& ds, double radius,
                                            std::uint64_t seed);

std::string save_dataset_bytes(const Dataset& ds);
Dataset load_dataset_bytes(std::string_view bytes, const std::string& what = "dataset");
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

std::string save_query_bytes(const Point& q, std::uint64_t planted_index,
                             std::uint64_t seed);
std::pair<Point, std::uint64_t> load_query_bytes(std::string_view bytes);
void save_query(const Point& q, std::uint64_t planted_index, std::uint64_t seed,
                const std::string& path);
std::pair<Point, std::uint64_t> load_query(const std::string& path);

}  // namespace lshinv
