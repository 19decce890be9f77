#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lshinv/dataset.hpp"
#include "lshinv/point.hpp"
#include "lshinv/rng.hpp"

using namespace lshinv;

namespace {

Point real_point(Metric m, std::initializer_list<double> xs) {
  Point p = Point::zeros(m, static_cast<std::uint32_t>(xs.size()));
  std::uint32_t i = 0;
  for (double x : xs) p.coords[i++] = x;
  return p;
}

Point random_point(Metric m, std::uint32_t dim, SplitMix64& rng) {
  Point p = Point::zeros(m, dim);
  if (m == Metric::hamming) {
    for (auto& w : p.words) w = rng.next();
    std::uint32_t tail = dim & 63u;
    if (tail) p.words.back() &= (1ull << tail) - 1;
  } else {
    for (std::uint32_t i = 0; i < dim; ++i) p.coords[i] = rng.next_normal() * 3.0;
  }
  return p;
}

// Oracle: scans the whole dataset and checks the planted promise directly.
void check_planted_by_scan(const PlantedInstance& inst, const PlantedSpec& spec) {
  std::uint64_t within = 0;
  for (std::uint64_t j = 0; j < inst.dataset.size(); ++j) {
    double d = inst.dataset.distance_to(j, inst.query);
    if (j == inst.planted_index) {
      CHECK(d <= spec.radius);
      ++within;
    } else {
      CHECK(d > spec.approx * spec.radius);
    }
    if (d <= spec.radius && j != inst.planted_index) ++within;
  }
  CHECK(within == 1);
}

}  // namespace

TEST_CASE("distance basics") {
  Point a = Point::zeros(Metric::hamming, 16);
  Point b = Point::zeros(Metric::hamming, 16);
  a.set_bit(3, true);
  b.set_bit(3, true);
  CHECK(distance(a, b) == 0.0);

  CHECK(distance(real_point(Metric::euclidean, {0, 0}),
                 real_point(Metric::euclidean, {3, 4})) == doctest::Approx(5.0));
  CHECK(distance(real_point(Metric::manhattan, {1, 2}),
                 real_point(Metric::manhattan, {4, 0})) == doctest::Approx(5.0));
}

TEST_CASE("distance rejects mismatched inputs") {
  CHECK_THROWS_AS(distance(real_point(Metric::euclidean, {1, 2}),
                           real_point(Metric::euclidean, {1, 2, 3})),
                  InputError);
  CHECK_THROWS_AS(distance(real_point(Metric::euclidean, {1, 2}),
                           real_point(Metric::manhattan, {1, 2})),
                  InputError);
}

TEST_CASE("distance is zero iff equal, symmetric, triangle inequality") {
  SplitMix64 rng(404);
  for (Metric m : {Metric::hamming, Metric::euclidean, Metric::manhattan}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::uint32_t dim = 1 + static_cast<std::uint32_t>(rng.next_below(90));
      Point x = random_point(m, dim, rng);
      Point y = random_point(m, dim, rng);
      Point z = random_point(m, dim, rng);
      CHECK(distance(x, x) == 0.0);
      CHECK(distance(x, y) == doctest::Approx(distance(y, x)));
      CHECK(distance(x, z) <= distance(x, y) + distance(y, z) + 1e-9);
    }
  }
}

TEST_CASE("planted generation honors the promise (tiny hamming)") {
  PlantedSpec spec{2, 8, Metric::hamming, 1, 2, 5};
  auto inst = generate_planted(spec);
  check_planted_by_scan(inst, spec);
}

TEST_CASE("planted generation rejects invalid specs") {
  CHECK_THROWS_AS(generate_planted({16, 32, Metric::hamming, 4, 1.0, 1}), InputError);
  CHECK_THROWS_AS(generate_planted({16, 32, Metric::hamming, 0, 2, 1}), InputError);
  // c*r >= d: far points cannot exist
  CHECK_THROWS_AS(generate_planted({16, 32, Metric::hamming, 16, 2, 1}), InputError);
  CHECK_THROWS_AS(generate_planted({0, 32, Metric::hamming, 4, 2, 1}), InputError);
}

TEST_CASE("planted generation verified by exhaustive scan") {
  PlantedSpec spec{1024, 256, Metric::hamming, 16, 2, 7};
  auto inst = generate_planted(spec);
  check_planted_by_scan(inst, spec);

  for (Metric m : {Metric::euclidean, Metric::manhattan}) {
    PlantedSpec rs{512, 24, m, 1.0, 2.0, 11};
    auto rinst = generate_planted(rs);
    check_planted_by_scan(rinst, rs);
  }
}

TEST_CASE("identical seeds reproduce identical datasets") {
  PlantedSpec spec{256, 64, Metric::hamming, 4, 2, 99};
  auto a = generate_planted(spec);
  auto b = generate_planted(spec);
  CHECK(a.dataset == b.dataset);
  CHECK(a.planted_index == b.planted_index);
  CHECK(save_dataset_bytes(a.dataset) == save_dataset_bytes(b.dataset));

  spec.metric = Metric::euclidean;
  spec.dim = 16;
  auto c = generate_planted(spec);
  auto d = generate_planted(spec);
  CHECK(save_dataset_bytes(c.dataset) == save_dataset_bytes(d.dataset));
}

TEST_CASE("dataset round trip is bit-identical") {
  for (Metric m : {Metric::hamming, Metric::euclidean}) {
    PlantedSpec spec{64, m == Metric::hamming ? 100u : 12u, m, 3, 2, 21};
    auto inst = generate_planted(spec);
    std::string bytes = save_dataset_bytes(inst.dataset);
    Dataset back = load_dataset_bytes(bytes);
    CHECK(back == inst.dataset);
    CHECK(save_dataset_bytes(back) == bytes);
  }
}

TEST_CASE("loader rejects malformed files") {
  CHECK_THROWS_AS(load_dataset_bytes(""), FormatError);

  auto inst = generate_planted({8, 32, Metric::hamming, 2, 2, 1});
  std::string bytes = save_dataset_bytes(inst.dataset);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(load_dataset_bytes(bad_magic), FormatError);

  std::string truncated = bytes.substr(0, bytes.size() - 3);
  try {
    load_dataset_bytes(truncated);
    CHECK(false);
  } catch (const FormatError& e) {
    CHECK(e.byte_offset >= 28);  // fails inside the payload
  }

  std::string trailing = bytes + "zz";
  CHECK_THROWS_AS(load_dataset_bytes(trailing), FormatError);

  std::string bad_metric = bytes;
  bad_metric[6] = 9;
  CHECK_THROWS_AS(load_dataset_bytes(bad_metric), FormatError);
}

TEST_CASE("query sidecar round trip") {
  auto inst = generate_planted({32, 48, Metric::hamming, 2, 2, 3});
  std::string bytes = save_query_bytes(inst.query, inst.planted_index, 3);
  auto [q, idx] = load_query_bytes(bytes);
  CHECK(idx == inst.planted_index);
  CHECK(distance(q, inst.query) == 0.0);
  CHECK(save_query_bytes(q, idx, 3) == bytes);
}

TEST_CASE("fresh planted queries stay within radius of their anchor") {
  auto inst = generate_planted({128, 64, Metric::hamming, 4, 2, 17});
  for (int t = 0; t < 50; ++t) {
    auto [q, j] = plant_query(inst.dataset, 4, 1000 + t);
    CHECK(inst.dataset.distance_to(j, q) <= 4.0);
  }
  auto rinst = generate_planted({128, 16, Metric::euclidean, 1.5, 2, 18});
  for (int t = 0; t < 50; ++t) {
    auto [q, j] = plant_query(rinst.dataset, 1.5, 2000 + t);
    CHECK(rinst.dataset.distance_to(j, q) <= 1.5 + 1e-12);
  }
}
