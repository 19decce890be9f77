#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lshinv/all_inversion.hpp"
#include "lshinv/errors.hpp"
#include "lshinv/rng.hpp"

using namespace lshinv;

namespace {

HashKey u64_key(std::uint64_t v) {
  HashKey k(8, '\0');
  for (int i = 0; i < 8; ++i) k[i] = static_cast<char>(v >> (8 * i));
  return k;
}

// Keyed pseudorandom function [N] -> D with |D| ~ N.
class PseudoKeyFn final : public KeyFn {
 public:
  PseudoKeyFn(std::uint64_t n, std::uint64_t seed) : n_(n), seed_(seed) {}
  HashKey key(std::uint64_t j) const override {
    return u64_key(seed_mix(seed_, 0x6e11, j) % n_);
  }

 private:
  std::uint64_t n_, seed_;
};

// f(j) = floor(j / group): every value has preimage size exactly `group`.
class GroupedKeyFn final : public KeyFn {
 public:
  explicit GroupedKeyFn(std::uint64_t group) : group_(group) {}
  HashKey key(std::uint64_t j) const override { return u64_key(j / group_); }

 private:
  std::uint64_t group_;
};

class ConstantKeyFn final : public KeyFn {
 public:
  HashKey key(std::uint64_t) const override { return u64_key(42); }
};

}  // namespace

TEST_CASE("universal hash family collides at rate <= ~1/m") {
  const std::uint64_t m = 64;
  const int draws = 20000;
  SplitMix64 rng(6);
  int collisions = 0;
  for (int t = 0; t < draws; ++t) {
    std::uint64_t va = rng.next(), vb = rng.next();
    if (va == vb) vb ^= 1;
    UniversalHash h = UniversalHash::sample(rng, m);
    if (h(u64_key(va)) == h(u64_key(vb))) ++collisions;
  }
  double expect = double(draws) / m;
  CHECK(collisions <= expect + 4 * std::sqrt(expect));
  // and it actually spreads: far fewer collisions than a constant map
  CHECK(collisions >= 1);
}

TEST_CASE("tiny domain: no levels fit, queries fall back to exact scans") {
  PseudoKeyFn f(4, 9);
  std::vector<const KeyFn*> fs{&f};
  AllInverter inv = build_all_inverter(fs, 4, 1.0, 3);
  CHECK(inv.kappa_max() == 0);
  for (std::uint64_t j = 0; j < 4; ++j) {
    InvertStats stats;
    auto got = invert_all(inv, 0, f, f.key(j), &stats);
    CHECK(stats.fallback);
    CHECK(got == brute_preimage(f, 4, f.key(j)));
  }
}

TEST_CASE("constant function escalates to the fallback and returns everything") {
  const std::uint64_t N = 1 << 10;
  ConstantKeyFn f;
  std::vector<const KeyFn*> fs{&f};
  AllInverter inv = build_all_inverter(fs, N, 2.0, 8);
  InvertStats stats;
  auto got = invert_all(inv, 0, f, u64_key(42), &stats);
  CHECK(stats.fallback);
  CHECK(got.size() == N);
}

TEST_CASE("empty preimages come back empty, always") {
  const std::uint64_t N = 1 << 10;
  PseudoKeyFn f(N, 12);
  std::vector<const KeyFn*> fs{&f};
  AllInverter inv = build_all_inverter(fs, N, 4.0, 21);
  // a key outside the function's codomain encoding
  HashKey missing = u64_key(N + 12345);
  CHECK(invert_all(inv, 0, f, missing).empty());
  CHECK(brute_preimage(f, N, missing).empty());
}

TEST_CASE("brute preimage on an injective function is a singleton") {
  GroupedKeyFn identity(1);  // key(j) = j, each value appears once
  auto got = brute_preimage(identity, 64, u64_key(17));
  REQUIRE(got.size() == 1);
  CHECK(got[0] == 17);
}

TEST_CASE("soundness and oracle equivalence on pseudorandom functions") {
  const std::uint64_t N = 1 << 10;
  const std::uint32_t R = 2;
  std::vector<PseudoKeyFn> fns;
  for (std::uint32_t i = 0; i < R; ++i) fns.emplace_back(N, 500 + i);
  std::vector<const KeyFn*> fs;
  for (auto& f : fns) fs.push_back(&f);

  AllInverter inv = build_all_inverter(fs, N, 4.0, 77);
  SplitMix64 rng(14);
  int total = 0, equal = 0;
  for (std::uint32_t i = 0; i < R; ++i) {
    for (int q = 0; q < 200; ++q) {
      HashKey target = fns[i].key(rng.next_below(N));
      auto checked = invert_all_checked(inv, i, fns[i], target);
      CHECK(checked.sound);  // subset, deterministically
      ++total;
      if (checked.equal) ++equal;
    }
  }
  CHECK(double(equal) / total >= 0.99);
}

TEST_CASE("query work stays within the instrumented envelope") {
  const std::uint64_t N = 1 << 10;
  PseudoKeyFn f(N, 321);
  std::vector<const KeyFn*> fs{&f};
  double sigma = 4.0;
  AllInverter inv = build_all_inverter(fs, N, sigma, 5);
  double log2n = std::log2(double(N));
  SplitMix64 rng(2);
  for (int q = 0; q < 150; ++q) {
    HashKey target = f.key(rng.next_below(N));
    std::uint64_t preimage = brute_preimage(f, N, target).size();
    InvertStats stats;
    invert_all(inv, 0, f, target, &stats);
    if (!stats.fallback) {
      double bound = kAllInversionQueryConstant * sigma * sigma * sigma * log2n *
                     log2n * log2n * (1.0 + double(preimage));
      CHECK(double(stats.f_evals) <= bound);
    }
  }
}

TEST_CASE("build stats: evaluation count and space envelope") {
  const std::uint64_t N = 1 << 10;
  const std::uint32_t R = 4;
  const double sigma = 2.0;
  std::vector<PseudoKeyFn> fns;
  for (std::uint32_t i = 0; i < R; ++i) fns.emplace_back(N, 900 + i);
  std::vector<const KeyFn*> fs;
  for (auto& f : fns) fs.push_back(&f);

  AllInvertBuildStats stats;
  AllInverter inv = build_all_inverter(fs, N, sigma, 10, {}, &stats);
  double log2n = std::log2(double(N));
  CHECK(double(stats.f_evals) <=
        kAllInversionBuildConstant * double(N) * R * log2n * log2n * log2n);
  CHECK(stats.stored_entries == inv.stored_entries());
  CHECK(double(stats.stored_entries) <=
        kAllInversionSpaceConstant * (double(N) + double(N) * R / sigma) * log2n *
            log2n * log2n);
}

TEST_CASE("rebuild with the same seed serializes byte-identically") {
  const std::uint64_t N = 1 << 9;
  std::vector<PseudoKeyFn> fns{PseudoKeyFn(N, 1), PseudoKeyFn(N, 2)};
  std::vector<const KeyFn*> fs{&fns[0], &fns[1]};

  AllInverter a = build_all_inverter(fs, N, 2.0, 4242);
  AllInverter b = build_all_inverter(fs, N, 2.0, 4242);
  std::string ba = save_inverter_bytes(a);
  std::string bb = save_inverter_bytes(b);
  CHECK(ba == bb);

  AllInverter loaded = load_inverter_bytes(ba);
  CHECK(save_inverter_bytes(loaded) == ba);

  // loaded structure answers queries exactly like the original
  SplitMix64 rng(8);
  for (int q = 0; q < 50; ++q) {
    HashKey target = fns[0].key(rng.next_below(N));
    CHECK(invert_all(a, 0, fns[0], target) == invert_all(loaded, 0, fns[0], target));
  }
}

TEST_CASE("loader rejects malformed inverter files") {
  const std::uint64_t N = 64;
  PseudoKeyFn f(N, 3);
  std::vector<const KeyFn*> fs{&f};
  std::string bytes = save_inverter_bytes(build_all_inverter(fs, N, 1.0, 1));
  CHECK_THROWS_AS(load_inverter_bytes(""), FormatError);
  std::string bad = bytes;
  bad[1] = 'X';
  CHECK_THROWS_AS(load_inverter_bytes(bad), FormatError);
  CHECK_THROWS_AS(load_inverter_bytes(bytes.substr(0, bytes.size() / 2)), FormatError);
}

TEST_CASE("shared sample sets: still sound and complete") {
  const std::uint64_t N = 1 << 10;
  const std::uint32_t R = 3;
  std::vector<PseudoKeyFn> fns;
  for (std::uint32_t i = 0; i < R; ++i) fns.emplace_back(N, 50 + i);
  std::vector<const KeyFn*> fs;
  for (auto& f : fns) fs.push_back(&f);

  AllInverterConfig cfg;
  cfg.shared_samples = true;
  cfg.sets_per_unit = 4;
  AllInverter inv = build_all_inverter(fs, N, 2.0, 31, cfg);

  // the pool is shared: per-level arrays referenced by every function
  CHECK(inv.pool_size() < R * 100000);
  SplitMix64 rng(4);
  int total = 0, equal = 0;
  for (std::uint32_t i = 0; i < R; ++i)
    for (int q = 0; q < 120; ++q) {
      auto checked = invert_all_checked(inv, i, fns[i], fns[i].key(rng.next_below(N)));
      CHECK(checked.sound);
      ++total;
      equal += checked.equal ? 1 : 0;
    }
  CHECK(double(equal) / total >= 0.99);
}

TEST_CASE("max_kappa cap reroutes oversized preimages to the fallback") {
  const std::uint64_t N = 1 << 10;
  GroupedKeyFn f(32);  // every preimage has 32 elements
  std::vector<const KeyFn*> fs{&f};
  AllInverterConfig cfg;
  cfg.max_kappa = 4;
  AllInverter inv = build_all_inverter(fs, N, 2.0, 6, cfg);
  CHECK(inv.kappa_max() == 4);

  InvertStats stats;
  auto got = invert_all(inv, 0, f, f.key(100), &stats);
  CHECK(stats.fallback);
  CHECK(got == brute_preimage(f, N, f.key(100)));
}

TEST_CASE("singleton counts per level concentrate at the predicted mean") {
  const std::uint64_t N = 1 << 10;
  const std::uint64_t group = 8;  // preimage size
  GroupedKeyFn f(group);
  std::vector<const KeyFn*> fs{&f};

  double total_count = 0;
  int builds = 5;
  std::uint32_t kappa = 8;
  double sets_per_level = 0;
  for (int b = 0; b < builds; ++b) {
    AllInverter inv = build_all_inverter(fs, N, 2.0, 1000 + b);
    const auto& levels = inv.levels(0);
    const AllInverter::FnLevel* level = nullptr;
    for (const auto& l : levels)
      if (l.kappa == kappa) level = &l;
    REQUIRE(level != nullptr);
    sets_per_level = double(level->sets.size());

    // x = 16 lives in the preimage {16..23} of key(16/8); count the sets
    // where x is sampled and none of its preimage siblings are.
    const std::uint64_t x = 16;
    for (const auto& set : level->sets) {
      const auto& samples = inv.sample_array(set.pool_index);
      bool has_x = std::binary_search(samples.begin(), samples.end(), std::uint32_t(x));
      bool has_sibling = false;
      for (std::uint64_t s = 16; s < 16 + group; ++s)
        if (s != x &&
            std::binary_search(samples.begin(), samples.end(), std::uint32_t(s)))
          has_sibling = true;
      if (has_x && !has_sibling) total_count += 1;
    }
  }
  double mean = total_count / builds;
  // Predicted: sets_per_level * (1/kappa) * (1 - 1/kappa)^(group-1)
  double predicted = sets_per_level * (1.0 / kappa) *
                     std::pow(1.0 - 1.0 / kappa, double(group - 1));
  CHECK(mean >= predicted / 2);
  CHECK(mean <= predicted * 2);
}

TEST_CASE("fault-injection hook breaks completeness detectably") {
  const std::uint64_t N = 1 << 10;
  PseudoKeyFn f(N, 77);
  std::vector<const KeyFn*> fs{&f};
  AllInverter inv = build_all_inverter(fs, N, 4.0, 13);
  inv.corrupt_for_testing();

  SplitMix64 rng(5);
  int equal = 0, total = 0;
  for (int q = 0; q < 50; ++q) {
    auto checked = invert_all_checked(inv, 0, f, f.key(rng.next_below(N)));
    CHECK(checked.sound);  // corruption never breaks soundness
    ++total;
    equal += checked.equal ? 1 : 0;
  }
  CHECK(equal < total);  // completeness must collapse
}

TEST_CASE("build rejects invalid parameters") {
  PseudoKeyFn f(16, 1);
  std::vector<const KeyFn*> fs{&f};
  CHECK_THROWS_AS(build_all_inverter({}, 16, 1.0, 0), InputError);
  CHECK_THROWS_AS(build_all_inverter(fs, 0, 1.0, 0), InputError);
  CHECK_THROWS_AS(build_all_inverter(fs, 16, 0.5, 0), InputError);
  CHECK_THROWS_AS(build_all_inverter(fs, 16, 17.0, 0), InputError);
}
