#include "lshinv/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lshinv/all_inversion.hpp"
#include "lshinv/inversion.hpp"
#include "lshinv/rng.hpp"

namespace lshinv {

namespace {

// Fixed pseudorandom function [M] -> [M] keyed by seed.
DomainFn pseudorandom_fn(std::uint64_t M, std::uint64_t seed) {
  return [M, seed](std::uint64_t x) { return seed_mix(seed, 0xf00d, x) % M; };
}

// Pseudorandom keyed function [N] -> D with |D| ~ N (8-byte keys), so
// preimage sizes behave like a random function's.
class PseudoKeyFn final : public KeyFn {
 public:
  PseudoKeyFn(std::uint64_t n, std::uint64_t seed) : n_(n), seed_(seed) {}

  HashKey key(std::uint64_t j) const override {
    std::uint64_t v = value(j);
    HashKey k(8, '\0');
    for (int i = 0; i < 8; ++i) k[i] = static_cast<char>(v >> (8 * i));
    return k;
  }
  std::uint64_t value(std::uint64_t j) const { return seed_mix(seed_, 0x6e11, j) % n_; }

 private:
  std::uint64_t n_;
  std::uint64_t seed_;
};

SuiteResult inversion_suite(bool quick) {
  std::vector<std::uint64_t> domains = quick ? std::vector<std::uint64_t>{1u << 10}
                                             : std::vector<std::uint64_t>{1u << 10, 1u << 12};
  std::vector<double> sigmas = {2, 4, 8};
  std::uint32_t queries = quick ? 300 : 1000;

  double worst_rate = 1.0;
  std::uint64_t soundness_failures = 0;
  bool work_ok = true, space_ok = true;

  for (std::uint64_t M : domains) {
    for (double sigma : sigmas) {
      DomainFn f = pseudorandom_fn(M, 0x5eedull + M + static_cast<std::uint64_t>(sigma));
      InversionTable table = build_inversion(f, M, sigma, 42);

      double log2m = std::log2(static_cast<double>(M));
      if (static_cast<double>(table.stored_entries()) >
          kInversionSpaceConstant * (static_cast<double>(M) / sigma) * log2m * log2m)
        space_ok = false;

      SplitMix64 rng(7);
      std::uint64_t hits = 0;
      for (std::uint32_t q = 0; q < queries; ++q) {
        std::uint64_t y = f(rng.next_below(M));  // random image point
        std::uint64_t evals = 0;
        auto x = invert_one(table, f, y, &evals);
        if (x) {
          ++hits;
          if (f(*x) != y) ++soundness_failures;
        }
        if (static_cast<double>(evals) >
            kInversionWorkConstant * sigma * sigma * log2m * log2m)
          work_ok = false;
      }
      worst_rate = std::min(worst_rate, static_cast<double>(hits) / queries);
    }
  }

  SuiteResult r;
  char detail_buf[256];
  r.name = "inversion";
  r.passed = worst_rate >= 0.5 && soundness_failures == 0 && work_ok && space_ok;
  std::snprintf(detail_buf, sizeof(detail_buf),
                "worst success rate %.3f (>= 0.5), soundness failures %llu, "
                "work bound %s, space bound %s",
                worst_rate, static_cast<unsigned long long>(soundness_failures),
                work_ok ? "ok" : "VIOLATED", space_ok ? "ok" : "VIOLATED");
  r.detail = detail_buf;
  return r;
}

SuiteResult all_inversion_suite(bool quick, bool inject_fault) {
  std::vector<std::uint64_t> domains = quick ? std::vector<std::uint64_t>{1u << 10}
                                             : std::vector<std::uint64_t>{1u << 10, 1u << 12};
  std::vector<double> sigmas = quick ? std::vector<double>{4} : std::vector<double>{2, 4};
  std::uint32_t per_fn_queries = quick ? 60 : 125;
  const std::uint32_t R = 2;

  std::uint64_t total = 0, equal = 0, unsound = 0;
  bool space_ok = true;

  for (std::uint64_t N : domains) {
    for (double sigma : sigmas) {
      std::vector<PseudoKeyFn> fns;
      for (std::uint32_t i = 0; i < R; ++i) fns.emplace_back(N, 0xabc0 + i + N);
      std::vector<const KeyFn*> ptrs;
      for (const auto& f : fns) ptrs.push_back(&f);

      AllInvertBuildStats stats;
      AllInverter inv = build_all_inverter(ptrs, N, sigma, 99, {}, &stats);
      if (inject_fault) inv.corrupt_for_testing();

      double log2n = std::log2(static_cast<double>(N));
      if (static_cast<double>(stats.stored_entries) >
          kAllInversionSpaceConstant *
              (static_cast<double>(N) + static_cast<double>(N) * R / sigma) *
              log2n * log2n * log2n)
        space_ok = false;

      SplitMix64 rng(11);
      for (std::uint32_t i = 0; i < R; ++i) {
        for (std::uint32_t q = 0; q < per_fn_queries; ++q) {
          HashKey target = fns[i].key(rng.next_below(N));
          auto checked = invert_all_checked(inv, i, fns[i], target);
          ++total;
          if (!checked.sound) ++unsound;
          if (checked.equal) ++equal;
        }
      }
    }
  }

  double equal_rate = total > 0 ? static_cast<double>(equal) / total : 0.0;
  SuiteResult r;
  char detail_buf[256];
  r.name = "all_inversion";
  r.passed = unsound == 0 && equal_rate >= 0.99 && space_ok;
  std::snprintf(detail_buf, sizeof(detail_buf),
                "oracle equality %.4f (>= 0.99) over %llu queries, soundness "
                "violations %llu, space bound %s",
                equal_rate, static_cast<unsigned long long>(total),
                static_cast<unsigned long long>(unsound),
                space_ok ? "ok" : "VIOLATED");
  r.detail = detail_buf;
  return r;
}

SuiteResult universal_hash_suite() {
  // Collision frequency of the universal family on fixed distinct keys.
  const std::uint64_t m = 64;
  const std::uint32_t draws = 20000;
  SplitMix64 rng(123);
  std::uint32_t collisions = 0;
  for (std::uint32_t t = 0; t < draws; ++t) {
    HashKey a(8, '\0'), b(8, '\0');
    std::uint64_t va = rng.next(), vb = rng.next();
    if (va == vb) vb ^= 1;
    for (int i = 0; i < 8; ++i) {
      a[i] = static_cast<char>(va >> (8 * i));
      b[i] = static_cast<char>(vb >> (8 * i));
    }
    UniversalHash h = UniversalHash::sample(rng, m);
    if (h(a) == h(b)) ++collisions;
  }
  // Expectation <= draws/m; allow 4 binomial standard deviations of headroom.
  double expect = static_cast<double>(draws) / m;
  double limit = expect + 4.0 * std::sqrt(expect);
  SuiteResult r;
  char detail_buf[256];
  r.name = "universal_hash";
  r.passed = collisions <= limit;
  std::snprintf(detail_buf, sizeof(detail_buf), "collisions %u (expect ~%.0f, limit %.0f)",
                collisions, expect, limit);
  r.detail = detail_buf;
  return r;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
  std::vector<SuiteResult> out;
  out.push_back(universal_hash_suite());
  out.push_back(inversion_suite(options.quick));
  out.push_back(all_inversion_suite(options.quick, options.inject_fault));
  return out;
}

}  // namespace lshinv
