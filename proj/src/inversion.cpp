#include "lshinv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lshinv/errors.hpp"
#include "lshinv/rng.hpp"

namespace lshinv {

namespace {

std::uint32_t ceil_log2(std::uint64_t m) {
  std::uint32_t bits = 0;
  std::uint64_t v = 1;
  while (v < m) {
    v <<= 1;
    ++bits;
  }
  return bits == 0 ? 1 : bits;
}

}  // namespace

std::uint64_t InversionTable::stored_entries() const {
  std::uint64_t total = 0;
  for (const auto& t : tables_) total += t.starts.size() + t.ends.size();
  return total;
}

std::size_t InversionTable::footprint_bytes() const {
  std::size_t total = 0;
  for (const auto& t : tables_)
    total += (t.starts.size() + t.ends.size()) * sizeof(std::uint32_t) +
             2 * sizeof(std::uint64_t);  // rerandomizer parameters
  return total;
}

InversionTable build_inversion(const DomainFn& f, std::uint64_t M, double sigma,
                               std::uint64_t seed, std::uint64_t* build_evals) {
  if (M < 2) throw InputError("build_inversion: domain size must be >= 2");
  if (M > (1ull << 32)) throw InputError("build_inversion: domain size above 2^32");
  if (!(sigma >= 1.0) || sigma > static_cast<double>(M))
    throw InputError("build_inversion: sigma must satisfy 1 <= sigma <= M");

  InversionTable out;
  out.domain_ = M;
  out.sigma_ = sigma;
  out.chain_length_ = static_cast<std::uint32_t>(std::ceil(sigma));

  const std::uint32_t t = out.chain_length_;
  const std::uint32_t n_tables = ceil_log2(M);
  const std::uint64_t chains = static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(M) / (sigma * t)));

  std::uint64_t evals = 0;
  out.tables_.reserve(n_tables);
  for (std::uint32_t j = 0; j < n_tables; ++j) {
    SplitMix64 rng(seed_mix(seed, 0x1e11, j));
    InversionTable::Table tab;
    tab.rerandomizer = MulModHash::sample(rng, M);

    // (end, start) pairs, sorted by end for binary search.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(chains);
    for (std::uint64_t c = 0; c < chains; ++c) {
      std::uint64_t x = c;  // start points enumerate the domain
      for (std::uint32_t s = 0; s < t; ++s) {
        x = tab.rerandomizer(f(x));
        ++evals;
      }
      pairs[c] = {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(c)};
    }
    std::sort(pairs.begin(), pairs.end());
    tab.ends.resize(chains);
    tab.starts.resize(chains);
    for (std::uint64_t c = 0; c < chains; ++c) {
      tab.ends[c] = pairs[c].first;
      tab.starts[c] = pairs[c].second;
    }
    out.tables_.push_back(std::move(tab));
  }
  if (build_evals) *build_evals += evals;

  double log2m = std::log2(static_cast<double>(M));
  double bound = kInversionSpaceConstant * (static_cast<double>(M) / sigma) *
                 log2m * log2m;
  if (static_cast<double>(out.stored_entries()) > bound)
    throw std::logic_error("inversion table exceeded its space envelope");
  return out;
}

std::optional<std::uint64_t> invert_one(const InversionTable& table, const DomainFn& f,
                                        std::uint64_t y, std::uint64_t* f_evals) {
  const std::uint32_t t = table.chain_length();
  // False chain merges can flood a table with candidates; reconstruction per
  // table is capped so the work envelope holds for any f.
  const std::uint64_t candidate_cap =
      static_cast<std::uint64_t>(std::ceil(4.0 * table.sigma())) + 4;

  std::uint64_t evals = 0;
  std::optional<std::uint64_t> result;

  for (const auto& tab : table.tables()) {
    std::uint64_t z = tab.rerandomizer(y);
    std::uint64_t checked = 0;
    bool table_done = false;
    for (std::uint32_t s = 0; s < t && !table_done; ++s) {
      auto [lo, hi] = std::equal_range(tab.ends.begin(), tab.ends.end(),
                                       static_cast<std::uint32_t>(z));
      for (auto it = lo; it != hi; ++it) {
        std::uint64_t x = tab.starts[static_cast<std::size_t>(it - tab.ends.begin())];
        // If f(x)=y at chain position t-1-s, the walk from m(y) reaches the
        // stored end; rebuild that position from the start.
        for (std::uint32_t step = 0; step + s + 1 < t; ++step) {
          x = tab.rerandomizer(f(x));
          ++evals;
        }
        ++evals;
        if (f(x) == y) {
          result = x;
          break;
        }
        if (++checked >= candidate_cap) {
          table_done = true;
          break;
        }
      }
      if (result) break;
      if (s + 1 < t && !table_done) {
        z = tab.rerandomizer(f(z));
        ++evals;
      }
    }
    if (result) break;
  }

  if (f_evals) *f_evals += evals;
  return result;
}

}  // namespace lshinv
