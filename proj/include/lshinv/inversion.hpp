#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lshinv/hashutil.hpp"

namespace lshinv {

using DomainFn = std::function<std::uint64_t(std::uint64_t)>;

/// Space envelope: stored chain endpoints <= C * (M/sigma) * log2(M)^2.
constexpr double kInversionSpaceConstant = 4.0;
/// Work envelope: f-evaluations per lookup <= B * sigma^2 * log2(M)^2.
constexpr double kInversionWorkConstant = 32.0;

/// Chain-table inverter for a function f: [M] -> [M], trading a factor sigma
/// of space against extra evaluations of f at lookup time.
///
/// Layout: ceil(log2 M) tables. Table j re-randomizes the map as
/// g_j(x) = m_j(f(x)) with m_j pairwise independent on [M], and stores
/// ceil(M / (sigma * t)) chains of length t = ceil(sigma); chain c starts at
/// x = c and keeps only (start, end) with ends sorted for lookup. A lookup
/// walks forward from m_j(y), matches ends, re-derives candidate preimages
/// from the starts, and verifies each against f before returning, so a
/// returned x always satisfies f(x) = y.
///
/// Immutable after build; lookups are read-only and safe concurrently.
class InversionTable {
 public:
  struct Table {
    MulModHash rerandomizer;
    std::vector<std::uint32_t> starts;  // aligned with ends
    std::vector<std::uint32_t> ends;    // sorted
  };

  std::uint64_t domain_size() const { return domain_; }
  double sigma() const { return sigma_; }
  std::uint32_t chain_length() const { return chain_length_; }
  const std::vector<Table>& tables() const { return tables_; }

  std::uint64_t stored_entries() const;
  std::size_t footprint_bytes() const;

 private:
  friend InversionTable build_inversion(const DomainFn&, std::uint64_t, double,
                                        std::uint64_t, std::uint64_t*);
  friend struct InversionTableAccess;

  std::uint64_t domain_ = 0;
  double sigma_ = 1;
  std::uint32_t chain_length_ = 1;
  std::vector<Table> tables_;
};

/// Builds the inverter. Requires 2 <= M <= 2^32 and 1 <= sigma <= M; the
/// space envelope is enforced at construction. `build_evals`, when given, is
/// incremented by the number of f evaluations spent.
InversionTable build_inversion(const DomainFn& f, std::uint64_t M, double sigma,
                               std::uint64_t seed, std::uint64_t* build_evals = nullptr);

/// Finds some x with f(x) = y, or nothing. The caller must pass the same f
/// the table was built for. `f_evals`, when given, is incremented by the
/// evaluations spent; the count stays within the work envelope.
std::optional<std::uint64_t> invert_one(const InversionTable& table, const DomainFn& f,
                                        std::uint64_t y, std::uint64_t* f_evals = nullptr);

}  // namespace lshinv
