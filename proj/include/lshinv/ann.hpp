#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lshinv/all_inversion.hpp"
#include "lshinv/dataset.hpp"
#include "lshinv/lsh.hpp"

namespace lshinv {

struct QueryResult {
  /// (point index, distance), present only when distance <= c*r.
  std::optional<std::pair<std::uint64_t, double>> found;
  std::uint64_t candidates_examined = 0;
  std::uint64_t inverter_f_evals = 0;
  double wall_ms = 0;
};

struct MemoryFootprint {
  std::size_t dataset = 0;
  std::size_t battery = 0;
  std::size_t index = 0;  // lookup tables (classic) or inverter (inverted)

  std::size_t total() const { return dataset + battery + index; }
};

/// Open-addressed map from canonical hash keys to the list of dataset indices
/// hashing there. Keys are fixed width; lists are stored contiguously in
/// ascending index order.
class ReverseTable {
 public:
  ReverseTable() = default;

  /// keys: n consecutive key_width-byte keys, key i belonging to point i.
  static ReverseTable build(std::string_view keys, std::uint32_t key_width,
                            std::uint64_t n);

  std::span<const std::uint32_t> lookup(std::string_view key) const;

  std::uint64_t key_count() const { return key_count_; }
  std::uint64_t entry_count() const { return entries_.size(); }
  std::size_t footprint_bytes() const;

 private:
  std::uint32_t key_width_ = 0;
  std::uint64_t key_count_ = 0;
  std::uint32_t slot_mask_ = 0;
  std::vector<std::uint64_t> slot_fp_;
  std::vector<std::uint32_t> slot_key_;    // key index in blob; empty sentinel
  std::vector<std::uint32_t> slot_off_;    // run start in entries_
  std::vector<std::uint32_t> slot_len_;
  std::string blob_;                       // unique keys, key_width each
  std::vector<std::uint32_t> entries_;
};

/// The baseline index: one reverse lookup table per battery hash. Queries
/// probe every table at the query's key, distance-check the stored lists and
/// return the first point within c*r. Immutable after build.
class ClassicIndex {
 public:
  const Dataset& dataset() const { return *dataset_; }
  const HashBattery& battery() const { return battery_; }
  const LshFamily& family() const { return family_; }
  const ReverseTable& table(std::size_t i) const { return tables_[i]; }
  std::uint32_t table_count() const { return static_cast<std::uint32_t>(tables_.size()); }

  MemoryFootprint footprint() const;

 private:
  friend ClassicIndex build_classic(std::shared_ptr<const Dataset>,
                                    const LshFamily&, std::uint64_t, double);

  std::shared_ptr<const Dataset> dataset_;
  LshFamily family_;
  HashBattery battery_;
  std::vector<ReverseTable> tables_;
};

ClassicIndex build_classic(std::shared_ptr<const Dataset> ds, const LshFamily& family,
                           std::uint64_t seed, double target_miss = 0.1);
QueryResult query_classic(const ClassicIndex& index, const Point& q);

/// KeyFn view of one battery hash over the dataset's point order:
/// j -> hash_i(x_j), with domain [n].
class BatteryKeyFn final : public KeyFn {
 public:
  BatteryKeyFn(const Dataset& ds, const HashBattery& battery, std::size_t i)
      : ds_(&ds), hash_(&battery.hash(i)) {}

  HashKey key(std::uint64_t j) const override { return hash_->eval_row(*ds_, j); }
  std::uint64_t fingerprint(std::uint64_t j) const override {
    return hash_->eval_row_fingerprint(*ds_, j);
  }

 private:
  const Dataset* ds_;
  const AmplifiedHash* hash_;
};

/// Default inverter configuration for the inverted index. Leaner than the
/// standalone defaults: one collection of sample sets shared by all battery
/// hashes, and size-guess levels capped at 4 (hash buckets are near-constant
/// sized; oversized buckets go through the exact fallback scan).
AllInverterConfig ann_inverter_config();

/// The space-saving index: a doubled-repetition battery plus an all-function
/// inverter over j -> hash_i(x_j) with sigma = n^s. No reverse lookup tables
/// are stored. Immutable after build.
class InvertedIndex {
 public:
  const Dataset& dataset() const { return *dataset_; }
  const HashBattery& battery() const { return battery_; }
  const LshFamily& family() const { return family_; }
  const AllInverter& inverter() const { return inverter_; }
  double space_saving() const { return s_; }

  MemoryFootprint footprint() const;

 private:
  friend InvertedIndex build_inverted(std::shared_ptr<const Dataset>,
                                      const LshFamily&, double, std::uint64_t,
                                      double, const AllInverterConfig&);

  std::shared_ptr<const Dataset> dataset_;
  LshFamily family_;
  HashBattery battery_;
  AllInverter inverter_;
  double s_ = 0;
};

/// Builds the inverted index with space-saving exponent s, 0 < s < rho of the
/// family's profile (InputError otherwise).
InvertedIndex build_inverted(std::shared_ptr<const Dataset> ds,
                             const LshFamily& family, double s, std::uint64_t seed,
                             double target_miss = 0.1,
                             const AllInverterConfig& config = ann_inverter_config());
QueryResult query_inverted(const InvertedIndex& index, const Point& q);

}  // namespace lshinv
