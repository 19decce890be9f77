#include "lshinv/ann.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>

#include "lshinv/errors.hpp"

namespace lshinv {

namespace {

constexpr std::uint32_t kEmptySlot = 0xffffffffu;

std::uint32_t next_pow2_u32(std::uint64_t v) {
  std::uint64_t p = 1;
  while (p < v) p <<= 1;
  return static_cast<std::uint32_t>(p);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

}  // namespace

ReverseTable ReverseTable::build(std::string_view keys, std::uint32_t key_width,
                                 std::uint64_t n) {
  ReverseTable t;
  t.key_width_ = key_width;
  if (n == 0) return t;

  // Point indices sorted by (key bytes, index): groups become the per-key
  // lists, already in ascending index order.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const char* base = keys.data();
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    int c = std::memcmp(base + static_cast<std::size_t>(a) * key_width,
                        base + static_cast<std::size_t>(b) * key_width, key_width);
    return c != 0 ? c < 0 : a < b;
  });

  t.entries_ = std::move(order);
  std::vector<std::uint32_t> group_off;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i == 0 ||
        std::memcmp(base + static_cast<std::size_t>(t.entries_[i]) * key_width,
                    base + static_cast<std::size_t>(t.entries_[i - 1]) * key_width,
                    key_width) != 0)
      group_off.push_back(static_cast<std::uint32_t>(i));
  }
  t.key_count_ = group_off.size();

  std::uint32_t capacity = next_pow2_u32(2 * t.key_count_);
  t.slot_mask_ = capacity - 1;
  t.slot_fp_.assign(capacity, 0);
  t.slot_key_.assign(capacity, kEmptySlot);
  t.slot_off_.assign(capacity, 0);
  t.slot_len_.assign(capacity, 0);
  t.blob_.reserve(static_cast<std::size_t>(t.key_count_) * key_width);

  for (std::size_t g = 0; g < group_off.size(); ++g) {
    std::uint32_t off = group_off[g];
    std::uint32_t end = g + 1 < group_off.size()
                            ? group_off[g + 1]
                            : static_cast<std::uint32_t>(n);
    const char* key = base + static_cast<std::size_t>(t.entries_[off]) * key_width;
    std::uint64_t fp = fingerprint64({key, key_width});
    std::uint32_t slot = static_cast<std::uint32_t>(fp) & t.slot_mask_;
    while (t.slot_key_[slot] != kEmptySlot) slot = (slot + 1) & t.slot_mask_;
    t.slot_fp_[slot] = fp;
    t.slot_key_[slot] = static_cast<std::uint32_t>(g);
    t.slot_off_[slot] = off;
    t.slot_len_[slot] = end - off;
    t.blob_.append(key, key_width);
  }
  return t;
}

std::span<const std::uint32_t> ReverseTable::lookup(std::string_view key) const {
  if (key_count_ == 0) return {};
  std::uint64_t fp = fingerprint64(key);
  std::uint32_t slot = static_cast<std::uint32_t>(fp) & slot_mask_;
  for (;;) {
    std::uint32_t k = slot_key_[slot];
    if (k == kEmptySlot) return {};
    if (slot_fp_[slot] == fp &&
        std::memcmp(blob_.data() + static_cast<std::size_t>(k) * key_width_,
                    key.data(), key_width_) == 0)
      return {entries_.data() + slot_off_[slot], slot_len_[slot]};
    slot = (slot + 1) & slot_mask_;
  }
}

std::size_t ReverseTable::footprint_bytes() const {
  return slot_fp_.size() * sizeof(std::uint64_t) +
         (slot_key_.size() + slot_off_.size() + slot_len_.size() + entries_.size()) *
             sizeof(std::uint32_t) +
         blob_.size();
}

ClassicIndex build_classic(std::shared_ptr<const Dataset> ds, const LshFamily& family,
                           std::uint64_t seed, double target_miss) {
  if (!ds || ds->size() == 0) throw InputError("build_classic: empty dataset");
  if (family.metric() != ds->metric())
    throw InputError("build_classic: family does not match the dataset metric");
  if (family.dim != ds->dim())
    throw InputError("build_classic: family does not match the dataset dimension");

  ClassicIndex index;
  index.dataset_ = std::move(ds);
  index.family_ = family;
  index.battery_ = build_battery(index.dataset_->size(), family, seed, target_miss,
                                 /*doubled=*/false);

  const Dataset& data = *index.dataset_;
  const std::uint64_t n = data.size();
  index.tables_.reserve(index.battery_.repetitions());
  std::string keybuf;
  for (std::uint32_t i = 0; i < index.battery_.repetitions(); ++i) {
    const AmplifiedHash& h = index.battery_.hash(i);
    const std::uint32_t width = h.key_width();
    keybuf.resize(static_cast<std::size_t>(n) * width);
    for (std::uint64_t j = 0; j < n; ++j)
      h.eval_row_into(data, j, keybuf.data() + static_cast<std::size_t>(j) * width);
    index.tables_.push_back(ReverseTable::build(keybuf, width, n));
  }
  return index;
}

QueryResult query_classic(const ClassicIndex& index, const Point& q) {
  auto start = std::chrono::steady_clock::now();
  if (q.metric != index.dataset().metric() || q.dim != index.dataset().dim())
    throw InputError("query_classic: query does not match index metric/dimension");

  const double cutoff = index.family().profile.far_radius;
  QueryResult out;
  for (std::uint32_t i = 0; i < index.table_count(); ++i) {
    HashKey key = index.battery().hash(i).eval(q);
    for (std::uint32_t j : index.table(i).lookup(key)) {
      double d = index.dataset().distance_to(j, q);
      ++out.candidates_examined;
      if (d <= cutoff) {
        out.found = {j, d};
        out.wall_ms = elapsed_ms(start);
        return out;
      }
    }
  }
  out.wall_ms = elapsed_ms(start);
  return out;
}

MemoryFootprint ClassicIndex::footprint() const {
  MemoryFootprint f;
  f.dataset = dataset_ ? dataset_->footprint_bytes() : 0;
  f.battery = battery_.footprint_bytes();
  for (const auto& t : tables_) f.index += t.footprint_bytes();
  return f;
}

AllInverterConfig ann_inverter_config() {
  AllInverterConfig cfg;
  cfg.sets_per_unit = 1;
  cfg.fallback_divisor = 4;
  cfg.max_kappa = 4;
  cfg.shared_samples = true;
  return cfg;
}

InvertedIndex build_inverted(std::shared_ptr<const Dataset> ds,
                             const LshFamily& family, double s, std::uint64_t seed,
                             double target_miss, const AllInverterConfig& config) {
  if (!ds || ds->size() == 0) throw InputError("build_inverted: empty dataset");
  if (family.metric() != ds->metric())
    throw InputError("build_inverted: family does not match the dataset metric");
  if (family.dim != ds->dim())
    throw InputError("build_inverted: family does not match the dataset dimension");
  double rho = family.profile.rho();
  if (!(s > 0.0) || s >= rho)
    throw InputError("build_inverted: space-saving exponent must satisfy 0 < s < rho (rho = " +
                     std::to_string(rho) + ")");

  InvertedIndex index;
  index.dataset_ = std::move(ds);
  index.family_ = family;
  index.s_ = s;
  index.battery_ = build_battery(index.dataset_->size(), family, seed, target_miss,
                                 /*doubled=*/true);

  const std::uint64_t n = index.dataset_->size();
  double sigma = std::pow(static_cast<double>(n), s);
  if (sigma < 1.0) sigma = 1.0;
  if (sigma > static_cast<double>(n)) sigma = static_cast<double>(n);

  std::vector<BatteryKeyFn> fns;
  fns.reserve(index.battery_.repetitions());
  for (std::uint32_t i = 0; i < index.battery_.repetitions(); ++i)
    fns.emplace_back(*index.dataset_, index.battery_, i);
  std::vector<const KeyFn*> fn_ptrs;
  fn_ptrs.reserve(fns.size());
  for (const auto& f : fns) fn_ptrs.push_back(&f);

  index.inverter_ = build_all_inverter(fn_ptrs, n, sigma,
                                       seed_mix(seed, 0xa11f), config);
  return index;
}

QueryResult query_inverted(const InvertedIndex& index, const Point& q) {
  auto start = std::chrono::steady_clock::now();
  if (q.metric != index.dataset().metric() || q.dim != index.dataset().dim())
    throw InputError("query_inverted: query does not match index metric/dimension");

  const double cutoff = index.family().profile.far_radius;
  QueryResult out;
  for (std::uint32_t i = 0; i < index.battery().repetitions(); ++i) {
    HashKey target = index.battery().hash(i).eval(q);
    BatteryKeyFn fn(index.dataset(), index.battery(), i);
    InvertStats stats;
    // Every returned j is a verified collision: hash_i(x_j) equals the
    // query's key exactly, so candidates match the lookup-table semantics.
    auto candidates = invert_all(index.inverter(), i, fn, target, &stats);
    out.inverter_f_evals += stats.f_evals;
    for (std::uint64_t j : candidates) {
      double d = index.dataset().distance_to(j, q);
      ++out.candidates_examined;
      if (d <= cutoff) {
        out.found = {j, d};
        out.wall_ms = elapsed_ms(start);
        return out;
      }
    }
  }
  out.wall_ms = elapsed_ms(start);
  return out;
}

MemoryFootprint InvertedIndex::footprint() const {
  MemoryFootprint f;
  f.dataset = dataset_ ? dataset_->footprint_bytes() : 0;
  f.battery = battery_.footprint_bytes();
  f.index = inverter_.footprint_bytes();
  return f;
}

}  // namespace lshinv
