#include "lshinv/all_inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "lshinv/errors.hpp"
#include "lshinv/io.hpp"
#include "lshinv/rng.hpp"

namespace lshinv {

// Loader-side construction of the otherwise immutable table types.
struct InversionTableAccess {
  static InversionTable make(std::uint64_t domain, double sigma,
                             std::uint32_t chain_length,
                             std::vector<InversionTable::Table> tables) {
    InversionTable t;
    t.domain_ = domain;
    t.sigma_ = sigma;
    t.chain_length_ = chain_length;
    t.tables_ = std::move(tables);
    return t;
  }
  static std::vector<InversionTable::Table>& tables(InversionTable& t) {
    return t.tables_;
  }
};

struct AllInverterAccess {
  static AllInverter make(std::uint64_t domain, std::uint32_t function_count,
                          double sigma, std::uint64_t seed,
                          const AllInverterConfig& config, std::uint32_t kappa_max,
                          std::vector<std::vector<std::uint32_t>> pool,
                          std::vector<std::vector<AllInverter::FnLevel>> functions) {
    AllInverter inv;
    inv.domain_ = domain;
    inv.function_count_ = function_count;
    inv.sigma_ = sigma;
    inv.seed_ = seed;
    inv.config_ = config;
    inv.kappa_max_ = kappa_max;
    inv.pool_ = std::move(pool);
    inv.functions_ = std::move(functions);
    return inv;
  }
};

namespace {

double log2_floor1(std::uint64_t n) {
  return std::max(1.0, std::log2(static_cast<double>(n)));
}

// Largest power of two >= 2 strictly below N / (C2 * log2 N), 0 if none.
std::uint32_t compute_kappa_max(std::uint64_t n, const AllInverterConfig& cfg) {
  double threshold =
      static_cast<double>(n) / (cfg.fallback_divisor * log2_floor1(n));
  std::uint32_t kappa = 0;
  for (std::uint64_t k = 2; static_cast<double>(k) < threshold && k <= n; k <<= 1)
    kappa = static_cast<std::uint32_t>(k);
  if (cfg.max_kappa != 0 && kappa > cfg.max_kappa) kappa = cfg.max_kappa;
  return kappa;
}

std::uint32_t sets_per_level(std::uint64_t n, std::uint32_t kappa,
                             const AllInverterConfig& cfg) {
  double ln_n = std::ceil(std::log(static_cast<double>(std::max<std::uint64_t>(n, 2))));
  return static_cast<std::uint32_t>(cfg.sets_per_unit * kappa * ln_n);
}

// Bernoulli sample of [N] at rate 1/kappa, resampled until the size lands in
// [N/(2 kappa), 2N/kappa]. Returns an empty vector when no attempt produced a
// usable (size >= 2) set.
std::vector<std::uint32_t> draw_sample(std::uint64_t n, std::uint32_t kappa,
                                       std::uint64_t seed,
                                       std::uint32_t attempts) {
  double rate = 1.0 / kappa;
  double lower = static_cast<double>(n) / (2.0 * kappa);
  double upper = 2.0 * static_cast<double>(n) / kappa;
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> last;
  for (std::uint32_t a = 0; a < attempts; ++a) {
    SplitMix64 rng(seed_mix(seed, 0x5a3c, a));
    out.clear();
    for (std::uint64_t j = 0; j < n; ++j)
      if (rng.next_double() < rate) out.push_back(static_cast<std::uint32_t>(j));
    double size = static_cast<double>(out.size());
    if (size >= lower && size <= upper && out.size() >= 2) return out;
    last = out;
  }
  if (last.size() >= 2) return last;  // window missed; still usable
  return {};
}

}  // namespace

const std::vector<AllInverter::FnLevel>& AllInverter::levels(
    std::size_t fn_index) const {
  if (fn_index >= functions_.size())
    throw InputError("inverter function index out of range");
  return functions_[fn_index];
}

std::uint64_t AllInverter::stored_entries() const {
  std::uint64_t total = 0;
  for (const auto& arr : pool_) total += arr.size();
  for (const auto& fn : functions_)
    for (const auto& level : fn)
      for (const auto& set : level.sets)
        total += set.table.stored_entries() + 4;  // hash + rerandomizer params
  return total;
}

std::size_t AllInverter::footprint_bytes() const {
  std::size_t total = 0;
  for (const auto& arr : pool_) total += arr.size() * sizeof(std::uint32_t);
  for (const auto& fn : functions_)
    for (const auto& level : fn)
      for (const auto& set : level.sets)
        total += set.table.footprint_bytes() + 3 * sizeof(std::uint64_t) +
                 sizeof(FnSet);
  return total;
}

void AllInverter::corrupt_for_testing() {
  for (auto& fn : functions_)
    for (auto& level : fn)
      for (auto& set : level.sets)
        for (auto& tab : InversionTableAccess::tables(set.table)) {
          tab.starts.clear();
          tab.ends.clear();
        }
}

AllInverter build_all_inverter(const std::vector<const KeyFn*>& fs, std::uint64_t N,
                               double sigma, std::uint64_t seed,
                               const AllInverterConfig& config,
                               AllInvertBuildStats* stats) {
  if (fs.empty()) throw InputError("build_all_inverter: need at least one function");
  if (N < 1) throw InputError("build_all_inverter: domain size must be >= 1");
  if (N > (1ull << 32)) throw InputError("build_all_inverter: domain size above 2^32");
  if (!(sigma >= 1.0) || sigma > static_cast<double>(std::max<std::uint64_t>(N, 1)))
    throw InputError("build_all_inverter: sigma must satisfy 1 <= sigma <= N");
  if (config.sets_per_unit < 1 || config.fallback_divisor < 1)
    throw InputError("build_all_inverter: invalid configuration constants");

  const std::uint32_t R = static_cast<std::uint32_t>(fs.size());
  std::uint32_t kappa_max = compute_kappa_max(N, config);

  std::vector<std::vector<std::uint32_t>> pool;
  std::vector<std::vector<AllInverter::FnLevel>> functions(R);
  std::uint64_t f_evals = 0;

  // Pool layout: one run of arrays per level, repeated per function unless
  // samples are shared. pool_base[level_idx] is the first array of the level
  // for function 0 (or for everyone when shared).
  struct LevelPlan {
    std::uint32_t kappa;
    std::uint32_t n_sets;
    std::uint32_t pool_base;
    bool usable;
  };
  std::vector<LevelPlan> plans;
  for (std::uint32_t kappa = 2; kappa != 0 && kappa <= kappa_max; kappa <<= 1)
    plans.push_back({kappa, sets_per_level(N, kappa, config), 0, true});

  auto build_level_arrays = [&](std::uint32_t fn_tag) {
    for (auto& plan : plans) {
      if (!plan.usable) continue;
      plan.pool_base = static_cast<std::uint32_t>(pool.size());
      for (std::uint32_t s = 0; s < plan.n_sets; ++s) {
        auto arr = draw_sample(
            N, plan.kappa, seed_mix(seed, 0x9001, plan.kappa, s, fn_tag),
            config.resample_attempts);
        if (arr.empty()) {
          std::fprintf(stderr,
                       "lshinv: skipping size-guess level %u (sample set too small)\n",
                       plan.kappa);
          pool.resize(plan.pool_base);
          plan.usable = false;
          break;
        }
        pool.push_back(std::move(arr));
      }
    }
  };

  if (config.shared_samples) build_level_arrays(0);

  std::vector<std::uint64_t> fp_row(N);
  for (std::uint32_t i = 0; i < R; ++i) {
    if (!config.shared_samples) build_level_arrays(i + 1);

    for (std::uint64_t j = 0; j < N; ++j) fp_row[j] = fs[i]->fingerprint(j);
    f_evals += N;

    for (const auto& plan : plans) {
      if (!plan.usable) continue;
      AllInverter::FnLevel level;
      level.kappa = plan.kappa;
      level.sets.reserve(plan.n_sets);
      for (std::uint32_t s = 0; s < plan.n_sets; ++s) {
        AllInverter::FnSet set;
        set.pool_index = plan.pool_base + s;
        const auto& samples = pool[set.pool_index];
        const std::uint64_t m = samples.size();

        SplitMix64 hrng(seed_mix(seed, 0xb0c4, plan.kappa, s, i));
        set.bucket_hash = UniversalHash::sample(hrng, m);

        // The composed map x -> bucket_hash(f(samples[x])), precomputed once
        // so chain building costs no extra f evaluations.
        std::vector<std::uint32_t> img(m);
        for (std::uint64_t x = 0; x < m; ++x)
          img[x] = static_cast<std::uint32_t>(
              set.bucket_hash.apply_fingerprint(fp_row[samples[x]]));

        double set_sigma = std::min(sigma, static_cast<double>(m));
        set.table = build_inversion(
            [&img](std::uint64_t x) { return static_cast<std::uint64_t>(img[x]); },
            m, set_sigma, seed_mix(seed, 0x7ab1, plan.kappa, s, i));
        level.sets.push_back(std::move(set));
      }
      functions[i].push_back(std::move(level));
    }
  }

  AllInverter inv = AllInverterAccess::make(N, R, sigma, seed, config, kappa_max,
                                            std::move(pool), std::move(functions));

  double log2n = log2_floor1(N);
  double bound = kAllInversionSpaceConstant *
                 (static_cast<double>(N) + static_cast<double>(N) * R / sigma) *
                 log2n * log2n * log2n;
  if (static_cast<double>(inv.stored_entries()) > bound)
    throw std::logic_error("all-function inverter exceeded its space envelope");

  if (stats) {
    stats->f_evals = f_evals;
    stats->stored_entries = inv.stored_entries();
  }
  return inv;
}

namespace {

std::vector<std::uint64_t> fallback_scan(const KeyFn& f, std::uint64_t n,
                                         const HashKey& target,
                                         std::uint64_t target_fp,
                                         std::uint64_t* evals) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t j = 0; j < n; ++j) {
    ++*evals;
    if (f.fingerprint(j) == target_fp && f.key(j) == target) out.push_back(j);
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> invert_all(const AllInverter& inv, std::size_t fn_index,
                                      const KeyFn& f, const HashKey& target,
                                      InvertStats* stats) {
  const auto& levels = inv.levels(fn_index);
  const std::uint64_t target_fp = fingerprint64(target);
  std::uint64_t evals = 0;
  std::set<std::uint64_t> found;

  std::size_t level_idx = 0;
  for (std::uint64_t kappa = 2;; kappa <<= 1, ++level_idx) {
    if (level_idx >= levels.size() || levels[level_idx].kappa != kappa) {
      auto exact = fallback_scan(f, inv.domain_size(), target, target_fp, &evals);
      if (stats) {
        stats->f_evals += evals;
        stats->fallback = true;
      }
      return exact;
    }

    for (const auto& set : levels[level_idx].sets) {
      const auto& samples = inv.sample_array(set.pool_index);
      std::uint64_t z = set.bucket_hash.apply_fingerprint(target_fp);
      auto composed = [&](std::uint64_t x) {
        ++evals;
        return set.bucket_hash.apply_fingerprint(f.fingerprint(samples[x]));
      };
      auto hit = invert_one(set.table, composed, z, nullptr);
      if (!hit) continue;
      std::uint64_t y = samples[*hit];
      ++evals;
      if (f.fingerprint(y) == target_fp && f.key(y) == target) found.insert(y);
    }

    if (found.size() < kappa) break;
  }

  if (stats) stats->f_evals += evals;
  return {found.begin(), found.end()};
}

std::vector<std::uint64_t> brute_preimage(const KeyFn& f, std::uint64_t N,
                                          const HashKey& target,
                                          std::uint64_t* f_evals) {
  std::uint64_t evals = 0;
  auto out = fallback_scan(f, N, target, fingerprint64(target), &evals);
  if (f_evals) *f_evals += evals;
  return out;
}

CheckedInvert invert_all_checked(const AllInverter& inv, std::size_t fn_index,
                                 const KeyFn& f, const HashKey& target) {
  CheckedInvert out;
  out.result = invert_all(inv, fn_index, f, target);
  out.exact = brute_preimage(f, inv.domain_size(), target);
  out.sound = std::includes(out.exact.begin(), out.exact.end(), out.result.begin(),
                            out.result.end());
  out.equal = out.result == out.exact;
  return out;
}

namespace {

constexpr std::uint16_t kInverterVersion = 1;

void write_table(ByteWriter& w, const InversionTable& t) {
  w.u64(t.domain_size());
  w.f64(t.sigma());
  w.u32(t.chain_length());
  w.u32(static_cast<std::uint32_t>(t.tables().size()));
  for (const auto& tab : t.tables()) {
    w.u64(tab.rerandomizer.a());
    w.u64(tab.rerandomizer.b());
    w.u64(tab.starts.size());
    for (std::uint32_t v : tab.starts) w.u32(v);
    for (std::uint32_t v : tab.ends) w.u32(v);
  }
}

InversionTable read_table(ByteReader& r) {
  std::uint64_t domain = r.u64();
  double sigma = r.f64();
  std::uint32_t chain_length = r.u32();
  std::uint32_t n_tables = r.u32();
  std::vector<InversionTable::Table> tables(n_tables);
  for (auto& tab : tables) {
    std::uint64_t a = r.u64();
    std::uint64_t b = r.u64();
    tab.rerandomizer = MulModHash(a, b, domain);
    std::uint64_t chains = r.u64();
    tab.starts.resize(chains);
    tab.ends.resize(chains);
    for (auto& v : tab.starts) v = r.u32();
    for (auto& v : tab.ends) v = r.u32();
  }
  return InversionTableAccess::make(domain, sigma, chain_length, std::move(tables));
}

}  // namespace

std::string save_inverter_bytes(const AllInverter& inv) {
  ByteWriter w;
  w.bytes("AFIV");
  w.u16(kInverterVersion);
  w.u16(0);
  w.u64(inv.domain_size());
  w.u32(inv.function_count());
  w.f64(inv.sigma());
  w.u64(inv.seed());
  const auto& cfg = inv.config();
  w.u32(cfg.sets_per_unit);
  w.u32(cfg.fallback_divisor);
  w.u32(cfg.max_kappa);
  w.u8(cfg.shared_samples ? 1 : 0);
  w.u8(0);
  w.u16(0);
  w.u32(cfg.resample_attempts);
  w.u32(inv.kappa_max());

  std::uint32_t pool_count = inv.pool_size();
  w.u32(pool_count);
  for (std::uint32_t p = 0; p < pool_count; ++p) {
    const auto& arr = inv.sample_array(p);
    w.u64(arr.size());
    for (std::uint32_t v : arr) w.u32(v);
  }

  for (std::uint32_t i = 0; i < inv.function_count(); ++i) {
    const auto& levels = inv.levels(i);
    w.u32(static_cast<std::uint32_t>(levels.size()));
    for (const auto& level : levels) {
      w.u32(level.kappa);
      w.u32(static_cast<std::uint32_t>(level.sets.size()));
      for (const auto& set : level.sets) {
        w.u32(set.pool_index);
        w.u64(set.bucket_hash.a());
        w.u64(set.bucket_hash.b());
        w.u64(set.bucket_hash.modulus());
        write_table(w, set.table);
      }
    }
  }
  return w.take();
}

AllInverter load_inverter_bytes(std::string_view bytes) {
  ByteReader r(bytes);
  r.expect_magic("AFIV", "inverter");
  std::size_t at = r.offset();
  std::uint16_t version = r.u16();
  if (version != kInverterVersion)
    throw FormatError("unsupported inverter format version", at);
  at = r.offset();
  if (r.u16() != 0) throw FormatError("nonzero reserved field", at);
  std::uint64_t domain = r.u64();
  std::uint32_t function_count = r.u32();
  double sigma = r.f64();
  std::uint64_t seed = r.u64();
  AllInverterConfig cfg;
  cfg.sets_per_unit = r.u32();
  cfg.fallback_divisor = r.u32();
  cfg.max_kappa = r.u32();
  cfg.shared_samples = r.u8() != 0;
  r.u8();
  r.u16();
  cfg.resample_attempts = r.u32();
  std::uint32_t kappa_max = r.u32();

  std::uint32_t pool_count = r.u32();
  std::vector<std::vector<std::uint32_t>> pool(pool_count);
  for (auto& arr : pool) {
    arr.resize(r.u64());
    for (auto& v : arr) v = r.u32();
  }

  std::vector<std::vector<AllInverter::FnLevel>> functions(function_count);
  for (auto& fn : functions) {
    std::uint32_t n_levels = r.u32();
    fn.resize(n_levels);
    for (auto& level : fn) {
      level.kappa = r.u32();
      std::uint32_t n_sets = r.u32();
      level.sets.resize(n_sets);
      for (auto& set : level.sets) {
        at = r.offset();
        set.pool_index = r.u32();
        if (set.pool_index >= pool_count)
          throw FormatError("sample pool index out of range", at);
        std::uint64_t a = r.u64();
        std::uint64_t b = r.u64();
        std::uint64_t m = r.u64();
        set.bucket_hash = UniversalHash(a, b, m);
        set.table = read_table(r);
      }
    }
  }
  r.expect_end("inverter");
  return AllInverterAccess::make(domain, function_count, sigma, seed, cfg,
                                 kappa_max, std::move(pool), std::move(functions));
}

void save_inverter(const AllInverter& inv, const std::string& path) {
  write_file(path, save_inverter_bytes(inv));
}

AllInverter load_inverter(const std::string& path) {
  return load_inverter_bytes(read_file(path));
}

}  // namespace lshinv
