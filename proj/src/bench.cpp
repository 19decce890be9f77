#include "lshinv/bench.hpp"

#include <chrono>
#include <cstdio>
#include <memory>
#include <sstream>

#include "lshinv/rng.hpp"

namespace lshinv {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename Index, typename QueryFn>
BenchRecord run_trials(const BenchParams& params, const Index& index,
                       const QueryFn& query, BenchRecord record) {
  const Dataset& ds = index.dataset();
  std::uint64_t hits = 0;
  double query_ms = 0, candidates = 0, f_evals = 0;
  for (std::uint32_t t = 0; t < params.trials; ++t) {
    auto [q, target] = plant_query(ds, params.spec.radius,
                                   seed_mix(params.spec.seed, 0xbe7c, t));
    (void)target;
    QueryResult res = query(index, q);
    if (res.found) ++hits;
    query_ms += res.wall_ms;
    candidates += static_cast<double>(res.candidates_examined);
    f_evals += static_cast<double>(res.inverter_f_evals);
  }
  record.trials = params.trials;
  if (params.trials > 0) {
    record.recall = static_cast<double>(hits) / params.trials;
    record.mean_query_ms = query_ms / params.trials;
    record.mean_candidates = candidates / params.trials;
    record.mean_inverter_f_evals = f_evals / params.trials;
  }
  return record;
}

BenchRecord base_record(const BenchParams& params, const char* mode) {
  BenchRecord r;
  r.mode = mode;
  r.n = params.spec.n;
  r.d = params.spec.dim;
  r.metric = params.spec.metric;
  r.r = params.spec.radius;
  r.c = params.spec.approx;
  r.seed = params.spec.seed;
  return r;
}

void fill_footprint(BenchRecord& r, const MemoryFootprint& f) {
  r.bytes_dataset = f.dataset;
  r.bytes_battery = f.battery;
  r.bytes_index = f.index;
  r.bytes_total = f.total();
}

}  // namespace

std::string bench_csv_header() {
  return "mode,n,d,metric,r,c,s,seed,trials,build_ms,bytes_total,bytes_dataset,"
         "bytes_battery,bytes_index,recall,mean_query_ms,mean_candidates,"
         "mean_inverter_f_evals";
}

std::string bench_csv_row(const BenchRecord& r) {
  char buf[512];
  char s_field[32] = "";
  if (r.s > 0) std::snprintf(s_field, sizeof(s_field), "%.6g", r.s);
  std::snprintf(buf, sizeof(buf),
                "%s,%llu,%u,%s,%.6g,%.6g,%s,%llu,%u,%.3f,%zu,%zu,%zu,%zu,%.6g,%.6f,"
                "%.6g,%.6g",
                r.mode.c_str(), static_cast<unsigned long long>(r.n), r.d,
                metric_name(r.metric), r.r, r.c, s_field,
                static_cast<unsigned long long>(r.seed), r.trials, r.build_ms,
                r.bytes_total, r.bytes_dataset, r.bytes_battery, r.bytes_index,
                r.recall, r.mean_query_ms, r.mean_candidates,
                r.mean_inverter_f_evals);
  return buf;
}

std::string strip_timing_columns(const std::string& csv_line) {
  // Timing columns are build_ms (index 9) and mean_query_ms (index 15).
  std::stringstream in(csv_line);
  std::string field, out;
  int idx = 0;
  while (std::getline(in, field, ',')) {
    if (idx != 9 && idx != 15) {
      if (!out.empty()) out += ',';
      out += field;
    }
    ++idx;
  }
  return out;
}

BenchRecord run_bench_classic(const BenchParams& params) {
  BenchRecord record = base_record(params, "classic");
  auto t0 = Clock::now();
  PlantedInstance inst = generate_planted(params.spec);
  auto ds = std::make_shared<Dataset>(std::move(inst.dataset));
  LshFamily family = LshFamily::for_metric(params.spec.metric, params.spec.dim,
                                           params.spec.radius, params.spec.approx,
                                           params.bucket_width);
  ClassicIndex index =
      build_classic(ds, family, seed_mix(params.spec.seed, 0xc1a5), params.target_miss);
  record.build_ms = ms_since(t0);
  fill_footprint(record, index.footprint());
  return run_trials(params, index,
                    [](const ClassicIndex& i, const Point& q) { return query_classic(i, q); },
                    std::move(record));
}

BenchRecord run_bench_inverted(const BenchParams& params) {
  BenchRecord record = base_record(params, "inverted");
  record.s = params.s;
  auto t0 = Clock::now();
  PlantedInstance inst = generate_planted(params.spec);
  auto ds = std::make_shared<Dataset>(std::move(inst.dataset));
  LshFamily family = LshFamily::for_metric(params.spec.metric, params.spec.dim,
                                           params.spec.radius, params.spec.approx,
                                           params.bucket_width);
  InvertedIndex index = build_inverted(ds, family, params.s,
                                       seed_mix(params.spec.seed, 0xc1a5),
                                       params.target_miss);
  record.build_ms = ms_since(t0);
  fill_footprint(record, index.footprint());
  return run_trials(params, index,
                    [](const InvertedIndex& i, const Point& q) { return query_inverted(i, q); },
                    std::move(record));
}

}  // namespace lshinv
