#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lshinv/bench.hpp"

using namespace lshinv;

namespace {

BenchParams small_params() {
  BenchParams p;
  p.spec = PlantedSpec{512, 96, Metric::hamming, 6, 2, 99};
  p.trials = 40;
  return p;
}

}  // namespace

TEST_CASE("CSV schema is stable") {
  // Golden header: column set and order are frozen.
  CHECK(bench_csv_header() ==
        "mode,n,d,metric,r,c,s,seed,trials,build_ms,bytes_total,bytes_dataset,"
        "bytes_battery,bytes_index,recall,mean_query_ms,mean_candidates,"
        "mean_inverter_f_evals");
  CHECK(strip_timing_columns(bench_csv_header()) ==
        "mode,n,d,metric,r,c,s,seed,trials,bytes_total,bytes_dataset,"
        "bytes_battery,bytes_index,recall,mean_candidates,"
        "mean_inverter_f_evals");
}

TEST_CASE("classic bench records are deterministic minus timing") {
  BenchParams p = small_params();
  BenchRecord a = run_bench_classic(p);
  BenchRecord b = run_bench_classic(p);
  CHECK(strip_timing_columns(bench_csv_row(a)) ==
        strip_timing_columns(bench_csv_row(b)));
  CHECK(a.recall >= 0.7);  // planner targets 0.9; loose at this scale
  CHECK(a.bytes_total == a.bytes_dataset + a.bytes_battery + a.bytes_index);
  CHECK(a.mode == "classic");
  CHECK(bench_csv_row(a).find("classic,512,96,hamming,6,2,,99,40,") == 0);
}

TEST_CASE("inverted bench records are deterministic minus timing") {
  BenchParams p = small_params();
  p.s = 0.2;
  BenchRecord a = run_bench_inverted(p);
  BenchRecord b = run_bench_inverted(p);
  CHECK(strip_timing_columns(bench_csv_row(a)) ==
        strip_timing_columns(bench_csv_row(b)));
  CHECK(a.recall >= 0.7);
  CHECK(a.mean_inverter_f_evals > 0);
  CHECK(a.mode == "inverted");
  CHECK(a.s == 0.2);
}
