#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lshinv/ann.hpp"
#include "lshinv/dataset.hpp"

namespace lshinv {

struct BenchParams {
  PlantedSpec spec;
  double s = 0;             // inverted only
  std::uint32_t trials = 100;
  double target_miss = 0.1;
  double bucket_width = 4.0;
};

struct BenchRecord {
  std::string mode;  // "classic" | "inverted"
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  Metric metric = Metric::hamming;
  double r = 0;
  double c = 0;
  double s = 0;  // 0 when not applicable
  std::uint64_t seed = 0;
  std::uint32_t trials = 0;
  double build_ms = 0;  // timing column
  std::size_t bytes_total = 0;
  std::size_t bytes_dataset = 0;
  std::size_t bytes_battery = 0;
  std::size_t bytes_index = 0;
  double recall = 0;
  double mean_query_ms = 0;  // timing column
  double mean_candidates = 0;
  double mean_inverter_f_evals = 0;
};

/// CSV columns, fixed order. build_ms and mean_query_ms are the timing
/// columns; everything else is deterministic given the seed.
std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& record);

/// Strips the timing columns from a CSV line (header or row); used by the
/// determinism checks.
std::string strip_timing_columns(const std::string& csv_line);

/// Builds one index over a planted instance and runs `trials` freshly planted
/// queries against it.
BenchRecord run_bench_classic(const BenchParams& params);
BenchRecord run_bench_inverted(const BenchParams& params);

}  // namespace lshinv
