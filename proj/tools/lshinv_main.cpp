// lshinv: planted-instance generation, index benchmarking, exponent analysis
// and structure self-tests, from one binary.
//
// Exit codes: 0 success, 1 runtime or suite failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lshinv/analysis.hpp"
#include "lshinv/bench.hpp"
#include "lshinv/dataset.hpp"
#include "lshinv/errors.hpp"
#include "lshinv/selftest.hpp"

namespace {

using namespace lshinv;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string field = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      double v = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError("cannot parse number: '" + field + "'");
    }
    pos = comma + 1;
  }
  if (out.empty()) throw InputError("empty number list");
  return out;
}

std::string query_path_for(const std::string& out_path) {
  std::string path = out_path;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".anni")
    return path.substr(0, path.size() - 5) + ".annq";
  return path + ".annq";
}

int cmd_gen(std::uint64_t n, std::uint32_t d, const std::string& metric, double r,
            double c, std::uint64_t seed, const std::string& out) {
  PlantedSpec spec{n, d, metric_from_name(metric), r, c, seed};
  PlantedInstance inst = generate_planted(spec);
  save_dataset(inst.dataset, out);
  std::string qpath = query_path_for(out);
  save_query(inst.query, inst.planted_index, seed, qpath);
  std::printf("wrote %s (%llu points, %s, d=%u) and %s (planted index %llu)\n",
              out.c_str(), static_cast<unsigned long long>(n), metric.c_str(), d,
              qpath.c_str(), static_cast<unsigned long long>(inst.planted_index));
  return 0;
}

int cmd_bench(const std::string& mode, std::uint64_t n, std::uint32_t d,
              const std::string& metric, double r, double c, std::uint64_t seed,
              const std::string& in_path, const std::string& s_list,
              std::uint32_t trials, double target_miss, double bucket_width) {
  BenchParams params;
  params.spec = PlantedSpec{n, d, metric_from_name(metric), r, c, seed};
  params.trials = trials;
  params.target_miss = target_miss;
  params.bucket_width = bucket_width;
  if (!in_path.empty()) {
    Dataset ds = load_dataset(in_path);
    params.spec.n = ds.size();
    params.spec.dim = ds.dim();
    params.spec.metric = ds.metric();
    params.spec.seed = ds.seed();
  }

  bool want_classic = mode == "classic" || mode == "both";
  bool want_inverted = mode == "inverted" || mode == "both";

  LshFamily family = LshFamily::for_metric(params.spec.metric, params.spec.dim,
                                           params.spec.radius, params.spec.approx,
                                           bucket_width);
  double rho = family.profile.rho();

  std::vector<double> s_values;
  if (want_inverted) {
    s_values = s_list.empty() ? std::vector<double>{rho / 2}
                              : parse_double_list(s_list);
    for (double s : s_values)
      if (!(s > 0) || s >= rho)
        throw InputError("space-saving exponent " + std::to_string(s) +
                         " out of range: need 0 < s < rho = " + std::to_string(rho));
  }

  std::printf("%s\n", bench_csv_header().c_str());
  if (want_classic) {
    BenchRecord rec = run_bench_classic(params);
    std::printf("%s\n", bench_csv_row(rec).c_str());
    std::fflush(stdout);
  }
  for (double s : s_values) {
    params.s = s;
    BenchRecord rec = run_bench_inverted(params);
    std::printf("%s\n", bench_csv_row(rec).c_str());
    std::fflush(stdout);
  }
  return 0;
}

int cmd_analyze(const std::string& c_list, bool table2, bool as_csv) {
  std::vector<double> cs = table2 ? table2_cs() : parse_double_list(c_list);
  for (double c : cs)
    if (!(c > 1)) throw InputError("approximation factor must be > 1");
  auto rows = report_table(cs);
  std::printf("%s", (as_csv ? format_report_csv(rows) : format_report_text(rows)).c_str());
  return 0;
}

int cmd_selftest(bool quick, bool inject_fault) {
  auto t0 = std::chrono::steady_clock::now();
  SelftestOptions opt{quick, inject_fault};
  auto results = run_selftest(opt);
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %-16s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all_ok &= r.passed;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("selftest %s in %.1f s\n", all_ok ? "passed" : "FAILED", secs);
  if (quick && secs > 60)
    std::fprintf(stderr, "warning: --quick run took longer than 60 s\n");
  if (!all_ok) {
    for (const auto& r : results)
      if (!r.passed) std::fprintf(stderr, "failing suite: %s\n", r.name.c_str());
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-efficient approximate nearest neighbor search via function inversion"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a planted dataset plus query sidecar");
  std::uint64_t g_n = 0, g_seed = 0;
  std::uint32_t g_d = 0;
  std::string g_metric = "hamming", g_out;
  double g_r = 0, g_c = 0;
  gen->add_option("--n", g_n, "number of points")->required();
  gen->add_option("--d", g_d, "dimension")->required();
  gen->add_option("--metric", g_metric, "hamming|euclidean|manhattan")->required();
  gen->add_option("--r", g_r, "near radius")->required();
  gen->add_option("--c", g_c, "approximation factor (> 1)")->required();
  gen->add_option("--seed", g_seed, "generator seed")->required();
  gen->add_option("--out", g_out, "output dataset path")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "build index(es) and emit CSV measurements");
  std::string b_mode = "both", b_metric = "hamming", b_in, b_s;
  std::uint64_t b_n = 4096, b_seed = 1;
  std::uint32_t b_d = 256, b_trials = 100;
  double b_r = 16, b_c = 2, b_miss = 0.1, b_w = 4.0;
  bench->add_option("--mode", b_mode, "classic|inverted|both")
      ->check(CLI::IsMember({"classic", "inverted", "both"}));
  bench->add_option("--n", b_n, "points (ignored with --in)");
  bench->add_option("--d", b_d, "dimension (ignored with --in)");
  bench->add_option("--metric", b_metric, "metric (ignored with --in)");
  bench->add_option("--r", b_r, "near radius");
  bench->add_option("--c", b_c, "approximation factor");
  bench->add_option("--seed", b_seed, "seed");
  bench->add_option("--in", b_in, "load dataset from file instead of generating");
  bench->add_option("--s", b_s, "space-saving exponent(s), comma separated (inverted)");
  bench->add_option("--trials", b_trials, "planted queries per index");
  bench->add_option("--target-miss", b_miss, "planner miss budget (default 0.1)");
  bench->add_option("--bucket-width", b_w, "projection bucket width (euclidean)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "exponent tradeoff table");
  std::string a_c;
  bool a_table2 = false, a_csv = false;
  analyze->add_option("--c", a_c, "approximation factors, comma separated");
  analyze->add_flag("--table2", a_table2, "emit the six preset rows");
  analyze->add_flag("--csv", a_csv, "CSV output instead of aligned text");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the structure property suites");
  bool st_quick = false, st_fault = false;
  selftest->add_flag("--quick", st_quick, "reduced scale");
  selftest->add_flag("--inject-fault", st_fault,
                     "corrupt the inverter first; suites must fail (testing hook)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(g_n, g_d, g_metric, g_r, g_c, g_seed, g_out);
    if (bench->parsed()) {
      if (b_mode == "classic" && !b_s.empty())
        throw InputError("--s conflicts with --mode classic");
      return cmd_bench(b_mode, b_n, b_d, b_metric, b_r, b_c, b_seed, b_in, b_s,
                       b_trials, b_miss, b_w);
    }
    if (analyze->parsed()) {
      if (a_c.empty() && !a_table2)
        throw InputError("analyze needs --c <list> or --table2");
      return cmd_analyze(a_c, a_table2, a_csv);
    }
    if (selftest->parsed()) return cmd_selftest(st_quick, st_fault);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
