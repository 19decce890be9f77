#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lshinv/bench.hpp"
#include "lshinv/dataset.hpp"
#include "lshinv/io.hpp"

using namespace lshinv;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout only
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(LSHINV_BIN_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/lshinv_test_") + name;
}

}  // namespace

TEST_CASE("gen writes loadable dataset and query files") {
  std::string out = tmp_path("a.anni");
  auto r = run_cli("gen --n 256 --d 64 --metric hamming --r 4 --c 2 --seed 7 --out " + out);
  CHECK(r.exit_code == 0);

  Dataset ds = load_dataset(out);
  CHECK(ds.size() == 256);
  CHECK(ds.dim() == 64);
  CHECK(ds.metric() == Metric::hamming);
  CHECK(ds.seed() == 7);

  auto [q, planted] = load_query(tmp_path("a.annq"));
  CHECK(planted < 256);
  CHECK(ds.distance_to(planted, q) <= 4.0);
}

TEST_CASE("gen is deterministic: same flags, identical bytes") {
  std::string out1 = tmp_path("d1.anni"), out2 = tmp_path("d2.anni");
  std::string flags = "gen --n 128 --d 96 --metric hamming --r 3 --c 2 --seed 123 --out ";
  CHECK(run_cli(flags + out1).exit_code == 0);
  CHECK(run_cli(flags + out2).exit_code == 0);
  CHECK(read_file(out1) == read_file(out2));
  CHECK(read_file(tmp_path("d1.annq")) == read_file(tmp_path("d2.annq")));
}

TEST_CASE("gen usage errors exit with code 2") {
  CHECK(run_cli("gen --d 64 --metric hamming --r 4 --c 2 --seed 7 --out /tmp/x").exit_code == 2);
  CHECK(run_cli("gen --n 16 --d 64 --metric hamming --r 4 --c 1 --seed 7 --out /tmp/x").exit_code == 2);
  CHECK(run_cli("gen --n 16 --d 64 --metric nosuch --r 4 --c 2 --seed 7 --out /tmp/x").exit_code == 2);
}

TEST_CASE("bench emits one CSV row per mode and honors --in") {
  std::string out = tmp_path("b.anni");
  REQUIRE(run_cli("gen --n 256 --d 96 --metric hamming --r 6 --c 2 --seed 3 --out " + out)
              .exit_code == 0);
  auto r = run_cli("bench --mode both --in " + out + " --r 6 --c 2 --trials 20");
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == bench_csv_header());
  CHECK(lines[1].rfind("classic,", 0) == 0);
  CHECK(lines[2].rfind("inverted,", 0) == 0);
}

TEST_CASE("bench sweeps s and stays deterministic minus timing") {
  std::string flags =
      "bench --mode inverted --n 256 --d 96 --metric hamming --r 6 --c 2 "
      "--seed 5 --trials 10 --s 0.1,0.2";
  auto a = run_cli(flags);
  auto b = run_cli(flags);
  CHECK(a.exit_code == 0);
  auto la = lines_of(a.out), lb = lines_of(b.out);
  REQUIRE(la.size() == 3);  // header + two s values
  REQUIRE(lb.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(strip_timing_columns(la[i]) == strip_timing_columns(lb[i]));
}

TEST_CASE("bench flag validation") {
  CHECK(run_cli("bench --mode classic --s 0.2 --n 64 --d 64 --r 2 --c 2").exit_code == 2);
  // s >= rho is rejected with the computed rho reported on stderr
  CHECK(run_cli("bench --mode inverted --n 64 --d 64 --metric hamming --r 2 --c 2 --s 0.99")
            .exit_code == 2);
  CHECK(run_cli("bench --mode nosuch").exit_code == 2);
  // no family for manhattan
  CHECK(run_cli("bench --mode classic --n 64 --d 8 --metric manhattan --r 1 --c 2")
            .exit_code == 2);
}

TEST_CASE("analyze prints the preset rows and rejects bad factors") {
  auto r = run_cli("analyze --table2 --csv");
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0].rfind("c,alpha,alrw,preproc", 0) == 0);

  // row for c=2: alpha column within 0.001 of .384
  auto row2 = lines[4];
  double c = 0, alpha_v = 0;
  REQUIRE(std::sscanf(row2.c_str(), "%lf,%lf", &c, &alpha_v) == 2);
  CHECK(c == 2.0);
  CHECK(std::abs(alpha_v - 0.384) <= 0.001);

  CHECK(run_cli("analyze --c 0.5").exit_code == 2);
  CHECK(run_cli("analyze").exit_code == 2);
  CHECK(run_cli("analyze --c 2,3").exit_code == 0);
}

TEST_CASE("selftest passes healthy and fails under fault injection") {
  auto ok = run_cli("selftest --quick");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("PASS") != std::string::npos);

  auto bad = run_cli("selftest --quick --inject-fault");
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("unknown subcommands exit with usage error") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
}
