#pragma once

#include <string>
#include <vector>

namespace lshinv {

struct SelftestOptions {
  bool quick = false;
  /// Fault-injection hook: corrupts the inverter before the equivalence
  /// suite runs; the suite must then fail.
  bool inject_fault = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Reduced-scale property suites over the inversion structures: lookup
/// success rates, soundness, instrumented work bounds, space envelopes, and
/// oracle equivalence of the all-function inverter.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options);

}  // namespace lshinv
