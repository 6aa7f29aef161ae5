#pragma once

// Verification suites: exact identities, kernel oracles, dynamics checks,
// Monte Carlo comparisons and asymptotic trend reports. Each suite returns a
// JSON report with one entry per test.

#include "rwall/montecarlo_stats.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace rwall {

struct VerifyOptions {
  std::uint64_t seed = 20111;
  unsigned threads = 0;
  /// Multiplies every trajectory count; below 1 gives quick, weaker runs.
  double trajectory_scale = 1.0;
  int max_level = 5;
  int max_part = 4;
  /// Values of q for the exact suites; empty selects {1/4, 1/2}.
  std::vector<Rational> qs;
};

struct SuiteInfo {
  std::string name;
  int criterion;
  bool blocking;
  std::string description;
};

const std::vector<SuiteInfo>& suite_catalog();
const SuiteInfo& suite_info(const std::string& name);

struct SuiteResult {
  SuiteInfo info;
  Verdict verdict = Verdict::inconclusive;
  std::string summary;
  nlohmann::ordered_json report;
  double runtime_seconds = 0;
};

SuiteResult run_suite(const std::string& name, const VerifyOptions& options = {});

/// Consolidated report; `failed` is set when a blocking suite did not pass.
nlohmann::ordered_json consolidated_report(const std::vector<SuiteResult>& results, const VerifyOptions& options,
                                           bool& failed);

}  // namespace rwall
