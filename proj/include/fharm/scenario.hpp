#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fharm/liouville.hpp"

namespace fharm {

/// One entry of a suite file: named configurations resolved into an
/// AuditScenario, an expected outcome, and output settings.
struct Scenario {
  std::string id;
  AuditScenario audit;
  std::optional<VerdictKind> expect_verdict;
  std::vector<std::string> expect_failing;  // subset that must be reported
  // Descriptive copies for the report.
  std::string profile_desc, manifold_desc, factor_desc, target_desc;
};

struct RunOptions {
  std::string out_dir = "out";
  bool emit_curves = true;
  double tolerance_scale = 1.0;  // multiplies audit acceptance tolerances
  int workers = 0;               // 0: one per scenario up to hardware limit
  std::string only_scenario;    // run a single id when non-empty
};

struct ScenarioResult {
  std::string id;
  bool ran = false;
  bool expectation_met = false;
  std::string error;  // non-empty on numeric failure
  LiouvilleOutcome outcome;
  GrowthReport growth;
  bool has_growth = false;
  UpperBoundReport machinery;
  bool has_machinery = false;
  double annulus_residual = 0.0;  // worst stress-energy identity residual
};

struct SuiteResult {
  std::string suite_name;
  std::vector<ScenarioResult> results;
  bool all_expectations_met = true;
};

/// Parses a suite file (JSON). Raises ErrorKind::config with a location on
/// malformed input or unresolved builtin names.
std::vector<Scenario> load_suite(const std::string& path,
                                 std::string* suite_name = nullptr);

/// Runs scenarios concurrently (pure computations; results merged by id in
/// file order) and writes one report.json per scenario plus CSV curves.
SuiteResult run_suite(const std::vector<Scenario>& scenarios,
                      const RunOptions& options,
                      const std::string& suite_name = "suite");

/// load + run + summary.json; returns the process exit status:
/// 0 all expectations met, 2 parse/config failure, 3 numeric failure.
int run_suite_file(const std::string& path, const RunOptions& options);

}  // namespace fharm
