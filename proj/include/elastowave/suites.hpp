#pragma once

// Named experiment suites. Each one measures a fixed set of quantities,
// judges them against pinned thresholds, and hands back everything the
// report writer needs.

#include <memory>
#include <string>
#include <vector>

#include "elastowave/report.hpp"
#include "elastowave/scenario.hpp"
#include "elastowave/trajectory_io.hpp"

namespace elastowave {

struct Assertion {
  std::string criterion;  // "C1" ... "C11"
  std::string name;
  double observed = 0.0;
  std::string relation;   // "<=" or ">="
  double bound = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<std::string> criteria;
  std::vector<Assertion> assertions;
  Json measurements = Json::object();
  std::vector<Series> series;
  // marched solution of the nonlinear suites, for export
  std::shared_ptr<const Trajectory> trajectory;
  TrajectoryInfo trajectory_info;

  bool passed() const;
  Json summary() const;
};

/// Range checks on the effective values (after command-line overrides) plus
/// suite-specific rules: allowed [suite] keys, data family and schedule
/// constraints. Throws config.
void validate_scenario(const Scenario& sc);

SuiteResult run_suite(const Scenario& sc);

/// manifest.json, summary.json and one CSV per series, written into out_dir
/// (created if needed). Returns the written file names in order.
std::vector<std::string> write_outputs(const Scenario& sc, const SuiteResult& res, const std::string& out_dir);

/// Every effective setting of a run, as written into manifest.json.
Json effective_config(const Scenario& sc);

/// FNV-1a of the serialized effective configuration.
std::string config_hash(const Scenario& sc);

}  // namespace elastowave
