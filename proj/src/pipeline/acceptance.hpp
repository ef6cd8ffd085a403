#pragma once

#include <string>
#include <vector>

#include "io/config.hpp"

namespace wkam {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<CriterionResult> results;
  bool all_pass = false;
};

// The full verification battery. Instances are built in, desk scale; only
// out_dir and seed are taken from the configuration. Each criterion returns
// pass/fail with measured numbers in the detail string; exceptions fail the
// criterion, never the suite.
SuiteReport run_acceptance_suite(const RunConfig& cfg);

}  // namespace wkam
