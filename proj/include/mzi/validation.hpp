#pragma once

#include <string>
#include <vector>

// Cross-module invariant suites. Each suite samples its own deterministic
// stream, reports the worst residual it saw, and passes iff that residual
// stays within the suite's tolerance. The CLI `validate` subcommand prints
// one line per suite; the test binaries call them directly.
namespace mzi {

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

std::vector<SuiteResult> run_validation_suites();

}  // namespace mzi
