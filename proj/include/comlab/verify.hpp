#pragma once

// Executable verification suites: each check pins a closed-form or
// independently derived expectation with an explicit tolerance and reports
// pass/fail. The `all` suite is the project's acceptance gate.

#include <ostream>
#include <string>
#include <vector>

namespace comlab {

struct CheckResult {
  std::string id;       // criterion id, e.g. "4a"
  std::string suite;    // schwarzschild | newtonian | divergent | prescribed | cmc
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

// suite: schwarzschild | newtonian | divergent | prescribed | cmc | all
std::vector<CheckResult> run_verification_suite(const std::string& suite);

void print_results(const std::vector<CheckResult>& results, std::ostream& os);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace comlab
