#pragma once

#include <string>
#include <vector>

namespace lcs::suite {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_ok = false;
  double seconds = 0.0;
  double limit = 0.0;  // runtime budget in seconds
  std::vector<std::string> failures;
  std::string summary;
  bool pass() const { return checks_ok && seconds <= limit; }
};

std::vector<int> criterion_ids();
CriterionResult run_criterion(int id);

}  // namespace lcs::suite
