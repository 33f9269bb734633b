#pragma once

#include <ostream>
#include <string>
#include <vector>

// The validation suite: one entry per release gate, each with its pinned
// tolerance. `mmwave validate` and the acceptance test binary both run this.

namespace mmwave::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs every criterion; prints one PASS/FAIL line per criterion to `log`
/// when provided.
std::vector<CriterionResult> run_acceptance(int workers = 0,
                                            std::ostream* log = nullptr);

}  // namespace mmwave::validation
