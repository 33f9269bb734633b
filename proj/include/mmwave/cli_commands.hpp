#pragma once

#include <string>

#include "mmwave/scenario.hpp"

namespace mmwave::cli {

struct RunOptions {
  Scenario scenario;
  std::string overrides;  // echo of command-line overrides, for CSV metadata
  std::string map_path;   // compare-streets only
  int workers = 0;        // 0: MMWAVE_WORKERS env var, then all cores
};

// Each command writes its CSV outputs under scenario.output_dir and returns
// a process exit code (0 on success).
int cmd_coverage_curve(const RunOptions& opt);
int cmd_assoc(const RunOptions& opt);
int cmd_scaling(const RunOptions& opt);
int cmd_compare_streets(const RunOptions& opt);
int cmd_validate(const RunOptions& opt);  // exit code = number of failures

/// Full argv entry point (subcommand dispatch, scenario loading, overrides).
int run_cli(int argc, const char* const* argv);

}  // namespace mmwave::cli
