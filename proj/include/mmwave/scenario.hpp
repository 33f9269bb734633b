#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mmwave/geometry.hpp"

// Experiment description: flat `section.key = value` text, diff-friendly.
// Unset keys keep the defaults below (the standard simulation parameters).

namespace mmwave::cli {

struct ThresholdGrid {
  double start_db = -10.0;
  double stop_db = 30.0;
  double step_db = 1.0;

  Eigen::ArrayXd grid() const;  // inclusive of both ends
};

struct McSettings {
  int n_layouts = 2000;
  int n_fading = 2;
  std::uint64_t seed = 1;
};

struct SweepSpec {
  std::string parameter;        // one of: lambda_s, lambda_b, alpha_n, delta_db, n_t
  std::vector<double> values;

  bool empty() const { return parameter.empty(); }
};

struct Scenario {
  geometry::NetworkConfig network;
  int antenna_n_t = 64;
  ThresholdGrid thresholds;
  McSettings mc;
  SweepSpec sweep;
  std::string output_dir = "out";

  void validate() const;  // throws std::invalid_argument
};

/// Parses a scenario file. Unknown keys and malformed lines raise
/// std::runtime_error with the line number.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text,
                             const std::string& origin = "<string>");

/// Canonical text form; parse(serialize(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// Applies one `section.key = value` assignment (used for CLI overrides).
void apply_scenario_key(Scenario& s, const std::string& key,
                        const std::string& value);

bool scenario_equal(const Scenario& a, const Scenario& b);

}  // namespace mmwave::cli
