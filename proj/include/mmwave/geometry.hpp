#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

// Street systems and base station placement. Streets are axis-aligned lines;
// the receiver sits at the origin and its street (y = 0) is always part of
// the layout. Base stations live on streets as 1-D Poisson processes.

namespace mmwave::geometry {

enum class Category { Typical, Cross, Parallel };
enum class BeamMark { MainLobe, SideLobe };
enum class Orientation { Horizontal, Vertical };
enum class LayoutSource { Mplp, FixedGrid, LoadedMap };

struct NetworkConfig {
  double lambda_s_h = 0.01;    // horizontal streets per meter of y extent
  double lambda_s_v = 0.01;    // vertical streets per meter of x extent
  double lambda_b = 0.01;      // base stations per meter of street
  double alpha_los = 2.5;      // pathloss exponent, first segment of a path
  double alpha_nlos = 7.0;     // pathloss exponent, segments after a corner
  double corner_loss_db = 20.0;
  int num_tx_antennas = 64;
  double noise_power = 0.0;    // normalized noise variance
  double tx_power = 1.0;       // normalized transmit power
  double window_half = 5000.0; // simulation window half extent, meters

  bool isotropic() const { return lambda_s_h == lambda_s_v; }
  double lambda_s() const;  // isotropic street density; throws if anisotropic
  double corner_loss_linear() const;
  void validate() const;  // throws std::invalid_argument on bad parameters
};

struct StreetLayout {
  Eigen::ArrayXd horizontal;  // sorted y intercepts; always contains 0
  Eigen::ArrayXd vertical;    // sorted x intercepts
  double window_half = 0.0;
  LayoutSource source = LayoutSource::Mplp;

  Eigen::Index num_streets() const {
    return horizontal.size() + vertical.size();
  }
};

struct BaseStation {
  Orientation orientation;
  std::int32_t street_index;  // into layout.horizontal or layout.vertical
  double intercept;           // street coordinate (y for H streets, x for V)
  double offset;              // position along the street
  Category category;
  BeamMark mark;
  std::uint32_t fading_id;    // stable key for per-BS fading substreams
};

/// Draws a Manhattan Poisson line process: intercept counts are Poisson with
/// mean 2 * window_half * lambda per orientation, positions uniform in the
/// window, plus the receiver street at y = 0. Deterministic under seed.
StreetLayout sample_mplp(const NetworkConfig& config, std::uint64_t seed);

/// Deterministic lattice. spacing_h is the spacing along the x axis between
/// adjacent vertical streets; spacing_v the spacing along the y axis between
/// adjacent horizontal streets. The horizontal grid line nearest y = 0 is
/// replaced by the receiver street.
StreetLayout fixed_grid(double spacing_h, double spacing_v, double offset_h,
                        double offset_v, double window_half);

struct MapInfo {
  double width = 0.0;
  double height = 0.0;
  int num_horizontal = 0;
  int num_vertical = 0;
  int duplicates_dropped = 0;
  double receiver_y = 0.0;  // chosen receiver street, original coordinates
};

/// Loads a street map file: first line `bbox <width> <height>`, then one
/// `H <y>` or `V <x>` line per street, `#` comments allowed. Coordinates are
/// meters from the lower-left corner. The horizontal street closest to the
/// bbox centroid becomes the receiver street; everything is translated so it
/// lands on y = 0 and the centroid x lands on x = 0.
StreetLayout load_street_map(const std::string& path, MapInfo* info = nullptr);

/// Places Poisson(lambda_b * street length) stations uniformly along every
/// street, marks each MainLobe with probability thin_prob, and classifies
/// them relative to the receiver at the origin. Streets use independent
/// substreams, so changing lambda_b never reshuffles the layout itself.
std::vector<BaseStation> place_base_stations(const StreetLayout& layout,
                                             const NetworkConfig& config,
                                             double thin_prob,
                                             std::uint64_t seed);

}  // namespace mmwave::geometry
