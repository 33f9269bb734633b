#pragma once

#include <array>
#include <optional>

#include "mmwave/geometry.hpp"

// Manhattan-distance pathloss, the two-level sectorized antenna pattern, and
// strongest-path resolution for typical / cross / parallel base stations.

namespace mmwave::channel {

// Segments shorter than this are clamped before entering the pathloss terms;
// the model is not meaningful inside the near field anyway. Kept small enough
// that the clamp is hit in well under 1% of realizations at the densities of
// interest, so empirical gain distributions stay faithful to the power law.
inline constexpr double kMinSegment = 0.1;

struct AntennaModel {
  double main_gain = 1.0;  // G
  double side_gain = 1.0;  // g
  double beamwidth = 0.0;  // radians
  double thin_prob = 0.0;  // probability an interferer points its main lobe here
};

/// Two-level pattern for a uniform planar array with the given element count:
/// G = N, beamwidth sqrt(3)/sqrt(N), side gain chosen so total radiated power
/// is preserved, and thin_prob = beamwidth / (2 pi).
AntennaModel antenna_model(int num_tx_antennas);

// One candidate propagation path. segments[0] is the segment leaving the BS
// (LOS exponent); every later segment costs a corner loss and uses the NLOS
// exponent. Typical paths have 1 segment, cross 2, parallel 3.
struct PathDescriptor {
  std::array<double, 3> segments{};
  int count = 0;
  geometry::Category category = geometry::Category::Typical;

  int corners() const { return count - 1; }
};

struct PathGain {
  double gain_linear = 0.0;  // pathloss only, no antenna gain
  PathDescriptor descriptor;
};

/// 10 (alpha_los log10 d1 + alpha_nlos sum_{i>=2} log10 di) + corners * delta.
double pathloss_db(const PathDescriptor& desc, double alpha_los,
                   double alpha_nlos, double corner_loss_db);

/// Product form d1^-aL * prod (c * di^-aN); equals 10^(-pathloss_db/10).
PathGain path_gain(const PathDescriptor& desc,
                   const geometry::NetworkConfig& config);

/// Candidate vertical streets for a parallel BS at x-position bx. The clamped
/// log-gain over the street position is piecewise monotone or convex with
/// breakpoints at the clamp radii around receiver and BS, so only the extreme
/// street of each piece can carry the strongest path. Writes up to 6 indices
/// into `out`, returns how many.
int parallel_candidates(const Eigen::ArrayXd& vertical, double bx,
                        std::array<Eigen::Index, 6>& out);

/// Strongest path from the BS to the receiver at the origin. Typical and
/// cross BSs have a unique direct path; parallel BSs take the best of the
/// candidate cross streets. Returns nullopt for a parallel BS when the layout
/// has no vertical street at all (no path exists).
std::optional<PathDescriptor> strongest_path(
    const geometry::BaseStation& bs, const geometry::StreetLayout& layout,
    const geometry::NetworkConfig& config);

/// Pathloss gain of the strongest path, or 0 when unreachable.
double strongest_gain(const geometry::BaseStation& bs,
                      const geometry::StreetLayout& layout,
                      const geometry::NetworkConfig& config);

/// tx_power * beam_gain * fading * path gain.
double received_power(const PathGain& path, double beam_gain, double fading,
                      double tx_power = 1.0);

}  // namespace mmwave::channel
