#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mmwave/analytic.hpp"
#include "mmwave/channel.hpp"
#include "mmwave/geometry.hpp"

// Seeded Monte Carlo oracle. Realizes street systems and base stations,
// draws Rayleigh fading, and estimates coverage, association splits and
// ergodic rate. Estimates are bit-identical for a given seed regardless of
// the worker count: every layout has its own substream and reduction happens
// in a fixed order.

namespace mmwave::mc {

enum class InterferenceFilter : int {
  NoiseOnly = 0,
  TypicalOnly = 1,
  TypicalCross = 2,
  All = 3,
};
inline constexpr int kNumFilters = 4;

struct SinrSample {
  double sinr_linear = 0.0;  // +inf when both noise and interference vanish
  double association_gain_u = 0.0;  // main-lobe gain times best path gain
  geometry::Category associated_category = geometry::Category::Typical;
  double i_typical = 0.0;
  double i_cross = 0.0;
  double i_parallel = 0.0;
};

struct EstimatorResult {
  double estimate = 0.0;
  double half_width_95 = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed_root = 0;
};

struct CoverageEstimate {
  analytic::CoverageCurve curve;
  std::vector<EstimatorResult> points;
};

struct AssociationSplit {
  EstimatorResult typical;
  EstimatorResult cross;
  EstimatorResult parallel;
};

// Produces the layout for one realization from its substream seed. MPLP
// factories resample streets every time; fixed-grid and loaded-map factories
// return the same layout for every seed.
using LayoutFactory = std::function<geometry::StreetLayout(std::uint64_t)>;

LayoutFactory mplp_factory(const geometry::NetworkConfig& config);
LayoutFactory fixed_layout_factory(geometry::StreetLayout layout);

/// One SINR draw on an already realized network. Fading is keyed on
/// (seed, station id), so per-category runs on the same seed decompose the
/// interference identically. Throws std::runtime_error when no station can
/// reach the receiver.
SinrSample sinr_sample(const geometry::StreetLayout& layout,
                       const std::vector<geometry::BaseStation>& stations,
                       const geometry::NetworkConfig& config,
                       const channel::AntennaModel& antenna,
                       InterferenceFilter filter, std::uint64_t seed);

/// Empirical P(SINR > T) over a threshold grid for one interference filter.
CoverageEstimate estimate_coverage(const geometry::NetworkConfig& config,
                                   const channel::AntennaModel& antenna,
                                   const Eigen::ArrayXd& thresholds_db,
                                   InterferenceFilter filter, int n_layouts,
                                   int n_fading_per_layout, std::uint64_t seed,
                                   int workers = 0);

/// Same run, every filter at once on common random numbers.
std::array<CoverageEstimate, kNumFilters> estimate_coverage_all_filters(
    const geometry::NetworkConfig& config, const channel::AntennaModel& antenna,
    const Eigen::ArrayXd& thresholds_db, int n_layouts,
    int n_fading_per_layout, std::uint64_t seed, int workers = 0);

/// Fraction of realizations won by each BS category.
AssociationSplit estimate_association_split(
    const geometry::NetworkConfig& config, const channel::AntennaModel& antenna,
    int n_layouts, std::uint64_t seed, int workers = 0);

enum class RateDefinition {
  ShannonLog2,   // E[log2(1 + SINR)]
  MeanOnePlus,   // E[1 + SINR], kept for comparison with the literal formula
};

/// Mean spectral efficiency with all interference included.
EstimatorResult estimate_ergodic_rate(const LayoutFactory& factory,
                                      const geometry::NetworkConfig& config,
                                      const channel::AntennaModel& antenna,
                                      int n_samples, std::uint64_t seed,
                                      RateDefinition def = RateDefinition::ShannonLog2,
                                      int workers = 0);

/// Association gain u = G * best path gain for each of n_layouts
/// realizations; 0 when a realization has no reachable station. This is the
/// empirical counterpart of the analytic association-gain CDF.
std::vector<double> sample_association_gains(
    const geometry::NetworkConfig& config, const channel::AntennaModel& antenna,
    int n_layouts, std::uint64_t seed, int workers = 0);

struct GainSample {
  double best_typical = 0.0;
  double best_cross = 0.0;
  double best_parallel = 0.0;
  double u = 0.0;                 // max over all categories, with main-lobe gain
  geometry::Category winner = geometry::Category::Typical;
  bool any = false;
};

/// Per-category best gains for each realization (all scaled by G).
std::vector<GainSample> sample_category_gains(
    const geometry::NetworkConfig& config, const channel::AntennaModel& antenna,
    int n_layouts, std::uint64_t seed, int workers = 0);

/// Coverage indicator samples conditioned on nothing: one row per
/// (layout, fading round) with the association gain and per-filter SINR.
/// Used by cross-validation tests that bin on the association gain.
struct SinrRow {
  double u = 0.0;
  double sinr[kNumFilters] = {0.0, 0.0, 0.0, 0.0};
};
std::vector<SinrRow> sample_sinr_rows(const geometry::NetworkConfig& config,
                                      const channel::AntennaModel& antenna,
                                      int n_layouts, int n_fading_per_layout,
                                      std::uint64_t seed, int workers = 0);

/// Deterministic pairwise sum (fixed reduction tree independent of workers).
double pairwise_sum(const std::vector<double>& values);

int resolve_workers(int requested);

}  // namespace mmwave::mc
