#include "mmwave/montecarlo.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mmwave/rng.hpp"

namespace mmwave::mc {

namespace {

using geometry::BaseStation;
using geometry::Category;
using geometry::NetworkConfig;
using geometry::StreetLayout;

double clamp_segment(double d) {
  return std::max(std::abs(d), channel::kMinSegment);
}

// Strongest-path gain for every station, using per-layout caches for the
// street-level factors. Must agree with channel::strongest_gain bit for bit
// on the shared candidate rule; the unit tests assert that.
struct Network {
  StreetLayout layout;
  std::vector<BaseStation> stations;
  std::vector<double> gain;
  std::vector<double> beam_gain;
  int serving = -1;
  double u = 0.0;
};

void compute_gains(Network& net, const NetworkConfig& config,
                   const channel::AntennaModel& antenna) {
  const double a_los = config.alpha_los;
  const double a_nlos = config.alpha_nlos;
  const double c = config.corner_loss_linear();
  const Eigen::ArrayXd& vertical = net.layout.vertical;

  Eigen::ArrayXd vert_pow(vertical.size());
  for (Eigen::Index j = 0; j < vertical.size(); ++j)
    vert_pow[j] = std::pow(clamp_segment(vertical[j]), -a_nlos);

  // Street-level factors, keyed like the stations (contiguous per street).
  net.gain.resize(net.stations.size());
  net.beam_gain.resize(net.stations.size());

  double street_factor = 0.0;
  std::int32_t cached_street = -1;
  geometry::Orientation cached_orient = geometry::Orientation::Horizontal;

  for (size_t i = 0; i < net.stations.size(); ++i) {
    const BaseStation& bs = net.stations[i];
    if (bs.street_index != cached_street || bs.orientation != cached_orient) {
      cached_street = bs.street_index;
      cached_orient = bs.orientation;
      if (bs.category == Category::Cross)
        street_factor = c * std::pow(clamp_segment(bs.intercept), -a_nlos);
      else if (bs.category == Category::Parallel)
        street_factor = c * c * std::pow(clamp_segment(bs.intercept), -a_nlos);
      else
        street_factor = 1.0;
    }

    double gain = 0.0;
    switch (bs.category) {
      case Category::Typical:
        gain = std::pow(clamp_segment(bs.offset), -a_los);
        break;
      case Category::Cross:
        gain = street_factor * std::pow(clamp_segment(bs.offset), -a_los);
        break;
      case Category::Parallel: {
        std::array<Eigen::Index, 6> cand;
        const int n = channel::parallel_candidates(vertical, bs.offset, cand);
        double best = 0.0;
        for (int k = 0; k < n; ++k) {
          const double d1 = clamp_segment(bs.offset - vertical[cand[k]]);
          const double g =
              street_factor * vert_pow[cand[k]] * std::pow(d1, -a_los);
          best = std::max(best, g);
        }
        gain = best;  // stays 0 when no vertical street exists
        break;
      }
    }
    net.gain[i] = gain;
    net.beam_gain[i] = bs.mark == geometry::BeamMark::MainLobe
                           ? antenna.main_gain
                           : antenna.side_gain;
  }

  net.serving = -1;
  double best = 0.0;
  for (size_t i = 0; i < net.gain.size(); ++i) {
    if (net.gain[i] > best) {
      best = net.gain[i];
      net.serving = static_cast<int>(i);
    }
  }
  net.u = net.serving >= 0 ? antenna.main_gain * best : 0.0;
}

Network realize(const LayoutFactory& factory, const NetworkConfig& config,
                const channel::AntennaModel& antenna, std::uint64_t layout_seed) {
  Network net;
  net.layout = factory(layout_seed);
  net.stations =
      geometry::place_base_stations(net.layout, config, antenna.thin_prob,
                                    layout_seed);
  compute_gains(net, config, antenna);
  return net;
}

double fading_draw(std::uint64_t root, std::uint32_t id, std::uint32_t round) {
  const std::uint64_t key =
      root ^ mix64((static_cast<std::uint64_t>(id) << 32) | round);
  return exponential_from_key(key);
}

struct InterferenceSums {
  double typical = 0.0;
  double cross = 0.0;
  double parallel = 0.0;
  double serving_fading = 1.0;
};

InterferenceSums draw_interference(const Network& net, std::uint64_t fading_root,
                                   std::uint32_t round) {
  InterferenceSums sums;
  for (size_t i = 0; i < net.stations.size(); ++i) {
    const double h = fading_draw(fading_root, net.stations[i].fading_id, round);
    if (static_cast<int>(i) == net.serving) {
      sums.serving_fading = h;
      continue;
    }
    const double power = net.beam_gain[i] * h * net.gain[i];
    switch (net.stations[i].category) {
      case Category::Typical: sums.typical += power; break;
      case Category::Cross: sums.cross += power; break;
      case Category::Parallel: sums.parallel += power; break;
    }
  }
  return sums;
}

double filtered_sinr(const InterferenceSums& s, double u, double noise,
                     InterferenceFilter filter) {
  double denom = noise;
  if (filter != InterferenceFilter::NoiseOnly) denom += s.typical;
  if (filter == InterferenceFilter::TypicalCross ||
      filter == InterferenceFilter::All)
    denom += s.cross;
  if (filter == InterferenceFilter::All) denom += s.parallel;
  const double signal = s.serving_fading * u;
  if (denom == 0.0)
    return signal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return signal / denom;
}

int env_workers() {
  if (const char* env = std::getenv("MMWAVE_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

template <typename Fn>
void for_each_layout(int n_layouts, std::uint64_t seed, int workers, Fn&& fn) {
  const auto run_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      fn(i, stream_seed(seed, {kTagLayout, static_cast<std::uint64_t>(i)}));
  };
  workers = std::min(resolve_workers(workers), std::max(1, n_layouts));
  if (workers <= 1) {
    run_range(0, n_layouts);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  const int chunk = (n_layouts + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(n_layouts, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run_range, begin, end);
  }
  for (auto& t : pool) t.join();
}

EstimatorResult proportion_result(double count, std::int64_t n,
                                  std::uint64_t seed) {
  EstimatorResult r;
  r.n_samples = n;
  r.seed_root = seed;
  r.estimate = n > 0 ? count / static_cast<double>(n) : 0.0;
  r.half_width_95 =
      n > 0 ? 1.96 * std::sqrt(r.estimate * (1.0 - r.estimate) /
                               static_cast<double>(n))
            : 0.0;
  return r;
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const int env = env_workers(); env > 0) return env;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

double pairwise_sum(const std::vector<double>& values) {
  // Fixed reduction tree: recursive halving over the index range.
  const std::function<double(size_t, size_t)> sum = [&](size_t begin,
                                                        size_t end) -> double {
    if (end - begin <= 8) {
      double s = 0.0;
      for (size_t i = begin; i < end; ++i) s += values[i];
      return s;
    }
    const size_t mid = begin + (end - begin) / 2;
    return sum(begin, mid) + sum(mid, end);
  };
  return sum(0, values.size());
}

LayoutFactory mplp_factory(const geometry::NetworkConfig& config) {
  return [config](std::uint64_t seed) {
    return geometry::sample_mplp(config, seed);
  };
}

LayoutFactory fixed_layout_factory(geometry::StreetLayout layout) {
  return [layout](std::uint64_t) { return layout; };
}

SinrSample sinr_sample(const StreetLayout& layout,
                       const std::vector<BaseStation>& stations,
                       const NetworkConfig& config,
                       const channel::AntennaModel& antenna,
                       InterferenceFilter filter, std::uint64_t seed) {
  Network net;
  net.layout = layout;
  net.stations = stations;
  net.gain.resize(stations.size());
  net.beam_gain.resize(stations.size());
  for (size_t i = 0; i < stations.size(); ++i) {
    net.gain[i] = channel::strongest_gain(stations[i], layout, config);
    net.beam_gain[i] = stations[i].mark == geometry::BeamMark::MainLobe
                           ? antenna.main_gain
                           : antenna.side_gain;
  }
  net.serving = -1;
  double best = 0.0;
  for (size_t i = 0; i < net.gain.size(); ++i)
    if (net.gain[i] > best) best = net.gain[i], net.serving = static_cast<int>(i);
  if (net.serving < 0)
    throw std::runtime_error("sinr_sample: no station can reach the receiver");
  net.u = antenna.main_gain * best;

  // All interferer path gains sit below the association gain by construction.
  for (size_t i = 0; i < net.gain.size(); ++i) assert(net.gain[i] <= net.u);

  const InterferenceSums sums = draw_interference(net, seed, 0);
  SinrSample out;
  out.association_gain_u = net.u;
  out.associated_category = stations[static_cast<size_t>(net.serving)].category;
  out.i_typical = sums.typical;
  out.i_cross = sums.cross;
  out.i_parallel = sums.parallel;
  out.sinr_linear = filtered_sinr(sums, net.u, config.noise_power, filter);
  return out;
}

std::vector<SinrRow> sample_sinr_rows(const NetworkConfig& config,
                                      const channel::AntennaModel& antenna,
                                      int n_layouts, int n_fading_per_layout,
                                      std::uint64_t seed, int workers) {
  config.validate();
  const LayoutFactory factory = mplp_factory(config);
  std::vector<SinrRow> rows(static_cast<size_t>(n_layouts) *
                            static_cast<size_t>(n_fading_per_layout));
  for_each_layout(n_layouts, seed, workers, [&](int index, std::uint64_t ls) {
    Network net = realize(factory, config, antenna, ls);
    const std::uint64_t fading_root = stream_seed(ls, {kTagFading});
    for (int r = 0; r < n_fading_per_layout; ++r) {
      SinrRow& row = rows[static_cast<size_t>(index) * n_fading_per_layout + r];
      row.u = net.u;
      if (net.serving < 0) continue;  // empty network: SINR stays 0
      const InterferenceSums sums =
          draw_interference(net, fading_root, static_cast<std::uint32_t>(r));
      for (int f = 0; f < kNumFilters; ++f)
        row.sinr[f] = filtered_sinr(sums, net.u, config.noise_power,
                                    static_cast<InterferenceFilter>(f));
    }
  });
  return rows;
}

std::array<CoverageEstimate, kNumFilters> estimate_coverage_all_filters(
    const NetworkConfig& config, const channel::AntennaModel& antenna,
    const Eigen::ArrayXd& thresholds_db, int n_layouts,
    int n_fading_per_layout, std::uint64_t seed, int workers) {
  const std::vector<SinrRow> rows =
      sample_sinr_rows(config, antenna, n_layouts, n_fading_per_layout, seed,
                       workers);
  const Eigen::Index n_thresh = thresholds_db.size();
  Eigen::ArrayXd thresholds(n_thresh);
  for (Eigen::Index t = 0; t < n_thresh; ++t)
    thresholds[t] = std::pow(10.0, thresholds_db[t] / 10.0);

  const std::int64_t n = static_cast<std::int64_t>(rows.size());
  std::array<CoverageEstimate, kNumFilters> out;
  for (int f = 0; f < kNumFilters; ++f) {
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(n_thresh);
    for (const SinrRow& row : rows)
      for (Eigen::Index t = 0; t < n_thresh; ++t)
        if (row.sinr[f] > thresholds[t]) counts[t] += 1.0;
    out[f].curve.thresholds_db = thresholds_db;
    out[f].curve.values = counts / static_cast<double>(n);
    out[f].curve.method = analytic::CurveMethod::MonteCarlo;
    out[f].points.reserve(static_cast<size_t>(n_thresh));
    for (Eigen::Index t = 0; t < n_thresh; ++t)
      out[f].points.push_back(proportion_result(counts[t], n, seed));
  }
  return out;
}

CoverageEstimate estimate_coverage(const NetworkConfig& config,
                                   const channel::AntennaModel& antenna,
                                   const Eigen::ArrayXd& thresholds_db,
                                   InterferenceFilter filter, int n_layouts,
                                   int n_fading_per_layout, std::uint64_t seed,
                                   int workers) {
  auto all = estimate_coverage_all_filters(config, antenna, thresholds_db,
                                           n_layouts, n_fading_per_layout,
                                           seed, workers);
  return all[static_cast<int>(filter)];
}

std::vector<GainSample> sample_category_gains(const NetworkConfig& config,
                                              const channel::AntennaModel& antenna,
                                              int n_layouts, std::uint64_t seed,
                                              int workers) {
  config.validate();
  const LayoutFactory factory = mplp_factory(config);
  std::vector<GainSample> samples(static_cast<size_t>(n_layouts));
  for_each_layout(n_layouts, seed, workers, [&](int index, std::uint64_t ls) {
    Network net = realize(factory, config, antenna, ls);
    GainSample& s = samples[static_cast<size_t>(index)];
    for (size_t i = 0; i < net.stations.size(); ++i) {
      const double g = antenna.main_gain * net.gain[i];
      switch (net.stations[i].category) {
        case Category::Typical: s.best_typical = std::max(s.best_typical, g); break;
        case Category::Cross: s.best_cross = std::max(s.best_cross, g); break;
        case Category::Parallel: s.best_parallel = std::max(s.best_parallel, g); break;
      }
    }
    if (net.serving >= 0) {
      s.any = true;
      s.u = net.u;
      s.winner = net.stations[static_cast<size_t>(net.serving)].category;
    }
  });
  return samples;
}

std::vector<double> sample_association_gains(const NetworkConfig& config,
                                             const channel::AntennaModel& antenna,
                                             int n_layouts, std::uint64_t seed,
                                             int workers) {
  const auto samples =
      sample_category_gains(config, antenna, n_layouts, seed, workers);
  std::vector<double> gains(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) gains[i] = samples[i].u;
  return gains;
}

AssociationSplit estimate_association_split(const NetworkConfig& config,
                                            const channel::AntennaModel& antenna,
                                            int n_layouts, std::uint64_t seed,
                                            int workers) {
  const auto samples =
      sample_category_gains(config, antenna, n_layouts, seed, workers);
  std::int64_t n = 0;
  double typical = 0.0, cross = 0.0, parallel = 0.0;
  for (const GainSample& s : samples) {
    if (!s.any) continue;
    ++n;
    if (s.winner == Category::Typical) typical += 1.0;
    else if (s.winner == Category::Cross) cross += 1.0;
    else parallel += 1.0;
  }
  AssociationSplit split;
  split.typical = proportion_result(typical, n, seed);
  split.cross = proportion_result(cross, n, seed);
  split.parallel = proportion_result(parallel, n, seed);
  return split;
}

EstimatorResult estimate_ergodic_rate(const LayoutFactory& factory,
                                      const NetworkConfig& config,
                                      const channel::AntennaModel& antenna,
                                      int n_samples, std::uint64_t seed,
                                      RateDefinition def, int workers) {
  config.validate();
  std::vector<double> rates(static_cast<size_t>(n_samples), 0.0);
  for_each_layout(n_samples, seed, workers, [&](int index, std::uint64_t ls) {
    Network net = realize(factory, config, antenna, ls);
    if (net.serving < 0) return;  // rate 0 for an empty realization
    const std::uint64_t fading_root = stream_seed(ls, {kTagFading});
    const InterferenceSums sums = draw_interference(net, fading_root, 0);
    const double sinr =
        filtered_sinr(sums, net.u, config.noise_power, InterferenceFilter::All);
    rates[static_cast<size_t>(index)] =
        def == RateDefinition::ShannonLog2 ? std::log2(1.0 + sinr) : 1.0 + sinr;
  });

  EstimatorResult r;
  r.n_samples = n_samples;
  r.seed_root = seed;
  r.estimate = pairwise_sum(rates) / static_cast<double>(n_samples);
  double ss = 0.0;
  for (double x : rates) ss += (x - r.estimate) * (x - r.estimate);
  const double var = n_samples > 1 ? ss / static_cast<double>(n_samples - 1) : 0.0;
  r.half_width_95 = 1.96 * std::sqrt(var / static_cast<double>(n_samples));
  return r;
}

}  // namespace mmwave::mc
