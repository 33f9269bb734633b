#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmwave/montecarlo.hpp"
#include "mmwave/rng.hpp"

using namespace mmwave;
using geometry::BaseStation;
using geometry::Category;
using geometry::NetworkConfig;
using geometry::StreetLayout;

namespace {

const channel::AntennaModel kAntenna = channel::antenna_model(64);

StreetLayout single_street_layout(double window = 1000.0) {
  StreetLayout l;
  l.horizontal = Eigen::ArrayXd::Zero(1);
  l.vertical = Eigen::ArrayXd(0);
  l.window_half = window;
  return l;
}

BaseStation typical_bs(double offset, std::uint32_t id,
                       geometry::BeamMark mark = geometry::BeamMark::SideLobe) {
  BaseStation bs{};
  bs.orientation = geometry::Orientation::Horizontal;
  bs.street_index = 0;
  bs.intercept = 0.0;
  bs.offset = offset;
  bs.category = Category::Typical;
  bs.mark = mark;
  bs.fading_id = id;
  return bs;
}

}  // namespace

TEST_CASE("sinr_sample: single station with no noise is a covered sentinel") {
  const auto layout = single_street_layout();
  const std::vector<BaseStation> stations = {typical_bs(137.0, 0)};
  NetworkConfig cfg;
  const auto s = mc::sinr_sample(layout, stations, cfg, kAntenna,
                                 mc::InterferenceFilter::NoiseOnly, 7);
  CHECK(std::isinf(s.sinr_linear));
  CHECK(s.association_gain_u ==
        doctest::Approx(64.0 * std::pow(137.0, -2.5)).epsilon(1e-12));
  CHECK(s.associated_category == Category::Typical);
  CHECK(s.i_typical == 0.0);
}

TEST_CASE("sinr_sample: association picks the nearer station") {
  const auto layout = single_street_layout();
  const std::vector<BaseStation> stations = {typical_bs(200.0, 0),
                                             typical_bs(100.0, 1)};
  NetworkConfig cfg;
  const auto s = mc::sinr_sample(layout, stations, cfg, kAntenna,
                                 mc::InterferenceFilter::All, 7);
  CHECK(s.association_gain_u ==
        doctest::Approx(64.0 * std::pow(100.0, -2.5)).epsilon(1e-12));
  CHECK(s.i_typical > 0.0);
  CHECK(s.i_cross == 0.0);
  CHECK(s.i_parallel == 0.0);
  CHECK(std::isfinite(s.sinr_linear));
}

TEST_CASE("sinr_sample: empty network raises") {
  const auto layout = single_street_layout();
  NetworkConfig cfg;
  CHECK_THROWS_AS(mc::sinr_sample(layout, {}, cfg, kAntenna,
                                  mc::InterferenceFilter::All, 1),
                  std::runtime_error);
}

TEST_CASE("sinr_sample: interference breakdown is filter independent") {
  NetworkConfig cfg;
  cfg.window_half = 600.0;
  const auto layout = geometry::sample_mplp(cfg, 11);
  const auto stations =
      geometry::place_base_stations(layout, cfg, kAntenna.thin_prob, 12);
  REQUIRE(stations.size() > 4);

  using F = mc::InterferenceFilter;
  const auto all = mc::sinr_sample(layout, stations, cfg, kAntenna, F::All, 99);
  for (F f : {F::NoiseOnly, F::TypicalOnly, F::TypicalCross}) {
    const auto s = mc::sinr_sample(layout, stations, cfg, kAntenna, f, 99);
    CHECK(s.i_typical == all.i_typical);
    CHECK(s.i_cross == all.i_cross);
    CHECK(s.i_parallel == all.i_parallel);
    CHECK(s.association_gain_u == all.association_gain_u);
  }
  // Denominators nest, so the SINR orders the other way.
  const auto noise = mc::sinr_sample(layout, stations, cfg, kAntenna, F::NoiseOnly, 99);
  const auto typ = mc::sinr_sample(layout, stations, cfg, kAntenna, F::TypicalOnly, 99);
  const auto tc = mc::sinr_sample(layout, stations, cfg, kAntenna, F::TypicalCross, 99);
  CHECK(noise.sinr_linear >= typ.sinr_linear);
  CHECK(typ.sinr_linear >= tc.sinr_linear);
  CHECK(tc.sinr_linear >= all.sinr_linear);
}

TEST_CASE("engine gains agree with the reference path resolver") {
  NetworkConfig cfg;
  cfg.window_half = 800.0;
  const int n_layouts = 4;
  const std::uint64_t seed = 1234;
  const auto gains =
      mc::sample_association_gains(cfg, kAntenna, n_layouts, seed, 1);

  for (int i = 0; i < n_layouts; ++i) {
    const std::uint64_t layout_seed =
        stream_seed(seed, {kTagLayout, static_cast<std::uint64_t>(i)});
    const auto layout = geometry::sample_mplp(cfg, layout_seed);
    const auto stations = geometry::place_base_stations(
        layout, cfg, kAntenna.thin_prob, layout_seed);
    double best = 0.0;
    for (const auto& bs : stations)
      best = std::max(best, channel::strongest_gain(bs, layout, cfg));
    CHECK(gains[static_cast<size_t>(i)] ==
          doctest::Approx(kAntenna.main_gain * best).epsilon(1e-12));
  }
}

TEST_CASE("estimates are bit-identical across worker counts") {
  NetworkConfig cfg;
  cfg.window_half = 600.0;
  const Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(5, -10.0, 30.0);

  const auto one = mc::estimate_coverage(cfg, kAntenna, grid,
                                         mc::InterferenceFilter::TypicalCross,
                                         60, 2, 77, 1);
  const auto four = mc::estimate_coverage(cfg, kAntenna, grid,
                                          mc::InterferenceFilter::TypicalCross,
                                          60, 2, 77, 4);
  CHECK((one.curve.values == four.curve.values).all());

  const auto rate1 = mc::estimate_ergodic_rate(mc::mplp_factory(cfg), cfg,
                                               kAntenna, 50, 5, // seed 5
                                               mc::RateDefinition::ShannonLog2, 1);
  const auto rate3 = mc::estimate_ergodic_rate(mc::mplp_factory(cfg), cfg,
                                               kAntenna, 50, 5,
                                               mc::RateDefinition::ShannonLog2, 3);
  CHECK(rate1.estimate == rate3.estimate);
  CHECK(rate1.half_width_95 == rate3.half_width_95);
}

TEST_CASE("coverage estimator: CI scales like 1/sqrt(n)") {
  NetworkConfig cfg;
  cfg.window_half = 500.0;
  const Eigen::ArrayXd grid = Eigen::ArrayXd::Constant(1, 10.0);  // 10 dB

  const auto small = mc::estimate_coverage(
      cfg, kAntenna, grid, mc::InterferenceFilter::All, 200, 1, 3, 0);
  const auto big = mc::estimate_coverage(
      cfg, kAntenna, grid, mc::InterferenceFilter::All, 400, 1, 3, 0);
  REQUIRE(small.points[0].estimate > 0.05);
  REQUIRE(small.points[0].estimate < 0.99);
  const double ratio = small.points[0].half_width_95 / big.points[0].half_width_95;
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
  CHECK(small.points[0].n_samples == 200);
  CHECK(big.points[0].seed_root == 3);
}

TEST_CASE("coverage estimator: all-filter batch is consistent and monotone") {
  NetworkConfig cfg;
  cfg.window_half = 500.0;
  cfg.noise_power = 5e-4;
  const Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(9, -10.0, 30.0);
  const auto all =
      mc::estimate_coverage_all_filters(cfg, kAntenna, grid, 150, 2, 21, 0);

  const auto lone = mc::estimate_coverage(
      cfg, kAntenna, grid, mc::InterferenceFilter::TypicalCross, 150, 2, 21, 0);
  CHECK((all[2].curve.values == lone.curve.values).all());

  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    // More interference, less coverage; later thresholds, less coverage.
    CHECK(all[0].curve.values[i] >= all[1].curve.values[i]);
    CHECK(all[1].curve.values[i] >= all[2].curve.values[i]);
    CHECK(all[2].curve.values[i] >= all[3].curve.values[i]);
    if (i)
      for (int f = 0; f < mc::kNumFilters; ++f)
        CHECK(all[f].curve.values[i] <= all[f].curve.values[i - 1] + 1e-12);
  }
}

TEST_CASE("association split: sparse streets mean typical-only association") {
  NetworkConfig cfg;
  cfg.lambda_s_h = cfg.lambda_s_v = 1e-9;
  cfg.window_half = 600.0;
  const auto split = mc::estimate_association_split(cfg, kAntenna, 300, 5, 0);
  CHECK(split.typical.estimate == 1.0);
  CHECK(split.cross.estimate == 0.0);
  CHECK(split.parallel.estimate == 0.0);
  CHECK(split.typical.estimate + split.cross.estimate +
            split.parallel.estimate ==
        doctest::Approx(1.0));
}

TEST_CASE("ergodic rate: degenerate cases") {
  // Essentially no stations anywhere: the rate collapses to zero.
  NetworkConfig cfg;
  cfg.lambda_b = 1e-9;
  cfg.window_half = 200.0;
  const auto zero = mc::estimate_ergodic_rate(mc::mplp_factory(cfg), cfg,
                                              kAntenna, 40, 6);
  CHECK(zero.estimate == 0.0);

  // The literal mean-of-(1+SINR) variant sits above 1 whenever stations exist.
  NetworkConfig busy;
  busy.window_half = 400.0;
  busy.lambda_b = 0.05;
  const auto literal =
      mc::estimate_ergodic_rate(mc::mplp_factory(busy), busy, kAntenna, 60, 6,
                                mc::RateDefinition::MeanOnePlus);
  CHECK(literal.estimate > 1.0);
  const auto shannon =
      mc::estimate_ergodic_rate(mc::mplp_factory(busy), busy, kAntenna, 60, 6);
  CHECK(shannon.estimate > 0.0);
  CHECK(shannon.half_width_95 > 0.0);
  CHECK(shannon.n_samples == 60);
}

TEST_CASE("coverage estimate approaches one at very low thresholds") {
  NetworkConfig cfg;
  cfg.window_half = 500.0;
  Eigen::ArrayXd grid(2);
  grid << -60.0, -40.0;
  const auto est = mc::estimate_coverage(
      cfg, kAntenna, grid, mc::InterferenceFilter::All, 200, 1, 17, 0);
  CHECK(est.curve.values[0] == 1.0);
  CHECK(est.curve.values[1] >= 0.99);
}

TEST_CASE("rate estimator: CI shrinks like 1/sqrt(n)") {
  NetworkConfig cfg;
  cfg.window_half = 400.0;
  const auto small =
      mc::estimate_ergodic_rate(mc::mplp_factory(cfg), cfg, kAntenna, 300, 9);
  const auto big =
      mc::estimate_ergodic_rate(mc::mplp_factory(cfg), cfg, kAntenna, 600, 9);
  const double ratio = small.half_width_95 / big.half_width_95;
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
}

TEST_CASE("pairwise sum matches sequential summation") {
  std::vector<double> xs;
  SplitMix64 rng(3);
  double seq = 0.0;
  for (int i = 0; i < 1000; ++i) {
    xs.push_back(uniform(rng, -1.0, 1.0));
    seq += xs.back();
  }
  CHECK(mc::pairwise_sum(xs) == doctest::Approx(seq).epsilon(1e-12));
}

TEST_CASE("fixed layout factory always returns the same geometry") {
  const auto layout = geometry::fixed_grid(150.0, 150.0, 0.0, 0.0, 450.0);
  const auto factory = mc::fixed_layout_factory(layout);
  const auto a = factory(1);
  const auto b = factory(999);
  CHECK((a.horizontal == b.horizontal).all());
  CHECK((a.vertical == b.vertical).all());
}
