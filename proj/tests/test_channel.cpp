#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mmwave/channel.hpp"
#include "mmwave/rng.hpp"

using namespace mmwave;
using channel::PathDescriptor;
using geometry::BaseStation;
using geometry::Category;
using geometry::NetworkConfig;
using geometry::StreetLayout;

namespace {

StreetLayout make_layout(std::initializer_list<double> horizontal,
                         std::initializer_list<double> vertical,
                         double window = 1000.0) {
  StreetLayout l;
  l.horizontal = Eigen::ArrayXd(static_cast<Eigen::Index>(horizontal.size()));
  Eigen::Index i = 0;
  for (double y : horizontal) l.horizontal[i++] = y;
  l.vertical = Eigen::ArrayXd(static_cast<Eigen::Index>(vertical.size()));
  i = 0;
  for (double x : vertical) l.vertical[i++] = x;
  l.window_half = window;
  return l;
}

BaseStation make_bs(Category cat, double intercept, double offset) {
  BaseStation bs{};
  bs.orientation = cat == Category::Cross ? geometry::Orientation::Vertical
                                          : geometry::Orientation::Horizontal;
  bs.street_index = 0;
  bs.intercept = intercept;
  bs.offset = offset;
  bs.category = cat;
  bs.mark = geometry::BeamMark::SideLobe;
  bs.fading_id = 0;
  return bs;
}

PathDescriptor make_desc(Category cat, std::initializer_list<double> segments) {
  PathDescriptor d;
  d.category = cat;
  d.count = 0;
  for (double s : segments) d.segments[d.count++] = s;
  return d;
}

}  // namespace

TEST_CASE("antenna model: 8x8 array") {
  const auto m = channel::antenna_model(64);
  CHECK(m.main_gain == 64.0);
  CHECK(m.beamwidth == doctest::Approx(std::sqrt(3.0) / 8.0).epsilon(1e-14));
  CHECK(m.beamwidth == doctest::Approx(0.216506350946110).epsilon(1e-12));
  CHECK(m.thin_prob == doctest::Approx(0.034458055963862).epsilon(1e-12));
  CHECK(m.side_gain == doctest::Approx(0.764580051269810).epsilon(1e-12));
  CHECK(m.side_gain < 1.0);
  CHECK(m.main_gain >= 1.0);
}

TEST_CASE("antenna model: single antenna degenerates to unit gain") {
  const auto m = channel::antenna_model(1);
  CHECK(m.main_gain == 1.0);
  CHECK(m.side_gain == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(channel::antenna_model(0), std::invalid_argument);
}

TEST_CASE("pathloss: worked examples") {
  CHECK(channel::pathloss_db(make_desc(Category::Typical, {100.0}), 2.5, 7.0,
                             20.0) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(channel::pathloss_db(make_desc(Category::Cross, {10.0, 10.0}), 2.5, 7.0,
                             20.0) == doctest::Approx(115.0).epsilon(1e-12));
  // Unit segments leave only the two corner losses.
  CHECK(channel::pathloss_db(make_desc(Category::Parallel, {1.0, 1.0, 1.0}), 2.5,
                             7.0, 20.0) == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("pathloss: parallel example, strongest-path ordering") {
  const auto via_near = make_desc(Category::Parallel, {80.0, 30.0, 20.0});
  const auto via_far = make_desc(Category::Parallel, {20.0, 30.0, 80.0});
  const double pl_near = channel::pathloss_db(via_near, 2.5, 7.0, 20.0);
  const double pl_far = channel::pathloss_db(via_far, 2.5, 7.0, 20.0);
  CHECK(pl_near == doctest::Approx(282.047837).epsilon(1e-8));
  CHECK(pl_near == doctest::Approx(281.98).epsilon(3e-4));  // hand-rounded sum
  CHECK(pl_far == doctest::Approx(309.140537).epsilon(1e-8));
  CHECK(pl_near < pl_far);
}

TEST_CASE("path gain: product form equals the dB form") {
  NetworkConfig cfg;
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    PathDescriptor d;
    d.count = 1 + static_cast<int>(rng() % 3);
    d.category = d.count == 1 ? Category::Typical
                              : (d.count == 2 ? Category::Cross : Category::Parallel);
    for (int i = 0; i < d.count; ++i) d.segments[i] = uniform(rng, 1.0, 5000.0);
    const double gain = channel::path_gain(d, cfg).gain_linear;
    const double from_db = std::pow(
        10.0, -channel::pathloss_db(d, cfg.alpha_los, cfg.alpha_nlos,
                                    cfg.corner_loss_db) /
                  10.0);
    CHECK(gain == doctest::Approx(from_db).epsilon(1e-12));
    CHECK(gain > 0.0);
  }
  const auto two_hop = make_desc(Category::Cross, {10.0, 10.0});
  CHECK(channel::path_gain(two_hop, cfg).gain_linear ==
        doctest::Approx(std::pow(10.0, -11.5)).epsilon(1e-12));
  const auto typical = make_desc(Category::Typical, {137.0});
  CHECK(channel::path_gain(typical, cfg).gain_linear ==
        doctest::Approx(std::pow(137.0, -2.5)).epsilon(1e-12));
}

TEST_CASE("path gain: strictly decreasing in every segment length") {
  NetworkConfig cfg;
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    PathDescriptor d = make_desc(
        Category::Parallel, {uniform(rng, 1.0, 500.0), uniform(rng, 1.0, 500.0),
                             uniform(rng, 1.0, 500.0)});
    const double base = channel::path_gain(d, cfg).gain_linear;
    for (int i = 0; i < 3; ++i) {
      PathDescriptor longer = d;
      longer.segments[i] *= 1.5;
      CHECK(channel::path_gain(longer, cfg).gain_linear < base);
    }
  }
}

TEST_CASE("strongest path: typical and cross are direct") {
  NetworkConfig cfg;
  const auto layout = make_layout({0.0}, {40.0});

  const auto typical = channel::strongest_path(
      make_bs(Category::Typical, 0.0, 137.0), layout, cfg);
  REQUIRE(typical.has_value());
  CHECK(typical->count == 1);
  CHECK(typical->segments[0] == 137.0);
  CHECK(typical->corners() == 0);

  const auto cross =
      channel::strongest_path(make_bs(Category::Cross, 40.0, 25.0), layout, cfg);
  REQUIRE(cross.has_value());
  CHECK(cross->count == 2);
  CHECK(cross->segments[0] == 25.0);
  CHECK(cross->segments[1] == 40.0);
  CHECK(cross->corners() == 1);
}

TEST_CASE("strongest path: parallel BS picks the best cross street") {
  NetworkConfig cfg;
  const auto layout = make_layout({0.0, 30.0}, {20.0, 50.0, 80.0});
  const auto bs = make_bs(Category::Parallel, 30.0, 100.0);
  const auto desc = channel::strongest_path(bs, layout, cfg);
  REQUIRE(desc.has_value());
  CHECK(desc->count == 3);
  // Via x = 20: leave the BS westwards 80 m, one block down, 20 m home.
  CHECK(desc->segments[0] == 80.0);
  CHECK(desc->segments[1] == 30.0);
  CHECK(desc->segments[2] == 20.0);
  const double gain_db =
      -10.0 * std::log10(channel::path_gain(*desc, cfg).gain_linear);
  CHECK(gain_db == doctest::Approx(282.047837).epsilon(1e-8));

  // Brute force over the three streets confirms the pick.
  double best = 0.0;
  for (double v : {20.0, 50.0, 80.0}) {
    const auto cand = make_desc(
        Category::Parallel,
        {std::abs(100.0 - v), 30.0, std::max(std::abs(v), channel::kMinSegment)});
    best = std::max(best, channel::path_gain(cand, cfg).gain_linear);
  }
  CHECK(channel::path_gain(*desc, cfg).gain_linear ==
        doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("strongest path: flanking street fallback and unreachable case") {
  NetworkConfig cfg;
  // No street between receiver (x=0) and BS (x=2); the nearest one sits at x=5.
  const auto layout = make_layout({0.0, 10.0}, {5.0});
  const auto bs = make_bs(Category::Parallel, 10.0, 2.0);
  const auto desc = channel::strongest_path(bs, layout, cfg);
  REQUIRE(desc.has_value());
  CHECK(desc->segments[0] == 3.0);
  CHECK(desc->segments[1] == 10.0);
  CHECK(desc->segments[2] == 5.0);

  // A receiver-side street can beat every in-between street when the BS sits
  // close to the far end of the block.
  const auto wide = make_layout({0.0, 30.0}, {-0.5, 99.0});
  const auto far_bs = make_bs(Category::Parallel, 30.0, 100.0);
  const auto far_desc = channel::strongest_path(far_bs, wide, cfg);
  REQUIRE(far_desc.has_value());
  CHECK(far_desc->segments[2] == 0.5);  // via x = -0.5
  CHECK(far_desc->segments[0] == 100.5);

  // No vertical street at all: the parallel BS cannot reach the receiver.
  const auto bare = make_layout({0.0, 10.0}, {});
  CHECK_FALSE(channel::strongest_path(bs, bare, cfg).has_value());
  CHECK(channel::strongest_gain(bs, bare, cfg) == 0.0);
}

TEST_CASE("strongest path: zero-length segments clamp to one meter") {
  NetworkConfig cfg;
  const auto layout = make_layout({0.0}, {40.0});
  const auto at_corner =
      channel::strongest_path(make_bs(Category::Cross, 40.0, 0.0), layout, cfg);
  REQUIRE(at_corner.has_value());
  CHECK(at_corner->segments[0] == channel::kMinSegment);
  CHECK(at_corner->segments[1] == 40.0);

  const auto near_origin = channel::strongest_path(
      make_bs(Category::Typical, 0.0, 0.02), layout, cfg);
  REQUIRE(near_origin.has_value());
  CHECK(near_origin->segments[0] == channel::kMinSegment);
}

TEST_CASE("strongest path: brute force never beats the returned parallel path") {
  SplitMix64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    NetworkConfig cfg;
    cfg.window_half = 200.0;
    cfg.lambda_s_h = cfg.lambda_s_v = uniform(rng, 0.005, 0.03);
    cfg.lambda_b = uniform(rng, 0.01, 0.04);
    cfg.alpha_los = uniform(rng, 1.8, 3.0);
    cfg.alpha_nlos = cfg.alpha_los + uniform(rng, 0.5, 5.0);
    cfg.corner_loss_db = uniform(rng, 0.0, 30.0);
    const auto layout = geometry::sample_mplp(cfg, rng());
    const auto stations = geometry::place_base_stations(layout, cfg, 0.1, rng());
    const double c = cfg.corner_loss_linear();
    for (const auto& bs : stations) {
      if (bs.category != Category::Parallel) continue;
      const double got = channel::strongest_gain(bs, layout, cfg);
      double brute = 0.0;
      for (Eigen::Index j = 0; j < layout.vertical.size(); ++j) {
        const double v = layout.vertical[j];
        const double d1 = std::max(std::abs(bs.offset - v), channel::kMinSegment);
        const double d2 = std::max(std::abs(bs.intercept), channel::kMinSegment);
        const double d3 = std::max(std::abs(v), channel::kMinSegment);
        brute = std::max(brute, std::pow(d1, -cfg.alpha_los) * c *
                                    std::pow(d2, -cfg.alpha_nlos) * c *
                                    std::pow(d3, -cfg.alpha_nlos));
      }
      ++checked;
      CHECK(got >= brute * (1.0 - 1e-12));
      CHECK(got <= brute * (1.0 + 1e-12));  // candidate set contains the optimum
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("parallel candidates: clamp-zone street clusters stay exact") {
  // Adversarial layouts with streets packed around the receiver and the BS,
  // where the clamped gain is flat and the convexity argument alone fails.
  SplitMix64 rng(77);
  NetworkConfig cfg;
  for (int trial = 0; trial < 4000; ++trial) {
    cfg.alpha_los = uniform(rng, 1.5, 3.5);
    cfg.alpha_nlos = cfg.alpha_los + uniform(rng, 1e-3, 5.0);
    cfg.corner_loss_db = uniform(rng, 0.0, 30.0);
    const double bx = uniform(rng, -30.0, 30.0);

    std::vector<double> streets;
    const int n_near_origin = static_cast<int>(rng() % 4);
    const int n_near_bs = static_cast<int>(rng() % 4);
    const int n_elsewhere = static_cast<int>(rng() % 4);
    for (int i = 0; i < n_near_origin; ++i)
      streets.push_back(uniform(rng, -0.3, 0.3));
    for (int i = 0; i < n_near_bs; ++i)
      streets.push_back(bx + uniform(rng, -0.3, 0.3));
    for (int i = 0; i < n_elsewhere; ++i)
      streets.push_back(uniform(rng, -40.0, 40.0));
    if (streets.empty()) streets.push_back(uniform(rng, -40.0, 40.0));
    std::sort(streets.begin(), streets.end());
    streets.erase(std::unique(streets.begin(), streets.end()), streets.end());

    StreetLayout layout;
    layout.horizontal = Eigen::ArrayXd(2);
    layout.horizontal << 0.0, 12.0;
    layout.vertical = Eigen::Map<const Eigen::ArrayXd>(
        streets.data(), static_cast<Eigen::Index>(streets.size()));
    layout.window_half = 50.0;

    const auto bs = make_bs(Category::Parallel, 12.0, bx);
    const double got = channel::strongest_gain(bs, layout, cfg);
    const double c = cfg.corner_loss_linear();
    double brute = 0.0;
    for (double v : streets) {
      const double d1 = std::max(std::abs(bx - v), channel::kMinSegment);
      const double d3 = std::max(std::abs(v), channel::kMinSegment);
      brute = std::max(brute, std::pow(d1, -cfg.alpha_los) * c *
                                  std::pow(12.0, -cfg.alpha_nlos) * c *
                                  std::pow(d3, -cfg.alpha_nlos));
    }
    CAPTURE(trial);
    CHECK(got == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("corner dominance: a four-corner detour never beats the direct path") {
  // Detour from a same-street BS at x: along the street to v2, around a block
  // via a parallel street at y_p, back down at v1, home along the receiver
  // street. Four extra corners versus the direct path.
  SplitMix64 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    NetworkConfig cfg;
    cfg.alpha_los = uniform(rng, 2.0, 3.0);
    cfg.alpha_nlos = cfg.alpha_los + uniform(rng, 0.5, 5.0);
    cfg.corner_loss_db = uniform(rng, 10.0, 30.0);
    const int n_t = trial % 3 == 0 ? 16 : (trial % 3 == 1 ? 64 : 144);
    const auto ant = channel::antenna_model(n_t);

    // Segments of one meter or more, per the stated domain of the property.
    const double x = uniform(rng, 4.0, 2000.0);
    const double v1 = uniform(rng, 1.0, x - 2.0);
    const double v2 = uniform(rng, v1 + 1.0, x - 1.0);
    const double y_p = uniform(rng, 1.0, 200.0);

    const double c = cfg.corner_loss_linear();
    const auto nlos = [&](double d) {
      return c * std::pow(std::max(d, channel::kMinSegment), -cfg.alpha_nlos);
    };
    const double detour_gain =
        std::pow(std::max(x - v2, channel::kMinSegment), -cfg.alpha_los) *
        nlos(y_p) * nlos(v2 - v1) * nlos(y_p) * nlos(v1);
    const double direct_gain =
        channel::path_gain(make_desc(Category::Typical, {x}), cfg).gain_linear;
    CHECK(detour_gain * ant.main_gain <= direct_gain * ant.side_gain);
  }
}

TEST_CASE("received power") {
  const channel::PathGain pg{1e-5, {}};
  CHECK(channel::received_power(pg, 64.0, 0.0) == 0.0);
  CHECK(channel::received_power(pg, 64.0, 1.0) == doctest::Approx(6.4e-4));
  CHECK(channel::received_power(pg, 64.0, 2.0, 0.5) == doctest::Approx(6.4e-4));
}
