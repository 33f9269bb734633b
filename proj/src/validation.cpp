#include "mmwave/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "mmwave/analytic.hpp"
#include "mmwave/montecarlo.hpp"
#include "mmwave/reference.hpp"
#include "mmwave/rng.hpp"

namespace mmwave::validation {

namespace {

using channel::AntennaModel;
using geometry::NetworkConfig;

// Density-scaling criteria need a noise floor: with zero noise the coverage
// integral is exactly independent of lambda_b and no sparse/dense regime
// exists. The value corresponds to roughly -34 dB of the median association
// gain at the default BS density, deep enough to keep the dense deployments
// interference limited.
constexpr double kDensityStudyNoise = 5e-4;
constexpr double kScalingThreshold = 1.0;  // 0 dB

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Eigen::ArrayXd db_grid(double start, double stop, double step) {
  const int n = static_cast<int>(std::round((stop - start) / step)) + 1;
  Eigen::ArrayXd g(n);
  for (int i = 0; i < n; ++i) g[i] = start + i * step;
  return g;
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = samples[i] > 0.0 ? cdf(samples[i]) : 0.0;
    ks = std::max(ks, std::abs((static_cast<double>(i) + 1.0) / n - f));
    ks = std::max(ks, std::abs(static_cast<double>(i) / n - f));
  }
  return ks;
}

struct Fit {
  double slope;
  double r2;
};

Fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double fit = intercept + slope * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - sy / n) * (y[i] - sy / n);
  }
  return {slope, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

std::string find_data_file(const std::string& rel) {
  const std::string candidates[] = {
    rel,
    "../" + rel,
#ifdef MMWAVE_SOURCE_DIR
    std::string(MMWAVE_SOURCE_DIR) + "/" + rel,
#endif
  };
  for (const auto& c : candidates) {
    std::ifstream probe(c);
    if (probe) return c;
  }
  return rel;  // let the loader report the error
}

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED{" << what << "} ";
    }
  }
  void note(const std::string& what) { detail << what << " "; }
};

// ---------------------------------------------------------------------------

Check criterion_cdf_match(int workers) {
  Check c;
  const NetworkConfig cfg;  // default densities and exponents
  const AntennaModel ant = channel::antenna_model(cfg.num_tx_antennas);
  const auto gains = mc::sample_association_gains(cfg, ant, 10000, 1001, workers);
  const auto k = analytic::constants(cfg, ant, 1.0);
  const double ks = ks_distance(
      gains, [&](double u) { return analytic::cdf_gain_combined(u, k, cfg.lambda_b); });
  c.require(ks <= 0.02, "KS distance <= 0.02");
  c.note("ks=" + std::to_string(ks));
  return c;
}

struct CoverageRun {
  Eigen::ArrayXd grid;
  std::array<mc::CoverageEstimate, mc::kNumFilters> curves;
  Eigen::ArrayXd analytic;
};

CoverageRun shared_coverage_run(int workers) {
  CoverageRun run;
  const NetworkConfig cfg;
  const AntennaModel ant = channel::antenna_model(cfg.num_tx_antennas);
  run.grid = db_grid(-10.0, 30.0, 1.0);
  run.curves = mc::estimate_coverage_all_filters(cfg, ant, run.grid, 4000, 2,
                                                 1002, workers);
  run.analytic.resize(run.grid.size());
  for (Eigen::Index i = 0; i < run.grid.size(); ++i)
    run.analytic[i] = analytic::coverage(db_to_linear(run.grid[i]), cfg, ant);
  return run;
}

Check criterion_coverage_match(const CoverageRun& run) {
  Check c;
  const auto& mc_tc =
      run.curves[static_cast<int>(mc::InterferenceFilter::TypicalCross)];
  double worst = 0.0;
  for (Eigen::Index i = 0; i < run.grid.size(); ++i)
    worst = std::max(worst, std::abs(run.analytic[i] - mc_tc.curve.values[i]));
  c.require(worst <= 0.03, "max |analytic - mc(typical+cross)| <= 0.03");
  c.note("max_dev=" + std::to_string(worst));
  return c;
}

// Coverage with the cross-interference Laplace factor removed; used to
// report how large the near-equal-exponent effect is in the closed forms.
double coverage_without_cross_interference(double threshold,
                                           const NetworkConfig& cfg,
                                           const AntennaModel& ant) {
  const auto k = analytic::constants(cfg, ant, threshold);
  const double lb = cfg.lambda_b;
  const double r = k.exponent_ratio;
  const double a2 = (k.beta_typical + k.gamma_typical) * lb;
  const double a3 = k.gamma_cross * std::pow(lb, r);  // association only
  const double c2 = k.gamma_typical * lb / k.alpha_los;
  const double c3 = k.gamma_cross * std::pow(lb, r) / k.alpha_nlos;
  const auto f = [&](double w) {
    const double e2 = a2 * std::exp(-w / k.alpha_los);
    const double e3 = a3 * std::exp(-w / k.alpha_nlos);
    if (e2 + e3 > 700.0) return 0.0;
    return std::exp(-(e2 + e3)) * (c2 * std::exp(-w / k.alpha_los) +
                                   c3 * std::exp(-w / k.alpha_nlos));
  };
  double w_lo = -k.alpha_los * std::log(800.0 / a2);
  if (a3 > 0.0) w_lo = std::max(w_lo, -k.alpha_nlos * std::log(800.0 / a3));
  double w_hi = k.alpha_los * std::log(std::max(c2, 1e-30) * 1e20);
  if (c3 > 0.0) w_hi = std::max(w_hi, k.alpha_nlos * std::log(c3 * 1e20));
  return specfun::integrate_or_throw(f, w_lo, std::max(w_hi, w_lo + 1.0));
}

Check criterion_interference_negligibility(const CoverageRun& run, int workers) {
  Check c;
  using F = mc::InterferenceFilter;
  const int pairs[3][2] = {{1, 2}, {2, 3}, {1, 3}};  // TypOnly/TypCross/All
  double worst_gap = 0.0;
  for (const auto& p : pairs) {
    for (Eigen::Index i = 0; i < run.grid.size(); ++i) {
      const double a = run.curves[p[0]].curve.values[i];
      const double b = run.curves[p[1]].curve.values[i];
      const double ci = std::max(run.curves[p[0]].points[i].half_width_95,
                                 run.curves[p[1]].points[i].half_width_95);
      worst_gap = std::max(worst_gap, std::abs(a - b) - 2.0 * ci);
    }
  }
  c.require(worst_gap <= 0.0,
            "filters TypicalOnly/TypicalCross/All within 2x CI at alpha_n=7");
  c.note("worst_excess=" + std::to_string(worst_gap));

  NetworkConfig near_cfg;
  near_cfg.alpha_nlos = 2.51;
  const AntennaModel ant = channel::antenna_model(near_cfg.num_tx_antennas);
  const auto near = mc::estimate_coverage_all_filters(
      near_cfg, ant, run.grid, 3000, 2, 1003, workers);
  double max_gap = 0.0;
  double max_analytic_gap = 0.0;
  for (Eigen::Index i = 0; i < run.grid.size(); ++i) {
    max_gap = std::max(
        max_gap,
        std::abs(near[static_cast<int>(F::TypicalOnly)].curve.values[i] -
                 near[static_cast<int>(F::TypicalCross)].curve.values[i]));
    const double t = db_to_linear(run.grid[i]);
    max_analytic_gap = std::max(
        max_analytic_gap,
        coverage_without_cross_interference(t, near_cfg, ant) -
            analytic::coverage(t, near_cfg, ant));
  }
  c.require(max_gap > 0.03,
            "alpha_n=2.51: simulated cross interference shifts coverage by "
            "> 0.03");
  c.note("near_gap_mc=" + std::to_string(max_gap));
  c.note("near_gap_analytic=" + std::to_string(max_analytic_gap));
  if (max_gap <= 0.03 && max_analytic_gap > 0.03)
    c.note(
        "note=closed-form gap exceeds the bar but accrues from cross streets "
        "far beyond any finite simulation window (near-pole Gamma factor); "
        "a 5 km window realizes ~3% of it");
  return c;
}

Check criterion_asymptotic_coverage() {
  Check c;
  const Eigen::ArrayXd grid = db_grid(-10.0, 30.0, 2.0);
  double worst = 0.0;
  std::vector<double> asym_at_0db;
  for (double lambda_s : {0.001, 0.01, 0.05}) {
    NetworkConfig cfg;
    cfg.lambda_s_h = cfg.lambda_s_v = lambda_s;
    cfg.lambda_b = 0.2;
    cfg.noise_power = kDensityStudyNoise;
    const AntennaModel ant = channel::antenna_model(cfg.num_tx_antennas);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double t = db_to_linear(grid[i]);
      const double cov = analytic::coverage(t, cfg, ant);
      const double asym = analytic::coverage_interference_limited(t, cfg, ant);
      worst = std::max(worst, std::abs(cov - asym));
    }
    asym_at_0db.push_back(
        analytic::coverage_interference_limited(1.0, cfg, ant));
  }
  c.require(worst <= 0.02, "|coverage(lambda_b=0.2) - asymptote| <= 0.02");
  c.require(asym_at_0db[0] > asym_at_0db[1] && asym_at_0db[1] > asym_at_0db[2],
            "denser streets give lower asymptote");
  c.note("max_dev=" + std::to_string(worst));
  return c;
}

Check criterion_linear_scaling() {
  Check c;
  const std::vector<double> lambda_s_grid = {0.001, 0.00575, 0.0105, 0.01525,
                                             0.02};
  double worst_taylor = 0.0;
  for (double lambda_b : {0.005, 0.01}) {
    std::vector<double> covs;
    for (double ls : lambda_s_grid) {
      NetworkConfig cfg;
      cfg.lambda_s_h = cfg.lambda_s_v = ls;
      cfg.lambda_b = lambda_b;
      cfg.noise_power = kDensityStudyNoise;
      const AntennaModel ant = channel::antenna_model(cfg.num_tx_antennas);
      const double cov = analytic::coverage(kScalingThreshold, cfg, ant);
      const double taylor = analytic::coverage_taylor(kScalingThreshold, cfg, ant);
      covs.push_back(cov);
      worst_taylor = std::max(worst_taylor, std::abs(cov - taylor));
    }
    const Fit fit = fit_line(lambda_s_grid, covs);
    std::ostringstream tag;
    tag << "lambda_b=" << lambda_b;
    c.require(fit.r2 >= 0.98, tag.str() + ": R^2 >= 0.98");
    if (lambda_b == 0.005)
      c.require(fit.slope > 0.0, tag.str() + ": coverage rises with lambda_s");
    else
      c.require(fit.slope < 0.0, tag.str() + ": coverage falls with lambda_s");
    c.note(tag.str() + " slope=" + std::to_string(fit.slope) +
           " r2=" + std::to_string(fit.r2));
  }
  c.require(worst_taylor <= 0.02, "Taylor surrogate within 0.02 of exact");
  c.note("taylor_dev=" + std::to_string(worst_taylor));
  return c;
}

Check criterion_association(int workers) {
  Check c;
  NetworkConfig cfg;
  const AntennaModel ant = channel::antenna_model(cfg.num_tx_antennas);
  const double exact = analytic::assoc_prob_typical(cfg, ant);

  NetworkConfig mc_cfg = cfg;
  mc_cfg.window_half = 1500.0;  // truncation bias ~ e^-30, far below the CI
  const auto split =
      mc::estimate_association_split(mc_cfg, ant, 5000, 1006, workers);
  c.require(std::abs(exact - split.typical.estimate) <= 0.02,
            "exact vs MC typical association within 0.02");
  c.require(split.parallel.estimate < 0.01,
            "parallel association fraction < 0.01");
  c.note("chi=" + std::to_string(exact) +
         " mc=" + std::to_string(split.typical.estimate));

  double worst_approx = 0.0;
  for (double ls : {0.001, 0.005, 0.01, 0.02, 0.05}) {
    NetworkConfig s = cfg;
    s.lambda_s_h = s.lambda_s_v = ls;
    worst_approx = std::max(
        worst_approx, std::abs(analytic::assoc_prob_typical(s, ant) -
                               analytic::assoc_prob_typical_approx(s, ant)));
  }
  c.require(worst_approx <= 0.02,
            "first-order association approx within 0.02 up to lambda_s=0.05");

  NetworkConfig dense = cfg;
  dense.lambda_s_h = dense.lambda_s_v = 0.1;
  const double chi_dense = analytic::assoc_prob_typical(dense, ant);
  c.require(chi_dense > 0.7, "chi_T > 0.7 at lambda_s = 0.1");
  c.note("chi(0.1)=" + std::to_string(chi_dense));
  return c;
}

Check criterion_lambda_b_invariance() {
  Check c;
  NetworkConfig a;
  a.lambda_b = 0.001;
  NetworkConfig b;
  b.lambda_b = 0.1;
  const AntennaModel ant = channel::antenna_model(a.num_tx_antennas);
  const double xa = analytic::assoc_prob_typical(a, ant);
  const double xb = analytic::assoc_prob_typical(b, ant);
  c.require(std::abs(xa - xb) < 1e-9, "chi_T identical across lambda_b");
  c.note("diff=" + std::to_string(std::abs(xa - xb)));
  return c;
}

Check criterion_street_models(int workers) {
  Check c;
  geometry::MapInfo info;
  const auto map_layout =
      geometry::load_street_map(find_data_file("data/chicago_blocks.map"), &info);

  NetworkConfig cfg;
  cfg.lambda_s_h = info.num_horizontal / info.height;
  cfg.lambda_s_v = info.num_vertical / info.width;
  cfg.window_half = map_layout.window_half;
  const AntennaModel ant = channel::antenna_model(cfg.num_tx_antennas);

  const auto grid_layout = geometry::fixed_grid(
      133.5, 207.4, 0.5 * 133.5, 0.5 * 207.4, map_layout.window_half);

  const int n = 2500;
  const auto mplp = mc::estimate_ergodic_rate(mc::mplp_factory(cfg), cfg, ant,
                                              n, 1008, mc::RateDefinition::ShannonLog2,
                                              workers);
  const auto grid = mc::estimate_ergodic_rate(
      mc::fixed_layout_factory(grid_layout), cfg, ant, n, 1009,
      mc::RateDefinition::ShannonLog2, workers);
  const auto map = mc::estimate_ergodic_rate(
      mc::fixed_layout_factory(map_layout), cfg, ant, n, 1010,
      mc::RateDefinition::ShannonLog2, workers);

  const double top =
      std::max({mplp.estimate, grid.estimate, map.estimate});
  const double bottom =
      std::min({mplp.estimate, grid.estimate, map.estimate});
  c.require((top - bottom) / top <= 0.05, "rates agree within 5% relative");
  c.note("mplp=" + std::to_string(mplp.estimate) +
         " grid=" + std::to_string(grid.estimate) +
         " map=" + std::to_string(map.estimate));
  const bool ci_overlap =
      top - bottom <= mplp.half_width_95 + grid.half_width_95 + map.half_width_95;
  if (!ci_overlap) c.note("note=confidence-intervals-disjoint");
  return c;
}

Check criterion_special_functions() {
  Check c;
  double worst_k1 = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mu =
        std::pow(10.0, -8.0 + (std::log10(50.0) + 8.0) * i / 59.0);
    const double ref = reference::k1_integral(mu);
    worst_k1 = std::max(worst_k1,
                        std::abs(specfun::bessel_k1(mu) - ref) / std::abs(ref));
  }
  c.require(worst_k1 <= 1e-10, "K1 vs integral representation <= 1e-10");
  c.note("k1_dev=" + std::to_string(worst_k1));

  double worst_rho = 0.0;
  for (double t : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const double closed = std::sqrt(t) * std::atan(std::sqrt(t));
    const double got = specfun::varrho(t, 2.0);
    worst_rho = std::max(worst_rho, std::abs(got - closed) / closed);
  }
  c.require(worst_rho <= 1e-8, "varrho alpha=2 closed form <= 1e-8");

  double worst_gamma = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.1 + (10.0 - 0.1) * i / 200.0;
    const double lhs = specfun::gamma_fn(x + 1.0);
    const double rhs = x * specfun::gamma_fn(x);
    worst_gamma = std::max(worst_gamma, std::abs(lhs - rhs) / lhs);
  }
  c.require(worst_gamma <= 1e-12, "Gamma recurrence <= 1e-12");
  c.note("gamma_dev=" + std::to_string(worst_gamma));
  return c;
}

Check criterion_property_suites(int workers) {
  Check c;

  // Strongest-path optimality: brute force over every vertical street must
  // never beat the returned parallel path.
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SplitMix64 rng(stream_seed(1010, {static_cast<std::uint64_t>(trial)}));
    NetworkConfig cfg;
    cfg.window_half = 200.0;
    cfg.lambda_s_h = cfg.lambda_s_v = uniform(rng, 0.005, 0.03);
    cfg.lambda_b = uniform(rng, 0.005, 0.03);
    cfg.alpha_los = uniform(rng, 1.8, 3.0);
    cfg.alpha_nlos = cfg.alpha_los + uniform(rng, 0.5, 5.0);
    cfg.corner_loss_db = uniform(rng, 0.0, 30.0);
    const AntennaModel ant = channel::antenna_model(16);
    const auto layout = geometry::sample_mplp(cfg, rng());
    const auto stations =
        geometry::place_base_stations(layout, cfg, ant.thin_prob, rng());
    const double cl = cfg.corner_loss_linear();
    for (const auto& bs : stations) {
      if (bs.category != geometry::Category::Parallel) continue;
      const double got = channel::strongest_gain(bs, layout, cfg);
      double brute = 0.0;
      for (Eigen::Index j = 0; j < layout.vertical.size(); ++j) {
        const double v = layout.vertical[j];
        const double d1 = std::max(std::abs(bs.offset - v), channel::kMinSegment);
        const double d2 = std::max(std::abs(bs.intercept), channel::kMinSegment);
        const double d3 = std::max(std::abs(v), channel::kMinSegment);
        brute = std::max(brute, std::pow(d1, -cfg.alpha_los) * cl *
                                    std::pow(d2, -cfg.alpha_nlos) * cl *
                                    std::pow(d3, -cfg.alpha_nlos));
      }
      if (brute > got * (1.0 + 1e-9)) ++violations;
    }
  }
  c.require(violations == 0, "parallel strongest-path optimality (brute force)");
  c.note("path_violations=" + std::to_string(violations));

  // Filter monotonicity on common random numbers.
  NetworkConfig cfg;
  cfg.noise_power = kDensityStudyNoise;
  const AntennaModel ant = channel::antenna_model(cfg.num_tx_antennas);
  const auto rows = mc::sample_sinr_rows(cfg, ant, 500, 2, 1011, workers);
  int mono_violations = 0;
  for (const auto& row : rows)
    for (int f = 1; f < mc::kNumFilters; ++f)
      if (row.sinr[f] > row.sinr[f - 1] * (1.0 + 1e-12)) ++mono_violations;
  c.require(mono_violations == 0, "filter monotonicity on common random numbers");

  // CDF and coverage monotonicity.
  const auto k = analytic::constants(cfg, ant, 1.0);
  int cdf_violations = 0;
  double prev_t = -1.0, prev_c = -1.0, prev_u = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double u = std::pow(10.0, -20.0 + 25.0 * i / 200.0);
    const double ft = analytic::cdf_gain_typical(u, k, cfg.lambda_b);
    const double fc = analytic::cdf_gain_cross(u, k, cfg.lambda_b);
    const double fu = analytic::cdf_gain_combined(u, k, cfg.lambda_b);
    for (double v : {ft, fc, fu})
      if (v < 0.0 || v > 1.0) ++cdf_violations;
    if (ft < prev_t - 1e-15 || fc < prev_c - 1e-15 || fu < prev_u - 1e-15)
      ++cdf_violations;
    prev_t = ft;
    prev_c = fc;
    prev_u = fu;
  }
  double prev_cov = 2.0;
  for (double t_db = -10.0; t_db <= 30.0; t_db += 2.0) {
    const double cov = analytic::coverage(db_to_linear(t_db), cfg, ant);
    if (cov > prev_cov + 1e-9) ++cdf_violations;
    prev_cov = cov;
  }
  c.require(cdf_violations == 0, "CDF and coverage monotonicity");
  return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(int workers, std::ostream* log) {
  std::vector<CriterionResult> results;
  CoverageRun shared;

  const auto run = [&](int id, const std::string& name,
                       const std::function<Check()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Check chk;
    try {
      chk = fn();
    } catch (const std::exception& e) {
      chk.pass = false;
      chk.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    CriterionResult r{id, name, chk.pass, chk.detail.str(), secs};
    results.push_back(r);
    if (log) {
      (*log) << (r.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name
             << "  (" << r.detail << "t=" << static_cast<int>(secs) << "s)"
             << std::endl;
    }
  };

  run(1, "association-gain CDF matches Monte Carlo",
      [&] { return criterion_cdf_match(workers); });
  run(2, "analytic coverage matches Monte Carlo", [&] {
    shared = shared_coverage_run(workers);
    return criterion_coverage_match(shared);
  });
  run(3, "NLOS interference negligible except near-equal exponents",
      [&] { return criterion_interference_negligibility(shared, workers); });
  run(4, "dense-BS coverage reaches the interference-limited asymptote",
      [&] { return criterion_asymptotic_coverage(); });
  run(5, "coverage scales linearly with street density",
      [&] { return criterion_linear_scaling(); });
  run(6, "typical-BS association probability",
      [&] { return criterion_association(workers); });
  run(7, "association probability invariant to BS density",
      [&] { return criterion_lambda_b_invariance(); });
  run(8, "MPLP vs fixed grid vs street map ergodic rate",
      [&] { return criterion_street_models(workers); });
  run(9, "special function accuracy",
      [&] { return criterion_special_functions(); });
  run(10, "property suites (paths, filters, monotonicity)",
      [&] { return criterion_property_suites(workers); });
  return results;
}

}  // namespace mmwave::validation
