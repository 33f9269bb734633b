#include "mmwave/cli_commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "mmwave/analytic.hpp"
#include "mmwave/rng.hpp"
#include "mmwave/csvio.hpp"
#include "mmwave/montecarlo.hpp"
#include "mmwave/validation.hpp"
#include "mmwave/version.hpp"

namespace mmwave::cli {

namespace {

namespace fs = std::filesystem;

// Scaling curves are evaluated at a fixed operating threshold.
constexpr double kScalingThresholdDb = 0.0;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string output_path(const RunOptions& opt, const std::string& name) {
  fs::create_directories(opt.scenario.output_dir);
  return (fs::path(opt.scenario.output_dir) / name).string();
}

void write_metadata(CsvWriter& csv, const RunOptions& opt,
                    const std::string& command) {
  csv.comment(std::string("generator: mmwave ") + kVersion);
  csv.comment("command: " + command);
  csv.comment("seed: " + std::to_string(opt.scenario.mc.seed));
  if (!opt.overrides.empty()) csv.comment("overrides: " + opt.overrides);
  csv.comment("scenario:");
  csv.comment(serialize_scenario(opt.scenario));
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  const double denom = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double fit = f.intercept + f.slope * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

std::vector<double> default_lambda_s_sweep() {
  return {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1};
}

}  // namespace

int cmd_coverage_curve(const RunOptions& opt) {
  const Scenario& s = opt.scenario;
  s.validate();
  const auto antenna = channel::antenna_model(s.antenna_n_t);
  const Eigen::ArrayXd grid = s.thresholds.grid();

  const auto mc_curves = mc::estimate_coverage_all_filters(
      s.network, antenna, grid, s.mc.n_layouts, s.mc.n_fading, s.mc.seed,
      opt.workers);

  CsvWriter csv(output_path(opt, "coverage.csv"),
                {"threshold_db", "analytic", "mc_noise_only", "mc_typical",
                 "mc_typical_cross", "mc_all", "mc_ci_halfwidth"});
  write_metadata(csv, opt, "coverage");

  using F = mc::InterferenceFilter;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double analytic_cov =
        analytic::coverage(db_to_linear(grid[i]), s.network, antenna);
    double ci = 0.0;
    for (int f = 0; f < mc::kNumFilters; ++f)
      ci = std::max(ci, mc_curves[f].points[i].half_width_95);
    csv.row({CsvWriter::field(grid[i]), CsvWriter::field(analytic_cov),
             CsvWriter::field(mc_curves[static_cast<int>(F::NoiseOnly)].curve.values[i]),
             CsvWriter::field(mc_curves[static_cast<int>(F::TypicalOnly)].curve.values[i]),
             CsvWriter::field(mc_curves[static_cast<int>(F::TypicalCross)].curve.values[i]),
             CsvWriter::field(mc_curves[static_cast<int>(F::All)].curve.values[i]),
             CsvWriter::field(ci)});
  }
  return 0;
}

int cmd_assoc(const RunOptions& opt) {
  Scenario s = opt.scenario;
  s.validate();
  if (!s.sweep.empty() && s.sweep.parameter != "lambda_s")
    throw std::invalid_argument("assoc: sweep parameter must be lambda_s");
  const std::vector<double> values =
      s.sweep.empty() ? default_lambda_s_sweep() : s.sweep.values;
  const auto antenna = channel::antenna_model(s.antenna_n_t);

  CsvWriter csv(output_path(opt, "assoc.csv"),
                {"lambda_s", "chi_exact", "chi_approx", "mc_typical",
                 "mc_cross", "mc_parallel", "ci"});
  write_metadata(csv, opt, "assoc");

  for (size_t i = 0; i < values.size(); ++i) {
    geometry::NetworkConfig cfg = s.network;
    cfg.lambda_s_h = cfg.lambda_s_v = values[i];
    const double exact = analytic::assoc_prob_typical(cfg, antenna);
    const double approx = analytic::assoc_prob_typical_approx(cfg, antenna);
    const auto split = mc::estimate_association_split(
        cfg, antenna, s.mc.n_layouts,
        stream_seed(s.mc.seed, {0xA550Cull, static_cast<std::uint64_t>(i)}),
        opt.workers);
    csv.row({CsvWriter::field(values[i]), CsvWriter::field(exact),
             CsvWriter::field(approx), CsvWriter::field(split.typical.estimate),
             CsvWriter::field(split.cross.estimate),
             CsvWriter::field(split.parallel.estimate),
             CsvWriter::field(split.typical.half_width_95)});
  }
  return 0;
}

int cmd_scaling(const RunOptions& opt) {
  Scenario s = opt.scenario;
  s.validate();
  if (s.sweep.empty())
    throw std::invalid_argument("scaling: scenario must define a sweep");
  if (s.sweep.parameter != "lambda_b" && s.sweep.parameter != "lambda_s")
    throw std::invalid_argument(
        "scaling: sweep parameter must be lambda_b or lambda_s");
  const bool sweep_lambda_s = s.sweep.parameter == "lambda_s";
  const auto antenna = channel::antenna_model(s.antenna_n_t);
  const double threshold = db_to_linear(kScalingThresholdDb);

  CsvWriter csv(output_path(opt, "scaling.csv"),
                {s.sweep.parameter, "coverage_analytic", "coverage_taylor",
                 "asymptote"});
  write_metadata(csv, opt, "scaling");
  csv.comment("threshold_db: " + CsvWriter::field(kScalingThresholdDb));

  std::vector<double> xs, ys;
  for (double v : s.sweep.values) {
    geometry::NetworkConfig cfg = s.network;
    if (sweep_lambda_s)
      cfg.lambda_s_h = cfg.lambda_s_v = v;
    else
      cfg.lambda_b = v;
    const double cov = analytic::coverage(threshold, cfg, antenna);
    const double taylor = analytic::coverage_taylor(threshold, cfg, antenna);
    const double asym =
        analytic::coverage_interference_limited(threshold, cfg, antenna);
    xs.push_back(v);
    ys.push_back(cov);
    csv.row({CsvWriter::field(v), CsvWriter::field(cov),
             CsvWriter::field(taylor), CsvWriter::field(asym)});
  }
  if (sweep_lambda_s && xs.size() >= 2) {
    const LinearFit fit = fit_line(xs, ys);
    std::ostringstream os;
    os << "fit: slope=" << CsvWriter::field(fit.slope)
       << " intercept=" << CsvWriter::field(fit.intercept)
       << " r2=" << CsvWriter::field(fit.r2);
    csv.footer(os.str());
  }
  return 0;
}

int cmd_compare_streets(const RunOptions& opt) {
  const Scenario& s = opt.scenario;
  s.validate();
  if (opt.map_path.empty())
    throw std::invalid_argument("compare-streets: --map <path> is required");

  geometry::MapInfo info;
  const geometry::StreetLayout map_layout =
      geometry::load_street_map(opt.map_path, &info);
  const auto antenna = channel::antenna_model(s.antenna_n_t);

  // Densities fitted from the map: streets per meter of the crossing extent.
  const double lambda_sh = info.num_horizontal / info.height;
  const double lambda_sv = info.num_vertical / info.width;
  const double spacing_h = info.width / info.num_vertical;
  const double spacing_v = info.height / info.num_horizontal;

  geometry::NetworkConfig cfg = s.network;
  cfg.lambda_s_h = lambda_sh;
  cfg.lambda_s_v = lambda_sv;
  cfg.window_half = map_layout.window_half;

  const geometry::StreetLayout grid_layout =
      geometry::fixed_grid(spacing_h, spacing_v, 0.5 * spacing_h,
                           0.5 * spacing_v, map_layout.window_half);

  CsvWriter csv(output_path(opt, "streets.csv"),
                {"model", "ergodic_rate", "ci"});
  write_metadata(csv, opt, "compare-streets");
  {
    std::ostringstream os;
    os << "map: " << opt.map_path << " (" << info.num_horizontal << " H x "
       << info.num_vertical << " V, bbox " << info.width << " x " << info.height
       << ", duplicates dropped " << info.duplicates_dropped << ")";
    csv.comment(os.str());
    std::ostringstream os2;
    os2 << "fitted: lambda_sh=" << CsvWriter::field(lambda_sh)
        << " lambda_sv=" << CsvWriter::field(lambda_sv)
        << " spacing_h=" << CsvWriter::field(spacing_h)
        << " spacing_v=" << CsvWriter::field(spacing_v);
    csv.comment(os2.str());
  }

  const auto run = [&](const mc::LayoutFactory& factory, std::uint64_t salt) {
    return mc::estimate_ergodic_rate(
        factory, cfg, antenna, s.mc.n_layouts,
        stream_seed(s.mc.seed, {0x57EEull, salt}), mc::RateDefinition::ShannonLog2,
        opt.workers);
  };
  const auto mplp = run(mc::mplp_factory(cfg), 0);
  const auto grid = run(mc::fixed_layout_factory(grid_layout), 1);
  const auto map = run(mc::fixed_layout_factory(map_layout), 2);

  csv.row({"mplp", CsvWriter::field(mplp.estimate),
           CsvWriter::field(mplp.half_width_95)});
  csv.row({"grid", CsvWriter::field(grid.estimate),
           CsvWriter::field(grid.half_width_95)});
  csv.row({"map", CsvWriter::field(map.estimate),
           CsvWriter::field(map.half_width_95)});
  return 0;
}

int cmd_validate(const RunOptions& opt) {
  const auto results = validation::run_acceptance(opt.workers, &std::cout);
  int failures = 0;
  for (const auto& r : results)
    if (!r.pass) ++failures;
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << "\n";
  return failures;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Urban mmWave microcell coverage on Manhattan street systems"};
  app.require_subcommand(1);

  struct Common {
    std::string scenario_path;
    std::string out_dir;
    std::string map_path;
    int workers = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::pair<std::string, std::string>> overrides;
  };
  auto common = std::make_shared<Common>();

  const auto add_common = [&common](CLI::App* sub, bool with_map) {
    sub->add_option("--scenario", common->scenario_path,
                    "Scenario file (key = value lines)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", common->out_dir, "Output directory for CSV files");
    sub->add_option("--workers", common->workers,
                    "Worker threads (default: MMWAVE_WORKERS env, then all cores)");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [common](const std::uint64_t& v) {
          common->seed = v;
          common->seed_set = true;
        },
        "Monte Carlo root seed");
    const auto add_override = [common, sub](const std::string& flag,
                                            const std::string& key) {
      sub->add_option_function<std::string>(
          flag,
          [common, key](const std::string& v) {
            common->overrides.emplace_back(key, v);
          },
          "Override " + key);
    };
    add_override("--lambda-s", "network.lambda_s");
    add_override("--lambda-b", "network.lambda_b");
    add_override("--alpha-l", "network.alpha_l");
    add_override("--alpha-n", "network.alpha_n");
    add_override("--delta-db", "network.delta_db");
    add_override("--nt", "antenna.n_t");
    add_override("--n0", "network.n0");
    if (with_map)
      sub->add_option("--map", common->map_path, "Street map file")
          ->check(CLI::ExistingFile);
  };

  CLI::App* coverage = app.add_subcommand(
      "coverage", "Coverage probability: analytic curve vs Monte Carlo");
  CLI::App* assoc = app.add_subcommand(
      "assoc", "Typical-BS association probability across street densities");
  CLI::App* scaling = app.add_subcommand(
      "scaling", "Coverage scaling with BS or street density");
  CLI::App* streets = app.add_subcommand(
      "compare-streets", "Ergodic rate: MPLP vs fixed grid vs a street map");
  CLI::App* validate =
      app.add_subcommand("validate", "Run the full validation suite");
  add_common(coverage, false);
  add_common(assoc, false);
  add_common(scaling, false);
  add_common(streets, true);
  validate->add_option("--workers", common->workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunOptions opt;
    if (!common->scenario_path.empty())
      opt.scenario = parse_scenario_file(common->scenario_path);
    std::ostringstream overrides;
    for (const auto& [key, value] : common->overrides) {
      apply_scenario_key(opt.scenario, key, value);
      overrides << key << "=" << value << " ";
    }
    if (common->seed_set) {
      opt.scenario.mc.seed = common->seed;
      overrides << "mc.seed=" << common->seed << " ";
    }
    if (!common->out_dir.empty()) opt.scenario.output_dir = common->out_dir;
    opt.overrides = overrides.str();
    opt.map_path = common->map_path;
    opt.workers = common->workers;

    if (coverage->parsed()) return cmd_coverage_curve(opt);
    if (assoc->parsed()) return cmd_assoc(opt);
    if (scaling->parsed()) return cmd_scaling(opt);
    if (streets->parsed()) return cmd_compare_streets(opt);
    if (validate->parsed()) return cmd_validate(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace mmwave::cli
