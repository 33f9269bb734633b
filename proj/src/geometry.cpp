#include "mmwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mmwave/rng.hpp"

namespace mmwave::geometry {

namespace {

Eigen::ArrayXd to_sorted_array(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                          static_cast<Eigen::Index>(values.size()));
}

}  // namespace

double NetworkConfig::lambda_s() const {
  if (!isotropic())
    throw std::invalid_argument(
        "NetworkConfig: isotropic street density requested but "
        "lambda_s_h != lambda_s_v");
  return lambda_s_h;
}

double NetworkConfig::corner_loss_linear() const {
  return std::pow(10.0, -corner_loss_db / 10.0);
}

void NetworkConfig::validate() const {
  if (!(lambda_s_h > 0.0) || !(lambda_s_v > 0.0))
    throw std::invalid_argument("NetworkConfig: street densities must be > 0");
  if (!(lambda_b > 0.0))
    throw std::invalid_argument("NetworkConfig: lambda_b must be > 0");
  if (!(alpha_los > 1.0))
    throw std::invalid_argument("NetworkConfig: alpha_los must be > 1");
  if (!(alpha_nlos >= alpha_los))
    throw std::invalid_argument("NetworkConfig: alpha_nlos must be >= alpha_los");
  if (corner_loss_db < 0.0)
    throw std::invalid_argument("NetworkConfig: corner_loss_db must be >= 0");
  if (num_tx_antennas < 1)
    throw std::invalid_argument("NetworkConfig: num_tx_antennas must be >= 1");
  if (noise_power < 0.0)
    throw std::invalid_argument("NetworkConfig: noise_power must be >= 0");
  if (!(tx_power > 0.0))
    throw std::invalid_argument("NetworkConfig: tx_power must be > 0");
  if (!(window_half > 0.0))
    throw std::invalid_argument("NetworkConfig: window_half must be > 0");
}

StreetLayout sample_mplp(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  const double half = config.window_half;

  SplitMix64 rng_h(stream_seed(seed, {kTagStreets, 0}));
  SplitMix64 rng_v(stream_seed(seed, {kTagStreets, 1}));

  std::vector<double> horizontal;
  const long n_h = poisson(rng_h, 2.0 * half * config.lambda_s_h);
  horizontal.reserve(static_cast<size_t>(n_h) + 1);
  horizontal.push_back(0.0);  // receiver street, Slivnyak addition
  for (long i = 0; i < n_h; ++i) horizontal.push_back(uniform(rng_h, -half, half));

  std::vector<double> vertical;
  const long n_v = poisson(rng_v, 2.0 * half * config.lambda_s_v);
  vertical.reserve(static_cast<size_t>(n_v));
  for (long i = 0; i < n_v; ++i) vertical.push_back(uniform(rng_v, -half, half));

  StreetLayout layout;
  layout.horizontal = to_sorted_array(horizontal);
  layout.vertical = to_sorted_array(vertical);
  layout.window_half = half;
  layout.source = LayoutSource::Mplp;
  return layout;
}

StreetLayout fixed_grid(double spacing_h, double spacing_v, double offset_h,
                        double offset_v, double window_half) {
  if (!(spacing_h > 0.0) || !(spacing_v > 0.0))
    throw std::invalid_argument("fixed_grid: spacings must be > 0");
  if (!(window_half > 0.0))
    throw std::invalid_argument("fixed_grid: window_half must be > 0");

  const auto lattice = [window_half](double spacing, double offset) {
    std::vector<double> xs;
    const double tol = 1e-9 * std::max(1.0, window_half);
    const long k_lo = static_cast<long>(std::ceil((-window_half - offset) / spacing - 1e-12));
    const long k_hi = static_cast<long>(std::floor((window_half - offset) / spacing + 1e-12));
    for (long k = k_lo; k <= k_hi; ++k) {
      const double x = offset + static_cast<double>(k) * spacing;
      if (x >= -window_half - tol && x <= window_half + tol) xs.push_back(x);
    }
    return xs;
  };

  std::vector<double> vertical = lattice(spacing_h, offset_h);
  std::vector<double> horizontal = lattice(spacing_v, offset_v);

  // Receiver street replaces the nearest horizontal grid line.
  if (horizontal.empty()) {
    horizontal.push_back(0.0);
  } else {
    auto nearest = std::min_element(
        horizontal.begin(), horizontal.end(),
        [](double a, double b) { return std::abs(a) < std::abs(b); });
    *nearest = 0.0;
  }

  StreetLayout layout;
  layout.horizontal = to_sorted_array(horizontal);
  layout.vertical = to_sorted_array(vertical);
  layout.window_half = window_half;
  layout.source = LayoutSource::FixedGrid;
  return layout;
}

StreetLayout load_street_map(const std::string& path, MapInfo* info) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_street_map: cannot open '" + path + "'");

  auto fail = [&path](int line, const std::string& what) {
    std::ostringstream os;
    os << "load_street_map: " << path << ":" << line << ": " << what;
    throw std::runtime_error(os.str());
  };

  double width = 0.0, height = 0.0;
  bool have_bbox = false;
  std::vector<double> horizontal_raw, vertical_raw;
  int duplicates = 0;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank or comment-only line

    if (!have_bbox) {
      if (tag != "bbox") fail(line_no, "expected 'bbox <width> <height>'");
      if (!(ls >> width >> height) || width <= 0.0 || height <= 0.0)
        fail(line_no, "invalid bbox dimensions");
      have_bbox = true;
      continue;
    }

    double coord = 0.0;
    if (!(ls >> coord)) fail(line_no, "expected a coordinate after '" + tag + "'");
    if (tag == "H") {
      if (coord < 0.0 || coord > height)
        fail(line_no, "horizontal street outside bbox");
      if (std::find(horizontal_raw.begin(), horizontal_raw.end(), coord) !=
          horizontal_raw.end())
        ++duplicates;
      else
        horizontal_raw.push_back(coord);
    } else if (tag == "V") {
      if (coord < 0.0 || coord > width)
        fail(line_no, "vertical street outside bbox");
      if (std::find(vertical_raw.begin(), vertical_raw.end(), coord) !=
          vertical_raw.end())
        ++duplicates;
      else
        vertical_raw.push_back(coord);
    } else {
      fail(line_no, "unknown record '" + tag + "'");
    }
  }

  if (!have_bbox) fail(line_no, "missing bbox header");
  if (horizontal_raw.empty())
    fail(line_no, "map declares no horizontal street; receiver street required");

  // Receiver street: the horizontal street nearest the bbox centroid.
  const double cy = 0.5 * height;
  double receiver_y = horizontal_raw.front();
  for (double y : horizontal_raw)
    if (std::abs(y - cy) < std::abs(receiver_y - cy)) receiver_y = y;

  const double cx = 0.5 * width;
  std::vector<double> horizontal, vertical;
  horizontal.reserve(horizontal_raw.size());
  for (double y : horizontal_raw) horizontal.push_back(y - receiver_y);
  vertical.reserve(vertical_raw.size());
  for (double x : vertical_raw) vertical.push_back(x - cx);

  double extent = 0.5 * width;
  extent = std::max(extent, std::max(receiver_y, height - receiver_y));
  for (double y : horizontal) extent = std::max(extent, std::abs(y));

  StreetLayout layout;
  layout.horizontal = to_sorted_array(horizontal);
  layout.vertical = to_sorted_array(vertical);
  layout.window_half = extent;
  layout.source = LayoutSource::LoadedMap;

  if (info) {
    info->width = width;
    info->height = height;
    info->num_horizontal = static_cast<int>(layout.horizontal.size());
    info->num_vertical = static_cast<int>(layout.vertical.size());
    info->duplicates_dropped = duplicates;
    info->receiver_y = receiver_y;
  }
  return layout;
}

std::vector<BaseStation> place_base_stations(const StreetLayout& layout,
                                             const NetworkConfig& config,
                                             double thin_prob,
                                             std::uint64_t seed) {
  if (thin_prob < 0.0 || thin_prob > 1.0)
    throw std::invalid_argument("place_base_stations: thin_prob outside [0,1]");

  const double half = layout.window_half;
  const double mean_per_street = config.lambda_b * 2.0 * half;
  std::vector<BaseStation> stations;
  stations.reserve(static_cast<size_t>(
      mean_per_street * static_cast<double>(layout.num_streets()) * 1.2 + 16));

  std::uint32_t next_id = 0;
  const auto place_on_street = [&](Orientation orient, std::int32_t index,
                                   double intercept) {
    SplitMix64 rng(stream_seed(
        seed, {kTagPlacement, static_cast<std::uint64_t>(orient == Orientation::Vertical),
               static_cast<std::uint64_t>(index)}));
    const long n = poisson(rng, mean_per_street);
    for (long i = 0; i < n; ++i) {
      BaseStation bs;
      bs.orientation = orient;
      bs.street_index = index;
      bs.intercept = intercept;
      bs.offset = uniform(rng, -half, half);
      if (orient == Orientation::Vertical)
        bs.category = Category::Cross;
      else
        bs.category = intercept == 0.0 ? Category::Typical : Category::Parallel;
      bs.mark = bernoulli(rng, thin_prob) ? BeamMark::MainLobe : BeamMark::SideLobe;
      bs.fading_id = next_id++;
      stations.push_back(bs);
    }
  };

  for (Eigen::Index i = 0; i < layout.horizontal.size(); ++i)
    place_on_street(Orientation::Horizontal, static_cast<std::int32_t>(i),
                    layout.horizontal[i]);
  for (Eigen::Index i = 0; i < layout.vertical.size(); ++i)
    place_on_street(Orientation::Vertical, static_cast<std::int32_t>(i),
                    layout.vertical[i]);
  return stations;
}

}  // namespace mmwave::geometry
