#include "mmwave/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmwave::channel {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_segment(double d) { return std::max(std::abs(d), kMinSegment); }

}  // namespace

AntennaModel antenna_model(int num_tx_antennas) {
  if (num_tx_antennas < 1)
    throw std::invalid_argument("antenna_model: need at least one antenna");
  const double n = static_cast<double>(num_tx_antennas);
  const double root_n = std::sqrt(n);
  const double root3 = std::sqrt(3.0);
  const double s = std::sin(root3 / (2.0 * root_n));

  AntennaModel m;
  m.main_gain = n;
  m.beamwidth = root3 / root_n;
  m.side_gain = (root_n - (root3 / (2.0 * kPi)) * n * s) /
                (root_n - (root3 / (2.0 * kPi)) * s);
  m.thin_prob = m.beamwidth / (2.0 * kPi);
  return m;
}

double pathloss_db(const PathDescriptor& desc, double alpha_los,
                   double alpha_nlos, double corner_loss_db) {
  double loss = 10.0 * alpha_los * std::log10(desc.segments[0]);
  for (int i = 1; i < desc.count; ++i)
    loss += 10.0 * alpha_nlos * std::log10(desc.segments[i]) + corner_loss_db;
  return loss;
}

PathGain path_gain(const PathDescriptor& desc,
                   const geometry::NetworkConfig& config) {
  const double c = config.corner_loss_linear();
  double gain = std::pow(desc.segments[0], -config.alpha_los);
  for (int i = 1; i < desc.count; ++i)
    gain *= c * std::pow(desc.segments[i], -config.alpha_nlos);
  return {gain, desc};
}

int parallel_candidates(const Eigen::ArrayXd& vertical, double bx,
                        std::array<Eigen::Index, 6>& out) {
  const Eigen::Index n = vertical.size();
  if (n == 0) return 0;

  // Work in a coordinate where the BS sits at B >= 0; the clamped log-gain
  // over the street position splits into monotone or convex pieces at
  // {-m, m, B-m, B+m} with m the clamp radius around receiver and BS. The
  // best street of each piece is an endpoint street, at most 6 candidates.
  const double sign = bx >= 0.0 ? 1.0 : -1.0;
  const double B = std::abs(bx);
  const double m = kMinSegment;
  const double* begin = vertical.data();
  const double* end = begin + n;

  const auto largest_leq = [&](double x) -> Eigen::Index {
    if (sign > 0.0) {
      const Eigen::Index i = std::upper_bound(begin, end, x) - begin;
      return i > 0 ? i - 1 : -1;
    }
    const Eigen::Index i = std::lower_bound(begin, end, -x) - begin;
    return i < n ? i : -1;
  };
  const auto smallest_geq = [&](double x) -> Eigen::Index {
    if (sign > 0.0) {
      const Eigen::Index i = std::lower_bound(begin, end, x) - begin;
      return i < n ? i : -1;
    }
    const Eigen::Index i = std::upper_bound(begin, end, -x) - begin;
    return i > 0 ? i - 1 : -1;
  };
  const auto logical = [&](Eigen::Index i) { return sign * vertical[i]; };

  int count = 0;
  const auto push = [&](Eigen::Index i) {
    if (i < 0) return;
    for (int k = 0; k < count; ++k)
      if (out[k] == i) return;
    out[count++] = i;
  };

  // Beyond the receiver: gain improves toward it.
  push(largest_leq(-m));
  // Receiver clamp zone [-m, m]: flat toward the receiver, improves toward
  // the BS.
  if (const Eigen::Index i = largest_leq(m); i >= 0 && logical(i) >= -m)
    push(i);
  // Interior (m, B-m): convex, so only the extreme streets can win.
  if (B > 2.0 * m) {
    if (const Eigen::Index i = smallest_geq(m); i >= 0 && logical(i) <= B - m)
      push(i);
    if (const Eigen::Index i = largest_leq(B - m); i >= 0 && logical(i) >= m)
      push(i);
  }
  // BS clamp zone: flat toward the BS, improves toward the receiver.
  if (const Eigen::Index i = smallest_geq(std::max(m, B - m));
      i >= 0 && logical(i) <= B + m)
    push(i);
  // Beyond the BS: gain improves toward it.
  push(smallest_geq(B + m));
  return count;
}

std::optional<PathDescriptor> strongest_path(
    const geometry::BaseStation& bs, const geometry::StreetLayout& layout,
    const geometry::NetworkConfig& config) {
  PathDescriptor desc;
  desc.category = bs.category;

  switch (bs.category) {
    case geometry::Category::Typical:
      desc.segments[0] = clamp_segment(bs.offset);
      desc.count = 1;
      return desc;

    case geometry::Category::Cross:
      // Down the cross street to the intersection, then along the receiver
      // street to the origin.
      desc.segments[0] = clamp_segment(bs.offset);
      desc.segments[1] = clamp_segment(bs.intercept);
      desc.count = 2;
      return desc;

    case geometry::Category::Parallel: {
      std::array<Eigen::Index, 6> candidates;
      const int n = parallel_candidates(layout.vertical, bs.offset, candidates);
      if (n == 0) return std::nullopt;  // no vertical street: unreachable

      const double c = config.corner_loss_linear();
      double best_gain = -1.0;
      for (int i = 0; i < n; ++i) {
        const double v = layout.vertical[candidates[i]];
        const double d1 = clamp_segment(bs.offset - v);
        const double d2 = clamp_segment(bs.intercept);
        const double d3 = clamp_segment(v);
        const double gain = std::pow(d1, -config.alpha_los) *
                            c * std::pow(d2, -config.alpha_nlos) *
                            c * std::pow(d3, -config.alpha_nlos);
        if (gain > best_gain) {
          best_gain = gain;
          desc.segments = {d1, d2, d3};
        }
      }
      desc.count = 3;
      return desc;
    }
  }
  return std::nullopt;
}

double strongest_gain(const geometry::BaseStation& bs,
                      const geometry::StreetLayout& layout,
                      const geometry::NetworkConfig& config) {
  const auto desc = strongest_path(bs, layout, config);
  if (!desc) return 0.0;
  return path_gain(*desc, config).gain_linear;
}

double received_power(const PathGain& path, double beam_gain, double fading,
                      double tx_power) {
  return tx_power * beam_gain * fading * path.gain_linear;
}

}  // namespace mmwave::channel
