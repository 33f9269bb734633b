#include "mmwave/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace mmwave::analytic {

namespace {

using specfun::integrate_or_throw;
using specfun::QuadratureSpec;

struct GainConstants {
  double gamma_typical;
  double gamma_cross;
  double gamma_parallel;
  double zeta_gamma_cross;
  double ratio;  // aL / aN
};

GainConstants gain_constants(const geometry::NetworkConfig& config,
                             const channel::AntennaModel& antenna) {
  config.validate();
  if (!(config.alpha_nlos > config.alpha_los))
    throw std::invalid_argument(
        "analytic: alpha_nlos must exceed alpha_los (Gamma factor pole)");
  const double lambda_s = config.lambda_s();  // throws when anisotropic
  const double r = config.alpha_los / config.alpha_nlos;
  const double c = config.corner_loss_linear();
  const double g_main = antenna.main_gain;

  GainConstants k;
  k.ratio = r;
  k.gamma_typical = 2.0 * std::pow(g_main, 1.0 / config.alpha_los);
  k.zeta_gamma_cross = std::pow(2.0, 1.0 + r) *
                       std::pow(c * g_main, 1.0 / config.alpha_nlos) *
                       specfun::gamma_fn(1.0 - r);
  k.gamma_cross = k.zeta_gamma_cross * lambda_s;
  k.gamma_parallel = k.gamma_cross * std::pow(c, 1.0 / config.alpha_nlos);
  return k;
}

// Exponent sums above this evaluate to exp(0-ish) anyway; used to pick
// integration windows in log-gain space.
constexpr double kExpCut = 800.0;

}  // namespace

AnalyticConstants constants(const geometry::NetworkConfig& config,
                            const channel::AntennaModel& antenna,
                            double threshold,
                            const QuadratureSpec& spec) {
  if (threshold < 0.0)
    throw std::invalid_argument("constants: threshold must be >= 0");
  const GainConstants g = gain_constants(config, antenna);
  const double r = g.ratio;
  const double pt = antenna.thin_prob;

  AnalyticConstants k;
  k.gamma_typical = g.gamma_typical;
  k.gamma_cross = g.gamma_cross;
  k.gamma_parallel = g.gamma_parallel;
  k.zeta_gamma_cross = g.zeta_gamma_cross;
  k.exponent_ratio = r;
  k.alpha_los = config.alpha_los;
  k.alpha_nlos = config.alpha_nlos;

  const double rho_main = specfun::varrho(threshold, config.alpha_los, spec);
  const double rho_side = specfun::varrho(
      threshold * antenna.side_gain / antenna.main_gain, config.alpha_los, spec);

  k.beta_noise = threshold * config.noise_power;
  k.beta_typical = k.gamma_typical * (pt * rho_main + (1.0 - pt) * rho_side);
  k.epsilon = std::pow(pt, r) * std::pow(rho_main, r) +
              std::pow(1.0 - pt, r) * std::pow(rho_side, r);
  k.beta_cross = k.gamma_cross * k.epsilon;
  k.zeta_beta_cross = k.zeta_gamma_cross * k.epsilon;
  return k;
}

double cdf_gain_typical(double u, const AnalyticConstants& k, double lambda_b) {
  if (!(u > 0.0)) throw std::domain_error("cdf_gain_typical: u must be > 0");
  return std::exp(-k.gamma_typical * lambda_b * std::pow(u, -1.0 / k.alpha_los));
}

double cdf_gain_cross(double u, const AnalyticConstants& k, double lambda_b) {
  if (!(u > 0.0)) throw std::domain_error("cdf_gain_cross: u must be > 0");
  return std::exp(-k.gamma_cross * std::pow(lambda_b, k.exponent_ratio) *
                  std::pow(u, -1.0 / k.alpha_nlos));
}

double cdf_gain_parallel(double u, const AnalyticConstants& k, double lambda_s,
                         double lambda_b, bool small_argument_limit) {
  if (!(u > 0.0)) throw std::domain_error("cdf_gain_parallel: u must be > 0");
  if (small_argument_limit) return 1.0;
  const double arg = 2.0 * k.gamma_parallel * lambda_s *
                     std::pow(lambda_b, k.exponent_ratio) *
                     std::pow(u, -1.0 / k.alpha_nlos);
  const double z = 2.0 * std::sqrt(arg);
  if (z < 1e-8) return 1.0;  // z K1(z) -> 1
  return z * specfun::bessel_k1(z);
}

double cdf_gain_combined(double u, const AnalyticConstants& k, double lambda_b) {
  return cdf_gain_typical(u, k, lambda_b) * cdf_gain_cross(u, k, lambda_b);
}

double pdf_gain_combined(double u, const AnalyticConstants& k, double lambda_b) {
  if (!(u > 0.0)) throw std::domain_error("pdf_gain_combined: u must be > 0");
  const double r = k.exponent_ratio;
  const double term_t = k.gamma_typical * lambda_b / k.alpha_los *
                        std::pow(u, -1.0 / k.alpha_los - 1.0);
  const double term_c = k.gamma_cross * std::pow(lambda_b, r) / k.alpha_nlos *
                        std::pow(u, -1.0 / k.alpha_nlos - 1.0);
  return cdf_gain_combined(u, k, lambda_b) * (term_t + term_c);
}

double conditional_coverage(double u, const AnalyticConstants& k,
                            double lambda_b) {
  if (!(u > 0.0))
    throw std::domain_error("conditional_coverage: u must be > 0");
  const double e1 = k.beta_noise / u;
  const double e2 = k.beta_typical * lambda_b * std::pow(u, -1.0 / k.alpha_los);
  const double e3 = k.beta_cross * std::pow(lambda_b, k.exponent_ratio) *
                    std::pow(u, -1.0 / k.alpha_nlos);
  return std::exp(-(e1 + e2 + e3));
}

double coverage(double threshold, const geometry::NetworkConfig& config,
                const channel::AntennaModel& antenna,
                const QuadratureSpec& spec) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("coverage: threshold must be > 0");
  const AnalyticConstants k = constants(config, antenna, threshold, spec);
  const double lb = config.lambda_b;
  const double r = k.exponent_ratio;

  // Integrate in w = log u. Exponent scales per decay term:
  const double a1 = k.beta_noise;                                     // e^-w
  const double a2 = (k.beta_typical + k.gamma_typical) * lb;          // e^-w/aL
  const double a3 = (k.beta_cross + k.gamma_cross) * std::pow(lb, r); // e^-w/aN
  const double c2 = k.gamma_typical * lb / k.alpha_los;
  const double c3 = k.gamma_cross * std::pow(lb, r) / k.alpha_nlos;

  const auto integrand = [&](double w) {
    const double e1 = a1 == 0.0 ? 0.0 : a1 * std::exp(-w);
    const double e2 = a2 * std::exp(-w / k.alpha_los);
    const double e3 = a3 == 0.0 ? 0.0 : a3 * std::exp(-w / k.alpha_nlos);
    const double total = e1 + e2 + e3;
    if (total > kExpCut) return 0.0;
    const double weight = c2 * std::exp(-w / k.alpha_los) +
                          (c3 == 0.0 ? 0.0 : c3 * std::exp(-w / k.alpha_nlos));
    return std::exp(-total) * weight;
  };

  // Left edge: where any single decay term alone reaches the cutoff.
  double w_lo = -k.alpha_los * std::log(kExpCut / a2);
  if (a1 > 0.0) w_lo = std::max(w_lo, -std::log(kExpCut / a1));
  if (a3 > 0.0)
    w_lo = std::max(w_lo, -k.alpha_nlos * std::log(kExpCut / a3));
  // Right edge: where the density weight becomes negligible.
  double w_hi = k.alpha_los * std::log(std::max(c2, 1e-30) * 1e20);
  if (c3 > 0.0) w_hi = std::max(w_hi, k.alpha_nlos * std::log(c3 * 1e20));
  w_hi = std::max(w_hi, w_lo + 1.0);

  return integrate_or_throw(integrand, w_lo, w_hi, spec);
}

double coverage_interference_limited(double threshold,
                                     const geometry::NetworkConfig& config,
                                     const channel::AntennaModel& antenna,
                                     const QuadratureSpec& spec) {
  if (!(threshold > 0.0))
    throw std::invalid_argument(
        "coverage_interference_limited: threshold must be > 0");
  const AnalyticConstants k = constants(config, antenna, threshold, spec);
  const double r = k.exponent_ratio;
  const double bt = k.beta_typical + k.gamma_typical;
  const double bc = k.beta_cross + k.gamma_cross;

  // After substituting x = lambda_b u^{-1/aL} the BS density cancels:
  //   P = int_0^inf e^{-bt x} e^{-bc x^r} (gamma_T + gamma_C r x^{r-1}) dx.
  // The x^{r-1} weight is folded away with y = x^r so both pieces stay smooth.
  const double p1 = k.gamma_typical *
                    integrate_or_throw(
                        [&](double x) {
                          const double e = bt * x + (bc == 0.0 ? 0.0 : bc * std::pow(x, r));
                          return e > kExpCut ? 0.0 : std::exp(-e);
                        },
                        0.0, specfun::kInf, spec);
  double p2 = 0.0;
  if (k.gamma_cross > 0.0) {
    p2 = k.gamma_cross *
         integrate_or_throw(
             [&](double y) {
               const double e = bt * std::pow(y, 1.0 / r) + bc * y;
               return e > kExpCut ? 0.0 : std::exp(-e);
             },
             0.0, specfun::kInf, spec);
  }
  return p1 + p2;
}

double lt_parallel_lower_bound(double threshold, double u,
                               const geometry::NetworkConfig& config,
                               const channel::AntennaModel& antenna,
                               const QuadratureSpec& spec) {
  if (!(u > 0.0))
    throw std::domain_error("lt_parallel_lower_bound: u must be > 0");
  const AnalyticConstants k = constants(config, antenna, threshold, spec);
  const double r = k.exponent_ratio;
  const double rho = specfun::varrho(threshold, config.alpha_los, spec);
  const double arg = 2.0 * k.gamma_parallel * config.lambda_s() *
                     std::pow(config.lambda_b, r) * std::pow(rho, r) *
                     std::pow(u, -1.0 / k.alpha_nlos);
  const double z = 2.0 * std::sqrt(arg);
  if (z < 1e-8) return 1.0;
  return z * specfun::bessel_k1(z);
}

JensenBounds jensen_lt_bounds(double threshold,
                              const geometry::NetworkConfig& config,
                              const channel::AntennaModel& antenna,
                              const QuadratureSpec& spec) {
  const AnalyticConstants k = constants(config, antenna, threshold, spec);
  const double r = k.exponent_ratio;
  JensenBounds b;
  b.lb_typical = std::exp(-k.beta_typical / k.gamma_typical);
  b.lb_cross = std::exp(-2.0 * config.lambda_s() *
                        std::pow(config.corner_loss_linear(), 1.0 / config.alpha_nlos) *
                        specfun::gamma_fn(1.0 - r) * specfun::gamma_fn(1.0 + r) *
                        k.epsilon);
  return b;
}

double assoc_prob_typical(const geometry::NetworkConfig& config,
                          const channel::AntennaModel& antenna,
                          const QuadratureSpec& spec) {
  const GainConstants g = gain_constants(config, antenna);
  const double r = g.ratio;
  const double gt = g.gamma_typical;
  const double gc = g.gamma_cross;
  return gt * integrate_or_throw(
                  [&](double x) {
                    const double e = gt * x + (gc == 0.0 ? 0.0 : gc * std::pow(x, r));
                    return e > kExpCut ? 0.0 : std::exp(-e);
                  },
                  0.0, specfun::kInf, spec);
}

double assoc_prob_typical_approx(const geometry::NetworkConfig& config,
                                 const channel::AntennaModel& antenna,
                                 AssocApproxForm form) {
  const GainConstants g = gain_constants(config, antenna);
  const double r = g.ratio;
  const double lambda_s = config.lambda_s();
  const double coeff = form == AssocApproxForm::ZetaConsistent
                           ? g.zeta_gamma_cross / specfun::gamma_fn(1.0 - r)
                           : std::pow(2.0, 1.0 + r) * g.gamma_cross;
  return 1.0 - coeff / specfun::sinc(r) *
                   std::pow(g.gamma_typical, -r) * lambda_s;
}

double coverage_taylor(double threshold, const geometry::NetworkConfig& config,
                       const channel::AntennaModel& antenna,
                       const QuadratureSpec& spec) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("coverage_taylor: threshold must be > 0");
  const AnalyticConstants k = constants(config, antenna, threshold, spec);
  const double r = k.exponent_ratio;
  const double lb = config.lambda_b;
  const double bt = k.beta_typical + k.gamma_typical;
  const double bc = k.beta_cross + k.gamma_cross;
  const double noise_scale =
      k.beta_noise == 0.0 ? 0.0 : k.beta_noise * std::pow(lb, -k.alpha_los);

  const auto envelope = [&](double x) {
    const double e = bt * x + (noise_scale == 0.0
                                   ? 0.0
                                   : noise_scale * std::pow(x, k.alpha_los));
    return e > kExpCut ? 0.0 : std::exp(-e);
  };

  // Typical-association part with the cross exponential linearized.
  const double p1 =
      k.gamma_typical *
      integrate_or_throw(
          [&](double x) {
            return envelope(x) * (1.0 - bc * (x == 0.0 ? 0.0 : std::pow(x, r)));
          },
          0.0, specfun::kInf, spec);

  // Cross-association part after integration by parts and linearization.
  double p2 = 0.0;
  if (k.gamma_cross > 0.0) {
    p2 = k.gamma_cross *
         integrate_or_throw(
             [&](double x) {
               if (x == 0.0) return 0.0;
               const double weight =
                   bt + (noise_scale == 0.0
                             ? 0.0
                             : noise_scale * k.alpha_los *
                                   std::pow(x, k.alpha_los - 1.0));
               return std::pow(x, r) * envelope(x) * weight;
             },
             0.0, specfun::kInf, spec);
  }
  return p1 + p2;
}

double lambda_b_crossover(double threshold,
                          const geometry::NetworkConfig& config,
                          const channel::AntennaModel& antenna,
                          double bracket_lo, double bracket_hi,
                          const QuadratureSpec& spec) {
  if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo))
    throw std::invalid_argument("lambda_b_crossover: bad bracket");

  const double ls = config.lambda_s();
  const double h = 0.25 * ls;
  const auto slope = [&](double lambda_b) {
    geometry::NetworkConfig lo_cfg = config;
    geometry::NetworkConfig hi_cfg = config;
    lo_cfg.lambda_b = hi_cfg.lambda_b = lambda_b;
    lo_cfg.lambda_s_h = lo_cfg.lambda_s_v = ls - h;
    hi_cfg.lambda_s_h = hi_cfg.lambda_s_v = ls + h;
    return (coverage(threshold, hi_cfg, antenna, spec) -
            coverage(threshold, lo_cfg, antenna, spec)) /
           (2.0 * h);
  };

  double lo = bracket_lo, hi = bracket_hi;
  double s_lo = slope(lo), s_hi = slope(hi);
  if (s_lo == 0.0) return lo;
  if (s_hi == 0.0) return hi;
  if ((s_lo > 0.0) == (s_hi > 0.0))
    throw std::runtime_error(
        "lambda_b_crossover: coverage slope has the same sign at both bracket "
        "ends");
  while ((hi - lo) / hi > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double s_mid = slope(mid);
    if (s_mid == 0.0) return mid;
    if ((s_mid > 0.0) == (s_lo > 0.0)) {
      lo = mid;
      s_lo = s_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace mmwave::analytic
