#pragma once

#include <Eigen/Dense>
#include <string>

#include "mmwave/channel.hpp"
#include "mmwave/geometry.hpp"
#include "mmwave/specfun.hpp"

// Closed-form network results: association-gain CDFs, coverage probability,
// interference Laplace-transform bounds, association probabilities and the
// density scaling diagnostics. Everything here assumes an isotropic street
// process (lambda_s_h == lambda_s_v).

namespace mmwave::analytic {

enum class CurveMethod { AnalyticExact, AnalyticTaylor, JensenBound, MonteCarlo };

struct CoverageCurve {
  Eigen::ArrayXd thresholds_db;
  Eigen::ArrayXd values;
  CurveMethod method = CurveMethod::AnalyticExact;
  std::string meta;
};

// Scale constants shared by the CDFs and the conditional coverage factors.
//   gamma_typical  = 2 G^{1/aL}
//   gamma_cross    = 2^{1+aL/aN} lambda_s (cG)^{1/aN} Gamma(1 - aL/aN)
//   gamma_parallel = gamma_cross * c^{1/aN}
//   beta_noise     = T N0
//   beta_typical   = gamma_typical (pT rho(T) + (1-pT) rho(T g/G))
//   beta_cross     = gamma_cross * epsilon
// zeta_beta_cross and zeta_gamma_cross divide the lambda_s dependence out of
// beta_cross and gamma_cross.
struct AnalyticConstants {
  double gamma_typical = 0.0;
  double gamma_cross = 0.0;
  double gamma_parallel = 0.0;
  double beta_noise = 0.0;
  double beta_typical = 0.0;
  double beta_cross = 0.0;
  double zeta_beta_cross = 0.0;
  double zeta_gamma_cross = 0.0;
  double epsilon = 0.0;
  double exponent_ratio = 0.0;  // aL / aN
  double alpha_los = 0.0;
  double alpha_nlos = 0.0;
};

AnalyticConstants constants(const geometry::NetworkConfig& config,
                            const channel::AntennaModel& antenna,
                            double threshold,
                            const specfun::QuadratureSpec& spec = {});

/// CDF of the best typical-BS link gain: exp(-gamma_T lambda_b u^{-1/aL}).
double cdf_gain_typical(double u, const AnalyticConstants& k, double lambda_b);

/// CDF of the best cross-BS link gain: exp(-gamma_C lambda_b^{aL/aN} u^{-1/aN}).
double cdf_gain_cross(double u, const AnalyticConstants& k, double lambda_b);

/// Bessel-form CDF of the best parallel-BS link gain. With
/// small_argument_limit the known limiting value 1 is returned instead.
double cdf_gain_parallel(double u, const AnalyticConstants& k, double lambda_s,
                         double lambda_b, bool small_argument_limit = false);

/// Combined association-gain CDF: the typical and cross factors multiplied
/// (the parallel factor is indistinguishable from 1).
double cdf_gain_combined(double u, const AnalyticConstants& k, double lambda_b);

/// Density of the combined association gain (analytic derivative).
double pdf_gain_combined(double u, const AnalyticConstants& k, double lambda_b);

/// Coverage conditioned on association gain u:
/// exp(-b1/u) exp(-b2 lb u^{-1/aL}) exp(-b3 lb^{aL/aN} u^{-1/aN}).
double conditional_coverage(double u, const AnalyticConstants& k,
                            double lambda_b);

/// SINR coverage probability at linear threshold `threshold`: the conditional
/// coverage averaged over the association-gain density.
double coverage(double threshold, const geometry::NetworkConfig& config,
                const channel::AntennaModel& antenna,
                const specfun::QuadratureSpec& spec = {});

/// Interference-limited coverage (noise dropped): independent of lambda_b by
/// construction.
double coverage_interference_limited(double threshold,
                                     const geometry::NetworkConfig& config,
                                     const channel::AntennaModel& antenna,
                                     const specfun::QuadratureSpec& spec = {});

/// Bessel-form lower bound of the parallel-interference Laplace transform;
/// values very close to 1 mean parallel interference is negligible.
double lt_parallel_lower_bound(double threshold, double u,
                               const geometry::NetworkConfig& config,
                               const channel::AntennaModel& antenna,
                               const specfun::QuadratureSpec& spec = {});

struct JensenBounds {
  double lb_typical = 0.0;
  double lb_cross = 0.0;
};

/// Jensen lower bounds of the typical / cross interference Laplace
/// transforms, unconditioned on the association gain.
JensenBounds jensen_lt_bounds(double threshold,
                              const geometry::NetworkConfig& config,
                              const channel::AntennaModel& antenna,
                              const specfun::QuadratureSpec& spec = {});

/// Probability the receiver associates with a typical (same-street) BS.
/// Independent of lambda_b.
double assoc_prob_typical(const geometry::NetworkConfig& config,
                          const channel::AntennaModel& antenna,
                          const specfun::QuadratureSpec& spec = {});

// The first-order approximation of assoc_prob_typical is published with an
// extra lambda_s factor baked into a coefficient that already contains one.
// ZetaConsistent divides that duplicate out (the form the derivation
// supports); AsPrinted reproduces the published expression verbatim.
enum class AssocApproxForm { ZetaConsistent, AsPrinted };

double assoc_prob_typical_approx(const geometry::NetworkConfig& config,
                                 const channel::AntennaModel& antenna,
                                 AssocApproxForm form = AssocApproxForm::ZetaConsistent);

/// Linear-in-lambda_s coverage surrogate: first-order expansion of the cross
/// terms inside the coverage integral. Exact at lambda_s = 0.
double coverage_taylor(double threshold, const geometry::NetworkConfig& config,
                       const channel::AntennaModel& antenna,
                       const specfun::QuadratureSpec& spec = {});

/// BS density at which d(coverage)/d(lambda_s) changes sign, found by
/// bisection on a central finite difference. Throws std::runtime_error when
/// the bracket does not straddle a sign change.
double lambda_b_crossover(double threshold,
                          const geometry::NetworkConfig& config,
                          const channel::AntennaModel& antenna,
                          double bracket_lo, double bracket_hi,
                          const specfun::QuadratureSpec& spec = {});

}  // namespace mmwave::analytic
