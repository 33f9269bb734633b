#pragma once

#include <cmath>
#include <cstdint>

// Slow, brute-force reference evaluations used only to check the fast
// implementations (validation suite and unit tests). Deliberately built on
// different representations than the production code paths.

namespace mmwave::reference {

/// Gamma via the shifted Stirling series: recurse x up past 30 and evaluate
/// the asymptotic log-gamma expansion in long double.
inline double gamma_stirling(double x) {
  long double z = static_cast<long double>(x);
  long double shift = 1.0L;
  while (z < 30.0L) {
    shift *= z;
    z += 1.0L;
  }
  static const long double kBern[8] = {
      1.0L / 12.0L,       -1.0L / 360.0L,      1.0L / 1260.0L,
      -1.0L / 1680.0L,    1.0L / 1188.0L,      -691.0L / 360360.0L,
      1.0L / 156.0L,      -3617.0L / 122400.0L};
  const long double half_log_2pi = 0.918938533204672741780329736405618L;
  long double series = 0.0L;
  long double zpow = z;
  for (int n = 0; n < 8; ++n) {
    series += kBern[n] / zpow;
    zpow *= z * z;
  }
  const long double log_gamma =
      (z - 0.5L) * logl(z) - z + half_log_2pi + series;
  return static_cast<double>(expl(log_gamma) / shift);
}

/// K1 via its integral representation, integral over t in [0, inf) of
/// exp(-mu cosh t) cosh t dt, with composite Simpson on the effective
/// support. Valid for mu up to a few hundred.
inline double k1_integral(double mu, long panels = 400000) {
  const double ratio = 709.0 / mu;
  const double t_max =
      ratio > 1.0 ? std::log(ratio + std::sqrt(ratio * ratio - 1.0)) : 1.0;
  if (panels % 2) ++panels;
  const long double h = static_cast<long double>(t_max) / panels;
  const auto f = [mu](long double t) -> long double {
    const long double ch = coshl(t);
    const long double e = static_cast<long double>(mu) * ch;
    return e > 709.0L ? 0.0L : expl(-e) * ch;
  };
  long double sum = f(0.0L) + f(static_cast<long double>(t_max));
  for (long i = 1; i < panels; ++i)
    sum += f(i * h) * (i % 2 ? 4.0L : 2.0L);
  return static_cast<double>(sum * h / 3.0L);
}

/// varrho via composite Simpson directly on [1, upper] plus the analytic
/// tail of the integrand t mu^-alpha (1 - t mu^-alpha + ...).
inline double varrho_simpson(double t, double alpha, long panels = 10000000,
                             double upper = 1e6) {
  if (t == 0.0) return 0.0;
  if (panels % 2) ++panels;
  const long double h = (static_cast<long double>(upper) - 1.0L) / panels;
  const auto f = [t, alpha](long double mu) -> long double {
    return 1.0L / (1.0L + powl(mu, static_cast<long double>(alpha)) /
                              static_cast<long double>(t));
  };
  long double sum = f(1.0L) + f(static_cast<long double>(upper));
  for (long i = 1; i < panels; ++i)
    sum += f(1.0L + i * h) * (i % 2 ? 4.0L : 2.0L);
  long double value = sum * h / 3.0L;
  // Tail: t u^{1-a}/(a-1) - t^2 u^{1-2a}/(2a-1).
  const long double u = upper;
  const long double a = alpha;
  const long double tl = t;
  value += tl * powl(u, 1.0L - a) / (a - 1.0L) -
           tl * tl * powl(u, 1.0L - 2.0L * a) / (2.0L * a - 1.0L);
  return static_cast<double>(value);
}

}  // namespace mmwave::reference
