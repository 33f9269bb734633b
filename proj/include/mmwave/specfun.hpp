#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

// Scalar special functions and adaptive quadrature used throughout the
// analytic formulas. All functions are pure and reentrant.

namespace mmwave::specfun {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
};

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
  bool converged = true;
  int subdivisions = 0;
};

// Thrown when an adaptive integral fails to reach the requested tolerance.
// Carries the partial estimate so callers can decide whether to accept it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, IntegralResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const IntegralResult& partial() const { return partial_; }

 private:
  IntegralResult partial_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Gamma function for x > 0. Throws std::domain_error otherwise.
double gamma_fn(double x);

/// Modified Bessel function of the second kind, order one, for mu > 0.
/// Underflows to zero for very large arguments (mu > ~700).
double bessel_k1(double mu);

/// sin(pi x) / (pi x), with the removable singularity filled in at x = 0.
double sinc(double x);

/// varrho(t) = integral over mu in [1, inf) of 1 / (1 + mu^alpha_los / t).
/// Requires alpha_los > 1 (the integral diverges otherwise) and t >= 0.
/// Nondecreasing in t; equals 0 at t = 0.
double varrho(double t, double alpha_los, const QuadratureSpec& spec = {});

/// Adaptive Gauss-Kronrod (7-15) integration of f over [a, b].
/// b may be +infinity, in which case the tail is mapped onto a finite
/// interval; the integrand must decay there. Never throws: inspect
/// `converged` or use integrate_or_throw.
IntegralResult integrate(const std::function<double(double)>& f, double a,
                         double b, const QuadratureSpec& spec = {});

/// Same as integrate() but raises QuadratureError on non-convergence.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec = {});

}  // namespace mmwave::specfun
