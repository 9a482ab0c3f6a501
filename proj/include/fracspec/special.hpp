#pragma once

#include "fracspec/types.hpp"

namespace fracspec::special {

/// Gamma function for real arguments. Poles (nonpositive integers) raise
/// std::domain_error; arguments past the double overflow threshold raise
/// std::range_error.
double gamma(double x);

/// Gamma function continued to the complex plane.
Complex gamma(Complex z);

/// log(Gamma(x)) for x > 0.
double lgamma_pos(double x);

/// Reciprocal gamma; entire, returns 0 at the poles of Gamma.
double rgamma(double x);

/// Euler beta function, a > 0 and b > 0.
double beta(double a, double b);

/// Complementary error function.
double erfc(double x);

/// Scaled complement exp(x^2) * erfc(x); stays representable where erfc
/// itself underflows.
double erfcx(double x);

struct MlResult {
  Complex value;
  /// Ratio of the largest series term to max(|value|, 1); a proxy for the
  /// number of digits lost to cancellation.
  double cancellation = 0.0;
  int terms = 0;
  /// False when the term cap was hit or cancellation exceeds 1e12. The value
  /// is still returned.
  bool trusted = true;
};

/// Two-parameter Mittag-Leffler function E_{sigma,tau}(z) by Taylor series,
/// sigma > 0. Terms are summed until |term| < tol * |partial sum| (with a
/// hard cap); tol must lie in (1e-16, 1e-2).
MlResult mittag_leffler(double sigma, double tau, Complex z, double tol);

/// sin(pi*x) with exact argument reduction.
double sin_pi(double x);

}  // namespace fracspec::special
