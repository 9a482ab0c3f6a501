#pragma once

#include <cmath>
#include <vector>

#include "fracspec/types.hpp"

namespace fracspec::basis {

/// Basis pair (alpha, beta) for Q_n(x) = ((1+x)/2)^alpha * T_n(y(x)) with
/// y(x) = 2((1+x)/2)^beta - 1. Requires alpha > -1 and beta > 0.
struct JfpBasis {
  double alpha;
  double beta;

  JfpBasis(double a, double b) : alpha(a), beta(b) {
    if (!(a > -1.0)) throw std::invalid_argument("JfpBasis: alpha must be > -1");
    if (!(b > 0.0)) throw std::invalid_argument("JfpBasis: beta must be > 0");
  }

  double weight(double x) const { return std::pow(0.5 * (1.0 + x), alpha); }
  double map_y(double x) const { return 2.0 * std::pow(0.5 * (1.0 + x), beta) - 1.0; }
  /// Physical point whose mapped coordinate is y.
  double unmap(double y) const { return 2.0 * std::pow(0.5 * (1.0 + y), 1.0 / beta) - 1.0; }

  bool operator==(const JfpBasis& o) const { return alpha == o.alpha && beta == o.beta; }
};

template <class S>
struct CoeffVec {
  JfpBasis basis;
  std::vector<S> coeffs;
};

using RealCoeffs = CoeffVec<double>;
using ComplexCoeffs = CoeffVec<Complex>;

/// Q_n at a single point. x = -1 is allowed only for alpha >= 0 (the weight
/// is singular otherwise).
double eval_jfp(const JfpBasis& basis, int n, double x);

/// Chebyshev-Lobatto points mapped to the physical variable, ordered with
/// grid[0] = 1 and grid[n-1] = -1. Requires n >= 2.
std::vector<double> mapped_grid(const JfpBasis& basis, int n);

enum class TransformPath { kDirect, kFast };

/// Type-I cosine transform pair on n Lobatto samples. Direct summation is
/// the default; the fast path goes through FFTW. Both produce first-kind
/// Chebyshev coefficients of the interpolant through the sample values.
std::vector<double> dct1_values_to_coeffs(const std::vector<double>& values,
                                          TransformPath path = TransformPath::kDirect);
std::vector<double> dct1_coeffs_to_values(const std::vector<double>& coeffs, int n,
                                          TransformPath path = TransformPath::kDirect);

/// Clenshaw evaluation of a first-kind Chebyshev series at y in [-1, 1].
template <class S>
S clenshaw(const std::vector<S>& c, double y) {
  if (c.empty()) return S(0);
  S bk1(0), bk2(0);
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const S bk = c[static_cast<size_t>(k)] + (2.0 * y) * bk1 - bk2;
    bk2 = bk1;
    bk1 = bk;
  }
  return c[0] + y * bk1 - bk2;
}

template <class S>
std::vector<S> eval_series(const CoeffVec<S>& u, const std::vector<double>& xs) {
  std::vector<S> out(xs.size(), S(0));
  for (size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (x == -1.0 && u.basis.alpha < 0.0)
      throw std::domain_error("eval_series: weight singular at x = -1 for alpha < 0");
    if (u.coeffs.empty()) continue;
    const double y = u.basis.map_y(x);
    out[i] = clenshaw(u.coeffs, y) * (u.basis.alpha == 0.0 ? 1.0 : u.basis.weight(x));
  }
  return out;
}

/// Transform weight-free samples at mapped_grid(basis, n) into coefficients.
/// For alpha != 0 the caller supplies u(x) / ((1+x)/2)^alpha, with the x = -1
/// slot holding the limit value.
template <class S>
CoeffVec<S> values_to_coeffs(const JfpBasis& basis, const std::vector<S>& values,
                             TransformPath path = TransformPath::kDirect);

/// Inverse of values_to_coeffs on n >= len(u) points (padding, never implicit
/// truncation).
template <class S>
std::vector<S> coeffs_to_values(const CoeffVec<S>& u, int n,
                                TransformPath path = TransformPath::kDirect);

}  // namespace fracspec::basis
