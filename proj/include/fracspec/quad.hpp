#pragma once

#include <memory>
#include <vector>

namespace fracspec::quad {

/// Truncated tanh-sinh rule: the trapezoidal sum over tau in [-H, H] under
/// s = tanh((pi/2) sinh tau). Endpoint factors 1 -/+ s are kept in stable
/// form (and as logs), so integrands with algebraic endpoint singularities
/// never see catastrophic cancellation.
struct DeRule {
  int num_points;
  double half_width;
  std::vector<double> nodes;        // s_i
  std::vector<double> weights;      // trapezoid weight times ds/dtau
  std::vector<double> log_weights;  // log of the same (-inf where underflowed)
  std::vector<double> om_half;      // (1 - s_i)/2, full relative accuracy
  std::vector<double> log_om;       // log(1 - s_i)
  std::vector<double> log_op;       // log(1 + s_i)

  /// Shared, internally synchronized cache keyed by (num_points, half_width).
  /// Retention is bounded; entries are rebuilt on demand.
  static std::shared_ptr<const DeRule> get(int num_points, double half_width = 4.0);
};

/// Moment h_n = 2^{mu+alpha+n beta} B(mu, 1 + alpha + n beta), the weighted
/// integral over [-1,1] of (1-s)^{alpha+n beta} (1+s)^{mu-1}. Requires
/// mu > 0 and 1 + alpha + n beta > 0.
double moment_h(int n, double mu, double alpha, double beta);

/// Window half-width large enough for the endpoint tails of the weighted
/// integrand: max(4, asinh(44 / (pi min(mu, 1+alpha)))).
double de_half_width(double mu, double alpha);

/// Right-endpoint value of the n1-th recursion column: the integral of
/// (1-s)^alpha (1+s)^{mu-1} T_{n1}(2((1-s)/2)^beta - 1) over [-1,1],
/// evaluated with max(8*n1, 80) tanh-sinh points. half_width <= 0 selects
/// de_half_width(mu, alpha).
double boundary_phi(int n1, double mu, double alpha, double beta,
                    double half_width = 0.0);

/// boundary_phi for n1 in [n1_lo, n1_hi], out[i] corresponding to n1_lo + i.
/// The parallel variant distributes independent n1 across OpenMP threads and
/// is bit-identical to the serial reference.
void boundary_phi_batch(int n1_lo, int n1_hi, double mu, double alpha, double beta,
                        double* out, bool parallel);

}  // namespace fracspec::quad
