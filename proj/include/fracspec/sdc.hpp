#pragma once

#include <functional>

#include "fracspec/basis.hpp"
#include "fracspec/opcore.hpp"

namespace fracspec::sdc {

/// Caputo initial value problem D^mu u = F(t, u), u(-1) = a, on the mapped
/// Chebyshev grid of the given basis (alpha must be 0; mu a multiple of
/// beta).
struct SdcProblem {
  double mu;
  double a;
  std::function<double(double, double)> f;
  std::function<double(double, double)> f_u;  // optional; secant when absent
  basis::JfpBasis basis;
  int n = 10;
  double tol = 1e-13;
  int max_sweeps = 200;
};

/// Grid in ascending time order (the reverse of mapped_grid).
std::vector<double> time_grid(const SdcProblem& p);

/// Residual a + I^mu F(., u) - u on the grid, with the fractional integral
/// applied spectrally through the operator columns.
std::vector<double> sdc_residual(const std::vector<double>& u_vals, const SdcProblem& p,
                                 const opcore::FioOperator& op);

/// One correction sweep: marches the grid left to right solving the local
/// implicit relation with product-rectangle (L1-style) weights for the
/// kernel, then returns u + delta.
std::vector<double> sdc_sweep(const std::vector<double>& u_vals,
                              const std::vector<double>& residual, const SdcProblem& p);

struct SdcResult {
  std::vector<double> t;       // ascending
  std::vector<double> u;       // values on t
  basis::RealCoeffs coeffs;
  int sweeps = 0;
  std::vector<double> residual_history;
};

/// Sweeps until the residual sup-norm drops below tol; throws
/// NonConvergenceError past max_sweeps.
SdcResult sdc_solve(const SdcProblem& p);

/// Built-in right-hand sides selectable from the command line.
struct NamedRhs {
  std::function<double(double, double)> f;
  std::function<double(double, double)> f_u;
  std::function<double(double)> exact;  // may be null
};
NamedRhs lookup_rhs(const std::string& name);

}  // namespace fracspec::sdc
