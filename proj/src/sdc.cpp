#include "fracspec/sdc.hpp"

#include <algorithm>
#include <cmath>

#include "fracspec/special.hpp"

namespace fracspec::sdc {

namespace {

void check_problem(const SdcProblem& p) {
  if (p.basis.alpha != 0.0)
    throw std::invalid_argument("sdc: value-space transforms need alpha = 0");
  if (p.n < 2) throw std::invalid_argument("sdc: grid too small");
  if (!(p.mu > 0.0) || p.mu > 1.0) throw std::invalid_argument("sdc: mu must be in (0, 1]");
}

}  // namespace

std::vector<double> time_grid(const SdcProblem& p) {
  auto g = basis::mapped_grid(p.basis, p.n);
  std::reverse(g.begin(), g.end());
  return g;
}

std::vector<double> sdc_residual(const std::vector<double>& u_vals, const SdcProblem& p,
                                 const opcore::FioOperator& op) {
  check_problem(p);
  if (static_cast<int>(u_vals.size()) != p.n)
    throw std::invalid_argument("sdc_residual: value count mismatch");
  const auto t = time_grid(p);
  // F on the grid, in transform (descending) order.
  std::vector<double> fv(static_cast<size_t>(p.n));
  for (int i = 0; i < p.n; ++i)
    fv[static_cast<size_t>(p.n - 1 - i)] = p.f(t[static_cast<size_t>(i)], u_vals[static_cast<size_t>(i)]);
  const auto fc = basis::dct1_values_to_coeffs(fv);
  const auto integ = op.apply(fc);
  basis::RealCoeffs series{p.basis, integ};
  const auto vals = basis::eval_series(series, t);
  std::vector<double> res(static_cast<size_t>(p.n));
  for (int i = 0; i < p.n; ++i)
    res[static_cast<size_t>(i)] = p.a + vals[static_cast<size_t>(i)] - u_vals[static_cast<size_t>(i)];
  return res;
}

std::vector<double> sdc_sweep(const std::vector<double>& u_vals,
                              const std::vector<double>& residual, const SdcProblem& p) {
  check_problem(p);
  const auto t = time_grid(p);
  const int n = p.n;
  const double g1 = special::gamma(p.mu + 1.0);
  const double g2 = special::gamma(p.mu + 2.0);
  std::vector<double> delta(static_cast<size_t>(n), 0.0);
  std::vector<double> dvals(static_cast<size_t>(n), 0.0);  // F(t_l, u_l + d_l) - F(t_l, u_l)

  delta[0] = residual[0];
  dvals[0] = p.f(t[0], u_vals[0] + delta[0]) - p.f(t[0], u_vals[0]);
  for (int j = 1; j < n; ++j) {
    const double tj = t[static_cast<size_t>(j)];
    // Piecewise-linear differences integrated exactly against the kernel
    // (t_j - s)^{mu-1}/Gamma(mu). On (t_{l-1}, t_l] the hat weights are
    //   toward t_{l-1}: I0 - I1/h,  toward t_l: I1/h,
    // with I0 = (a^mu - b^mu)/Gamma(mu+1),
    //      I1 = a I0 - (a^{mu+1} - b^{mu+1})/Gamma(mu+2),
    // a = t_j - t_{l-1}, b = t_j - t_l, h = a - b. A one-sided rectangle
    // rule is not good enough here: its O(h) error, amplified by the
    // Volterra resolvent, makes the sweep iteration diverge on this grid.
    double hist = 0.0;
    double w_self = 0.0;
    for (int l = 1; l <= j; ++l) {
      const double a = tj - t[static_cast<size_t>(l - 1)];
      const double b = tj - t[static_cast<size_t>(l)];
      const double h = a - b;
      const double i0 = (std::pow(a, p.mu) - std::pow(b, p.mu)) / g1;
      const double i1 = a * i0 - (std::pow(a, p.mu + 1.0) - std::pow(b, p.mu + 1.0)) / g2;
      const double w_right = i1 / h;
      hist += (i0 - w_right) * dvals[static_cast<size_t>(l - 1)];
      if (l < j)
        hist += w_right * dvals[static_cast<size_t>(l)];
      else
        w_self = w_right;
    }
    const double rhs = hist + residual[static_cast<size_t>(j)];
    const double uj = u_vals[static_cast<size_t>(j)];
    const double f0 = p.f(tj, uj);

    // Implicit node relation d = w_self (F(tj, uj + d) - F(tj, uj)) + rhs.
    double d = rhs;
    bool done = false;
    if (p.f_u) {
      for (int it = 0; it < 50; ++it) {
        const double g = d - w_self * (p.f(tj, uj + d) - f0) - rhs;
        const double gp = 1.0 - w_self * p.f_u(tj, uj + d);
        if (gp == 0.0) break;
        const double step = g / gp;
        d -= step;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(d))) {
          done = true;
          break;
        }
      }
    } else {
      double d0 = rhs, d1 = rhs + std::max(1e-8, 1e-8 * std::abs(rhs));
      auto g = [&](double v) { return v - w_self * (p.f(tj, uj + v) - f0) - rhs; };
      double g0 = g(d0), g1 = g(d1);
      for (int it = 0; it < 50; ++it) {
        if (g1 == g0) break;
        const double d2 = d1 - g1 * (d1 - d0) / (g1 - g0);
        d0 = d1;
        g0 = g1;
        d1 = d2;
        g1 = g(d2);
        if (std::abs(d1 - d0) <= 1e-14 * std::max(1.0, std::abs(d1))) {
          done = true;
          break;
        }
      }
      d = d1;
    }
    if (!done && std::abs(d - w_self * (p.f(tj, uj + d) - f0) - rhs) >
                     1e-10 * std::max(1.0, std::abs(d)))
      throw std::runtime_error("sdc_sweep: node solve did not converge at index " +
                               std::to_string(j));
    delta[static_cast<size_t>(j)] = d;
    dvals[static_cast<size_t>(j)] = p.f(tj, uj + d) - f0;
  }

  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = u_vals[static_cast<size_t>(i)] + delta[static_cast<size_t>(i)];
  return out;
}

SdcResult sdc_solve(const SdcProblem& p) {
  check_problem(p);
  opcore::FioOperator op(p.mu, p.basis.alpha, p.basis.beta, p.n + 2);
  SdcResult res{{}, {}, {p.basis, {}}, 0, {}};
  res.t = time_grid(p);
  res.u.assign(static_cast<size_t>(p.n), 0.0);

  for (int sweep = 0; sweep < p.max_sweeps; ++sweep) {
    auto eps = sdc_residual(res.u, p, op);
    double norm = 0.0;
    for (double e : eps) norm = std::max(norm, std::abs(e));
    res.residual_history.push_back(norm);
    if (norm < p.tol) {
      res.sweeps = sweep;
      std::vector<double> rev(res.u.rbegin(), res.u.rend());
      res.coeffs = basis::values_to_coeffs(p.basis, rev);
      return res;
    }
    res.u = sdc_sweep(res.u, eps, p);
  }
  throw NonConvergenceError("sdc_solve: sweep cap reached", res.residual_history);
}

NamedRhs lookup_rhs(const std::string& name) {
  if (name == "linear" || name == "default") {
    const double g_half = special::gamma(0.5);
    NamedRhs r;
    r.f = [g_half](double t, double u) {
      return u + std::sqrt(1.0 + t) - 0.5 * g_half * (1.0 + t);
    };
    r.f_u = [](double, double) { return 1.0; };
    r.exact = [g_half](double t) { return 0.5 * g_half * (1.0 + t); };
    return r;
  }
  throw std::invalid_argument("sdc: unknown right-hand side '" + name + "'");
}

}  // namespace fracspec::sdc
