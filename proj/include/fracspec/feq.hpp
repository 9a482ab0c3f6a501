#pragma once

#include <functional>
#include <memory>
#include <optional>

#include <json.hpp>

#include "fracspec/adaptive_qr.hpp"
#include "fracspec/basis.hpp"
#include "fracspec/opcore.hpp"

namespace fracspec::feq {

/// Variable coefficient in the weight-free part of the basis: a finite
/// first-kind Chebyshev series in the mapped variable y.
template <class S>
struct Multiplier {
  std::vector<S> coeffs{S(1)};

  static Multiplier constant(S c) { return {{c}}; }

  /// scale * ((1+y)/2)^k, i.e. scale * ((1+x)/2)^{k beta} in the physical
  /// variable.
  static Multiplier monomial(int k, double scale) {
    auto c = opcore::power_multiplier_coeffs(k);
    Multiplier m;
    m.coeffs.assign(c.size(), S(0));
    for (size_t i = 0; i < c.size(); ++i) m.coeffs[i] = S(scale * c[i]);
    return m;
  }

  static Multiplier from_series(std::vector<S> c) {
    if (c.empty()) c.push_back(S(0));
    return {std::move(c)};
  }

  int degree() const {
    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && coeffs[static_cast<size_t>(d)] == S(0)) --d;
    return d;
  }
  bool is_one() const { return degree() == 0 && coeffs[0] == S(1); }
};

/// Samples a function on progressively finer mapped grids until the
/// coefficient tail drops below 1e-14, then truncates. The callable receives
/// 1+x (exact near the clustered left endpoint); the samples are of the
/// weight-free part, so the expansion lives alongside any alpha.
Multiplier<double> multiplier_from_function(const basis::JfpBasis& basis,
                                            const std::function<double(double)>& f);

template <class S>
struct FieTerm {
  double mu = 0.0;  // 0 means no integral: the multiplier alone
  Multiplier<S> a;  // outer multiplier
  Multiplier<S> b;  // inner multiplier (applied before integration)
};

template <class S>
struct FieProblem {
  basis::JfpBasis basis;
  std::vector<FieTerm<S>> terms;
  basis::CoeffVec<S> rhs;

  /// Dense functional rows prepended to the operator rows; entry(c) is the
  /// row value against coefficient column c.
  struct ExtraRow {
    std::function<S(int)> entry;
    S value;
  };
  std::vector<ExtraRow> extra_rows;

  /// Auxiliary unknown columns, ordered before the coefficient columns.
  struct AuxColumn {
    std::vector<S> top;  // entries against the extra rows
    std::vector<S> op;   // entries against the operator rows
  };
  std::vector<AuxColumn> aux;
};

/// Assembled lower-banded system: sum over terms of M[a] S^(mu) M[b] (the
/// identity term contributes M[a] alone), bordered by the extra rows and
/// auxiliary columns. Owns the fractional integral operators and grows them
/// on demand.
template <class S>
class FeqSystem {
 public:
  explicit FeqSystem(FieProblem<S> p);

  int offset() const { return offset_; }
  int dense_rows() const { return static_cast<int>(p_.extra_rows.size()); }
  int aux_count() const { return static_cast<int>(p_.aux.size()); }

  void ensure(int assembled_col);
  void assembled_column(int j, std::vector<S>& out) const;
  S assembled_rhs(int i) const;
  int rhs_support() const;

  linalg::StreamedLowerBanded<S> stream();

  const opcore::FioOperator& op_for_term(size_t term) const;

  /// Row range [0, rows) of A x for a solution prefix x (aux first); used to
  /// re-verify reported residuals without the factorized form.
  std::vector<S> apply_truncated(const std::vector<S>& x, int rows) const;

  const FieProblem<S>& problem() const { return p_; }

 private:
  void operator_column(int c, std::vector<S>& out) const;

  FieProblem<S> p_;
  std::vector<std::shared_ptr<opcore::FioOperator>> ops_;  // one per distinct mu
  std::vector<int> term_op_;                               // -1 for identity terms
  int op_band_ = 0;
  int offset_ = 0;
};

template <class S>
struct SolveReport {
  basis::CoeffVec<S> solution;
  std::vector<S> aux_values;
  int n_used = 0;
  double residual = 0.0;
  std::vector<std::pair<int, double>> residual_history;
  double wall_ms = 0.0;
};

template <class S>
SolveReport<S> solve(const FieProblem<S>& problem, double tol, int n_max);

template <class S>
std::vector<S> sample_solution(const SolveReport<S>& report, const std::vector<double>& xs) {
  return basis::eval_series(report.solution, xs);
}

// ---- showcase drivers ----------------------------------------------------

/// u + lambda^2 I^{1/2} u = 1 on the (0, 1/2) basis.
FieProblem<double> abel_problem(double lambda);
SolveReport<double> solve_abel(double lambda, double tol, int n_max);
double abel_exact(double lambda, double x);

/// Two fractional orders with variable coefficients on the (0, 1/6) basis;
/// manufactured so the solution is (1+x)^{3/2}.
FieProblem<double> var_problem();
SolveReport<double> solve_var(double tol, int n_max);
double var_exact(double x);

struct BboReport {
  SolveReport<double> u;
  basis::RealCoeffs v;  // v = I^1 u + 1
  double eval_v(double t) const;   // t in (0, 2]
  double exact_v(double t) const;  // Mittag-Leffler closed form
};
/// Integrated form of v' + D^{1/2} v + v = 0, v -> 1 at the left endpoint,
/// solved for u = v' on the (0, 1/2) basis with t = 1 + x.
BboReport solve_bbo(double tol, int n_max);

struct AiryReport {
  basis::ComplexCoeffs vhat;      // coefficients of v = D^{3/2} u
  basis::ComplexCoeffs integral;  // coefficients of I^{3/2} v
  Complex a = 0.0;                // coefficient of the (1+x) ansatz term
  int n_final = 0;
  std::vector<std::pair<int, double>> cauchy_history;
  bool plateaued = false;
  double boundary_right_error = 0.0;

  /// u(x) = I^{3/2} v (x) + a (1+x); the left boundary value is the
  /// operator-range limit 0.
  Complex eval_u(double x) const;
};
/// eps i^{3/2} D^{3/2} u = x u with u(-1) = 0, u(1) = 1, via the integral
/// ansatz on the (-1/2, 1/2) basis; truncations are doubled until the
/// sampled Cauchy error plateaus below plateau_tol.
AiryReport solve_airy(double eps, double plateau_tol, int n_max);

// ---- problem files --------------------------------------------------------

struct ProblemFile {
  FieProblem<Complex> problem;
  double tol = 1e-13;
  int n_max = 8192;
  bool all_real = true;
};

ProblemFile problem_from_json(const nlohmann::json& j);

template <class S>
nlohmann::json report_to_json(const SolveReport<S>& report, const std::vector<double>& xs);

}  // namespace fracspec::feq
