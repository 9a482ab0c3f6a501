#pragma once

#include <memory>

#include "fracspec/arnoldi.hpp"
#include "fracspec/basis.hpp"
#include "fracspec/opcore.hpp"

namespace fracspec::eig {

/// Eigenvalue problem for the fractional derivative of order mu1 with a
/// right-end condition of order mu2, recast through integration as a
/// rank-one-plus-lower-banded operator whose largest-modulus eigenvalues
/// are the reciprocals of the wanted ones.
struct EigProblem {
  double mu1 = 1.5;
  double mu2 = 0.0;
  basis::JfpBasis basis{0.5, 1.5};
  int count = 6;
  int n_start = 64;
  int n_cap = 4096;
  double cauchy_tol = 1e-10;
  double tail_tol = 1e-12;
  double arnoldi_tol = 1e-13;
};

/// Truncated matrix action v -> c vhat (B S† v) - S‡ v, with the operators
/// shared and grown across truncations.
class EigAction {
 public:
  EigAction(const EigProblem& p);

  void ensure(int n);
  /// y = A_n x for the n x n truncation.
  void apply(int n, const Complex* x, Complex* y) const;

  double constant() const { return c_; }
  const std::vector<double>& vhat() const { return vhat_; }
  const opcore::FioOperator& op_dagger() const { return *dag_; }
  const opcore::FioOperator& op_ddagger() const { return *ddag_; }

 private:
  double c_;
  std::vector<double> vhat_;  // coefficients of (1+x)^{mu1 - 1}
  std::shared_ptr<opcore::FioOperator> dag_;   // order mu1 - mu2
  std::shared_ptr<opcore::FioOperator> ddag_;  // order mu1
  std::vector<double> colsum_dag_;             // cached B S† column sums
};

struct EigReport {
  std::vector<Complex> eigenvalues;  // sorted by modulus, conjugates adjacent
  std::vector<basis::ComplexCoeffs> eigenvectors;
  std::vector<double> eigen_residuals;  // ||A u - u/lambda|| at the final truncation
  std::vector<double> ml_residuals;     // |E(-2^mu1 lambda)| where trusted
  std::vector<bool> ml_trusted;
  std::vector<int> truncations;
  std::vector<double> cauchy_errors;  // between consecutive truncations
  int n_final = 0;
  bool plateaued = false;
};

EigAction assemble_eig(const EigProblem& p);

/// Doubles the truncation until the eigenvalue Cauchy error and the
/// eigenvector coefficient tails both plateau, then reports the pairs with
/// their Mittag-Leffler zero residuals (or the linear-algebra residual when
/// the series is flagged untrustworthy).
EigReport eig_solve(const EigProblem& p);

struct MlCheck {
  double value = 0.0;  // |E_{mu1, mu1-mu2}(-2^{mu1} lambda)|
  bool trust = false;
};

/// A number lambda solves the differential eigenproblem exactly when it is a
/// zero of E_{mu1, mu1-mu2}(-2^{mu1} lambda); trust is withdrawn when the
/// series cancellation estimate exceeds 1e6.
MlCheck ml_zero_residual(const EigProblem& p, Complex lambda);

}  // namespace fracspec::eig
