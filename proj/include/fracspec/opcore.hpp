#pragma once

#include <iosfwd>
#include <vector>

#include "fracspec/banded.hpp"
#include "fracspec/basis.hpp"
#include "fracspec/types.hpp"

namespace fracspec::opcore {

/// (n+1) x (n+2) truncation of the weighted differentiation matrix mapping
/// first-kind coefficients in y to second-kind coefficients: bandwidths
/// (0,2) with row m equal to (m/2, m+1, (m+2)/2). The common factor beta is
/// not folded in (it cancels in the recursion system).
linalg::BandedMatrix<double> diff_matrix(int n);

/// (n+1) x (n+2) truncation of the first-to-second-kind conversion matrix:
/// diag (1, 1/2, 1/2, ...), second superdiagonal -1/2.
linalg::BandedMatrix<double> conv_matrix(int n);

/// Coefficients of the product of two first-kind Chebyshev series, by the
/// linearization T_m T_n = (T_{m+n} + T_{|m-n|}) / 2.
std::vector<double> cheb_product(const std::vector<double>& a, const std::vector<double>& b);

/// Chebyshev coefficients c_0..c_k of ((1+y)/2)^k.
std::vector<double> power_multiplier_coeffs(int k);

/// Multiplication by a first-kind series with coefficients c: Toeplitz plus
/// Hankel with a zeroed first Hankel row, bandwidths (k, k). Acts identically
/// on weighted coefficient vectors for any alpha.
class MulOp {
 public:
  explicit MulOp(std::vector<double> c);

  int bandwidth() const { return k_; }
  const std::vector<double>& coeffs() const { return c_; }

  double entry(int i, int j) const;

  /// y = M x with x densely indexed from row 0; y has x.size() + k entries.
  template <class S>
  std::vector<S> apply(const std::vector<S>& x) const {
    const int len = static_cast<int>(x.size());
    std::vector<S> y(static_cast<size_t>(len + k_), S(0));
    for (int i = 0; i < len + k_; ++i) {
      S acc(0);
      const int j0 = std::max(0, i - k_), j1 = std::min(len - 1, i + k_);
      for (int j = j0; j <= j1; ++j) acc += entry(i, j) * x[static_cast<size_t>(j)];
      y[static_cast<size_t>(i)] = acc;
    }
    return y;
  }

 private:
  std::vector<double> c_;
  int k_;
};

struct InitialColumns {
  std::vector<double> r0, r1, r2;
};

/// Closed forms for the first three recursion columns in terms of the
/// moments h_0, h_1, h_2.
InitialColumns initial_columns(double mu, double alpha, double beta);

/// One recursion step: given columns n-1 and n and the right-endpoint value
/// of column n+1, solves the bordered (n+2) x (n+2) system for column n+1.
/// Valid for n >= 1 (at n = 1 the weighted-derivative term of column 0
/// vanishes identically). min_pivot, when non-null, receives the smallest
/// Givens pivot modulus of the solve.
std::vector<double> recurse_column(int n, const std::vector<double>& r_nm1,
                                   const std::vector<double>& r_n, double bc_value,
                                   double* min_pivot = nullptr);

struct BuildOptions {
  bool parallel = true;
};

/// Matrix approximation to the fractional integral of order mu acting on
/// coefficients in the (alpha, beta) basis. Columns are built by the
/// three-term recursion at O(j) each and cached densely; column j has
/// nonzeros only in rows 0..j+k with k = mu/beta. Only the trailing pair of
/// recursion columns is retained, so memory beyond the cached operator
/// columns stays linear in the truncation.
class FioOperator {
 public:
  FioOperator(double mu, double alpha, double beta, int n_cols,
              BuildOptions opts = {});

  double mu() const { return mu_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int power_k() const { return k_; }
  const basis::JfpBasis& basis() const { return basis_; }

  /// Highest column index currently available.
  int max_column() const { return static_cast<int>(s_cols_.size()) - 1; }

  /// Extends the cache through column n (no-op when already available).
  void ensure_columns(int n);

  const std::vector<double>& column(int j) const;
  double column_sum(int j) const;

  /// y = S x using columns 0..x.size()-1; y has x.size() + k entries.
  template <class S>
  std::vector<S> apply(const std::vector<S>& x) const {
    const int len = static_cast<int>(x.size());
    if (len - 1 > max_column())
      throw std::invalid_argument("FioOperator::apply: columns not built");
    std::vector<S> y(static_cast<size_t>(len + k_), S(0));
    for (int j = 0; j < len; ++j) {
      const auto& col = column(j);
      const S xj = x[static_cast<size_t>(j)];
      for (size_t i = 0; i < col.size(); ++i) y[i] += col[i] * xj;
    }
    return y;
  }

  const MulOp& mul() const { return mul_; }
  double min_recursion_pivot() const { return min_pivot_; }
  int min_recursion_pivot_column() const { return min_pivot_col_; }

  std::size_t cached_column_bytes() const { return s_bytes_; }
  std::size_t overhead_bytes() const;

 private:
  void push_column(const std::vector<double>& r);

  double mu_, alpha_, beta_;
  int k_;
  basis::JfpBasis basis_;
  double scale_;  // 2^{-alpha} / Gamma(mu)
  MulOp mul_;
  BuildOptions opts_;
  std::vector<std::vector<double>> s_cols_;
  std::vector<double> r_prev_, r_last_;  // trailing recursion columns
  int r_index_ = -1;                     // column index of r_last_
  double min_pivot_ = std::numeric_limits<double>::infinity();
  int min_pivot_col_ = -1;
  std::size_t s_bytes_ = 0;
};

inline FioOperator build_fio(double mu, double alpha, double beta, int n_cols,
                             BuildOptions opts = {}) {
  return FioOperator(mu, alpha, beta, n_cols, opts);
}

/// Copy-on-grow: pass by value, move when the original is no longer needed.
inline FioOperator grow(FioOperator op, int n_cols) {
  op.ensure_columns(n_cols);
  return op;
}

/// Dense n x n truncation as CSV (row-major, shortest round-trip numbers)
/// with a parameter header.
void write_operator_csv(const FioOperator& op, int n, std::ostream& out);

/// Column-compressed JSON {"mu","alpha","beta","N","columns":[[...],...]}.
void write_operator_json(const FioOperator& op, int n, std::ostream& out);

}  // namespace fracspec::opcore
