#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "fracspec/banded.hpp"

namespace fracspec::linalg {

/// Column-streamed view of a lower-banded (m-Hessenberg) system: column j
/// has nonzero entries only in rows 0..j+offset. Rows may extend arbitrarily
/// far to the right; columns are finite, which is what the adaptive QR
/// sweep factorizes.
template <class T>
struct StreamedLowerBanded {
  int offset = 0;
  /// Fill `out` (resized to j + offset + 1) with column j.
  std::function<void(int j, std::vector<T>& out)> column;
  std::function<T(int i)> rhs;
  int rhs_support = 0;  // rhs rows >= rhs_support are zero
  /// Called before a block of columns is consumed; grows backing operators.
  std::function<void(int max_col)> ensure;
};

struct AdaptiveQrOptions {
  double tol = 1e-13;
  int n_max = 8192;
  int n_min = 0;       // do not stop before this many columns
  int force_n = -1;    // when >= 0: factor exactly this many columns, no stop test
  int block = 64;      // growth/checkpoint granularity
  int aux = 0;         // leading unknowns exempt from plateau/trim logic
};

template <class T>
struct AdaptiveQrResult {
  std::vector<T> solution;  // aux unknowns first, then trimmed coefficients
  int n_processed = 0;      // columns factorized
  int n_used = 0;           // coefficient count after trailing trim (excludes aux)
  double residual = 0.0;
  std::vector<std::pair<int, double>> residual_history;
  bool converged = false;
};

namespace detail {

/// Incremental Givens QR of a streamed lower-banded matrix. Only the
/// rotation coefficients and the rotated right-hand side are retained, so
/// memory stays O(columns * offset); R columns are regenerated on demand
/// during back substitution.
template <class T>
class StreamingQr {
 public:
  StreamingQr(const StreamedLowerBanded<T>& sys) : sys_(sys), k_(sys.offset) {
    double total = 0.0;
    for (int i = 0; i < sys_.rhs_support; ++i) total += abs2(sys_.rhs(i));
    rhs_total_sq_ = total;
    rhs_norm_ = std::sqrt(total);
  }

  int processed() const { return n_; }
  double rhs_norm() const { return rhs_norm_; }

  void factor_up_to(int n_cols) {
    col_.reserve(static_cast<size_t>(n_cols + k_ + 1));
    while (n_ < n_cols) {
      const int j = n_;
      fetch_column(j, col_);
      apply_rotations(col_, j, j + k_);
      materialize_rhs(j + k_);
      for (int i = j + 1; i <= j + k_; ++i) {
        double c;
        T s;
        make_givens(col_[static_cast<size_t>(j)], col_[static_cast<size_t>(i)], c, s);
        rot_c_.push_back(c);
        rot_s_.push_back(s);
        const T a = col_[static_cast<size_t>(j)], b = col_[static_cast<size_t>(i)];
        col_[static_cast<size_t>(j)] = c * a + s * b;
        col_[static_cast<size_t>(i)] = T(0);
        const T ra = rhs_rot_[static_cast<size_t>(j)], rb = rhs_rot_[static_cast<size_t>(i)];
        rhs_rot_[static_cast<size_t>(j)] = c * ra + s * rb;
        rhs_rot_[static_cast<size_t>(i)] = -conj_or_id(s) * ra + c * rb;
      }
      ++n_;
    }
  }

  /// Residual of the current truncation: the norm of the rotated right-hand
  /// side below row n_ plus whatever original tail has not been touched yet.
  double residual() {
    materialize_rhs(n_ + k_);
    double acc = untouched_sq();
    for (int i = n_; i <= n_ + k_ && i < static_cast<int>(rhs_rot_.size()); ++i)
      acc += abs2(rhs_rot_[static_cast<size_t>(i)]);
    return std::sqrt(std::max(acc, 0.0));
  }

  /// Back substitution over the leading m columns. Columns of R are rebuilt
  /// by replaying the stored rotations against freshly streamed columns.
  std::vector<T> solve(int m) {
    std::vector<T> x(static_cast<size_t>(m), T(0));
    std::vector<T> r(rhs_rot_.begin(), rhs_rot_.begin() + m);
    std::vector<T> col;
    for (int j = m - 1; j >= 0; --j) {
      fetch_column(j, col);
      apply_rotations(col, j, j);
      const T diag = col[static_cast<size_t>(j)];
      if (std::abs(diag) < 1e-300)
        throw SingularSystemError("adaptive_qr: zero pivot in back substitution");
      const T xj = r[static_cast<size_t>(j)] / diag;
      x[static_cast<size_t>(j)] = xj;
      for (int i = 0; i < j; ++i) r[static_cast<size_t>(i)] -= xj * col[static_cast<size_t>(i)];
    }
    return x;
  }

 private:
  void fetch_column(int j, std::vector<T>& col) {
    col.assign(static_cast<size_t>(j + k_ + 1), T(0));
    sys_.column(j, col);
    if (static_cast<int>(col.size()) != j + k_ + 1)
      col.resize(static_cast<size_t>(j + k_ + 1), T(0));
  }

  // Replay rotations from columns 0..p_max (chronological order).
  void apply_rotations(std::vector<T>& col, int j_col, int p_max) const {
    const int pm = std::min(p_max, n_ - 1);
    (void)j_col;
    for (int p = 0; p <= pm; ++p) {
      const size_t base = static_cast<size_t>(p) * k_;
      for (int q = 0; q < k_; ++q) {
        const int i = p + 1 + q;
        if (i >= static_cast<int>(col.size())) break;
        const double c = rot_c_[base + static_cast<size_t>(q)];
        const T s = rot_s_[base + static_cast<size_t>(q)];
        const T a = col[static_cast<size_t>(p)], b = col[static_cast<size_t>(i)];
        col[static_cast<size_t>(p)] = c * a + s * b;
        col[static_cast<size_t>(i)] = -conj_or_id(s) * a + c * b;
      }
    }
  }

  void materialize_rhs(int up_to_row) {
    while (static_cast<int>(rhs_rot_.size()) <= up_to_row) {
      const int i = static_cast<int>(rhs_rot_.size());
      const T v = i < sys_.rhs_support ? sys_.rhs(i) : T(0);
      rhs_rot_.push_back(v);
      if (i < sys_.rhs_support) materialized_sq_ += abs2(v);
    }
  }

  double untouched_sq() const { return std::max(rhs_total_sq_ - materialized_sq_, 0.0); }

  const StreamedLowerBanded<T>& sys_;
  int k_;
  int n_ = 0;
  std::vector<double> rot_c_;
  std::vector<T> rot_s_;
  std::vector<T> rhs_rot_;
  std::vector<T> col_;
  double rhs_total_sq_ = 0.0;
  double materialized_sq_ = 0.0;
  double rhs_norm_ = 0.0;
};

}  // namespace detail

/// Adaptive QR for streamed lower-banded systems. Columns are consumed in
/// blocks; iteration stops once the residual (the norm of the rotated
/// right-hand-side tail) falls below tol * ||rhs|| and the trailing solution
/// coefficients have plateaued. Throws NonConvergenceError at n_max.
template <class T>
AdaptiveQrResult<T> adaptive_qr_solve(const StreamedLowerBanded<T>& sys,
                                      const AdaptiveQrOptions& opts) {
  detail::StreamingQr<T> qr(sys);
  AdaptiveQrResult<T> res;
  const double scale = std::max(qr.rhs_norm(), 1e-300);

  auto finalize = [&](int m, bool converged) {
    res.solution = qr.solve(m);
    res.n_processed = m;
    res.converged = converged;
    res.residual = qr.residual();
    // Trim trailing coefficients that are below tolerance relative to the
    // largest one; auxiliary unknowns are kept verbatim.
    double cmax = 0.0;
    for (size_t i = static_cast<size_t>(opts.aux); i < res.solution.size(); ++i)
      cmax = std::max(cmax, std::abs(res.solution[i]));
    int keep = static_cast<int>(res.solution.size()) - opts.aux;
    const double thresh = opts.tol * cmax;
    while (keep > 0 &&
           std::abs(res.solution[static_cast<size_t>(opts.aux + keep - 1)]) < thresh)
      --keep;
    res.n_used = keep;
    res.solution.resize(static_cast<size_t>(opts.aux + keep));
  };

  if (opts.force_n >= 0) {
    if (sys.ensure) sys.ensure(opts.force_n + sys.offset);
    qr.factor_up_to(opts.force_n);
    res.residual_history.emplace_back(opts.force_n, qr.residual());
    finalize(opts.force_n, true);
    return res;
  }

  int next_plateau_check = 0;
  for (int target = opts.block; ; target += opts.block) {
    const int cols = std::min(target, opts.n_max);
    if (sys.ensure) sys.ensure(cols + sys.offset);
    qr.factor_up_to(cols);
    const double resid = qr.residual();
    res.residual_history.emplace_back(cols, resid);
    const bool tol_ok = resid <= opts.tol * scale && cols >= opts.n_min &&
                        cols >= sys.rhs_support;
    if (tol_ok && cols >= next_plateau_check) {
      finalize(cols, true);
      const int ncoef = res.n_used;
      const int window = std::max(8, cols / 16);
      // Plateau: the trim must have removed at least a window of trailing
      // coefficients, i.e. the solution is resolved well inside the
      // truncation (or is exactly zero).
      if (ncoef == 0 || ncoef + window <= cols) {
        res.residual = resid;
        return res;
      }
      next_plateau_check = cols * 2;
    }
    if (cols >= opts.n_max) {
      std::vector<double> hist;
      hist.reserve(res.residual_history.size());
      for (auto& [n, r] : res.residual_history) hist.push_back(r);
      throw NonConvergenceError("adaptive_qr: n_max reached without convergence", hist);
    }
  }
}

}  // namespace fracspec::linalg
