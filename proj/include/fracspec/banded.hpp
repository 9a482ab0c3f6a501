#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fracspec/types.hpp"

namespace fracspec::linalg {

/// Dense-in-band storage: A_ij is kept for -lower <= j - i <= upper.
template <class T>
class BandedMatrix {
 public:
  BandedMatrix(int rows, int cols, int lower, int upper)
      : rows_(rows), cols_(cols), bl_(lower), bu_(upper),
        a_(static_cast<size_t>(rows) * (lower + upper + 1), T(0)) {
    if (rows < 0 || cols < 0 || lower < 0 || upper < 0)
      throw std::invalid_argument("BandedMatrix: negative dimension");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int lower() const { return bl_; }
  int upper() const { return bu_; }

  bool in_band(int i, int j) const {
    return i >= 0 && i < rows_ && j >= 0 && j < cols_ && j - i >= -bl_ && j - i <= bu_;
  }

  T& at(int i, int j) {
    if (!in_band(i, j)) throw std::out_of_range("BandedMatrix::at outside band");
    return a_[static_cast<size_t>(i) * (bl_ + bu_ + 1) + (j - i + bl_)];
  }

  T get(int i, int j) const {
    if (!in_band(i, j)) return T(0);
    return a_[static_cast<size_t>(i) * (bl_ + bu_ + 1) + (j - i + bl_)];
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != cols_)
      throw std::invalid_argument("BandedMatrix::apply size mismatch");
    std::vector<T> y(static_cast<size_t>(rows_), T(0));
    for (int i = 0; i < rows_; ++i) {
      const int j0 = std::max(0, i - bl_), j1 = std::min(cols_ - 1, i + bu_);
      T acc(0);
      for (int j = j0; j <= j1; ++j) acc += get(i, j) * x[static_cast<size_t>(j)];
      y[static_cast<size_t>(i)] = acc;
    }
    return y;
  }

  std::vector<std::vector<T>> to_dense() const {
    std::vector<std::vector<T>> d(static_cast<size_t>(rows_),
                                  std::vector<T>(static_cast<size_t>(cols_), T(0)));
    for (int i = 0; i < rows_; ++i)
      for (int j = std::max(0, i - bl_); j <= std::min(cols_ - 1, i + bu_); ++j)
        d[static_cast<size_t>(i)][static_cast<size_t>(j)] = get(i, j);
    return d;
  }

 private:
  int rows_, cols_, bl_, bu_;
  std::vector<T> a_;
};

namespace detail {

inline double abs2(double v) { return v * v; }
inline double abs2(const Complex& v) { return std::norm(v); }
inline double conj_or_id(double v) { return v; }
inline Complex conj_or_id(const Complex& v) { return std::conj(v); }

/// Givens pair (c real, s scalar) such that [c, s; -conj(s), c] applied to
/// (a, b) zeroes the second component.
template <class T>
void make_givens(const T& a, const T& b, double& c, T& s) {
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) {
    c = 1.0;
    s = T(0);
    return;
  }
  const double r = std::hypot(na, nb);
  if (na == 0.0) {
    c = 0.0;
    s = conj_or_id(b) * (1.0 / nb);
    return;
  }
  c = na / r;
  s = (a / na) * conj_or_id(b) * (1.0 / r);
}

}  // namespace detail

/// Solves the square system consisting of a few dense rows stacked on top of
/// a banded block, by Givens QR. Fill-in from the dense rows is carried
/// symbolically (each working row is an explicit window plus a combination
/// of the dense-row tails), which keeps the cost linear in the dimension.
///
/// Throws SingularSystemError when a pivot falls below 1e-300 in modulus; if
/// min_pivot is non-null the smallest pivot modulus seen is stored there.
template <class T>
std::vector<T> solve_almost_banded(const std::vector<std::vector<T>>& top_rows,
                                   const BandedMatrix<T>& band,
                                   const std::vector<T>& rhs,
                                   double* min_pivot = nullptr) {
  const int d = static_cast<int>(top_rows.size());
  const int n = band.cols();
  if (band.rows() + d != n)
    throw std::invalid_argument("solve_almost_banded: system not square");
  if (static_cast<int>(rhs.size()) != n)
    throw std::invalid_argument("solve_almost_banded: rhs size mismatch");
  for (const auto& r : top_rows)
    if (static_cast<int>(r.size()) != n)
      throw std::invalid_argument("solve_almost_banded: dense row size mismatch");

  const int bl = band.lower(), bu = band.upper();
  const int w = std::min(bl + bu + 1, n);  // explicit window width

  struct WorkRow {
    std::vector<T> win;   // columns [start, start + w - 1]
    std::vector<T> tail;  // coefficients against the dense-row tails
    T rhs;
  };

  auto tail_value = [&](const std::vector<T>& tail, int col) {
    T v(0);
    if (col >= n) return v;
    for (int r = 0; r < d; ++r)
      if (tail[static_cast<size_t>(r)] != T(0))
        v += tail[static_cast<size_t>(r)] * top_rows[static_cast<size_t>(r)][static_cast<size_t>(col)];
    return v;
  };

  std::vector<WorkRow> active;
  std::vector<WorkRow> stored(static_cast<size_t>(n));
  double piv_min = std::numeric_limits<double>::infinity();

  for (int j = 0; j < n; ++j) {
    // Rows entering at column j: the dense rows at j = 0, and the band row
    // whose leftmost column is j.
    if (j == 0) {
      for (int r = 0; r < d; ++r) {
        WorkRow row;
        row.win.assign(static_cast<size_t>(w), T(0));
        for (int c = 0; c < w; ++c) row.win[static_cast<size_t>(c)] = top_rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
        row.tail.assign(static_cast<size_t>(d), T(0));
        row.tail[static_cast<size_t>(r)] = T(1);
        row.rhs = rhs[static_cast<size_t>(r)];
        active.push_back(std::move(row));
      }
    }
    // Band rows whose leftmost column is j: rows 0..bl at j = 0, then one
    // per column.
    const int r_lo = (j == 0) ? 0 : j + bl;
    const int r_hi = (j == 0) ? std::min(bl, band.rows() - 1) : std::min(j + bl, band.rows() - 1);
    for (int r = r_lo; r <= r_hi; ++r) {
      WorkRow row;
      row.win.assign(static_cast<size_t>(w), T(0));
      for (int c = 0; c < w; ++c)
        if (j + c < n) row.win[static_cast<size_t>(c)] = band.get(r, j + c);
      row.tail.assign(static_cast<size_t>(d), T(0));
      row.rhs = rhs[static_cast<size_t>(r + d)];
      active.push_back(std::move(row));
    }

    if (active.empty()) throw SingularSystemError("solve_almost_banded: structurally singular");

    // Merge every active row into active[0] at column j.
    for (size_t k = 1; k < active.size(); ++k) {
      WorkRow& p = active[0];
      WorkRow& q = active[k];
      if (q.win[0] == T(0)) continue;
      double c;
      T s;
      detail::make_givens(p.win[0], q.win[0], c, s);
      for (int m = 0; m < w; ++m) {
        const T pv = p.win[static_cast<size_t>(m)], qv = q.win[static_cast<size_t>(m)];
        p.win[static_cast<size_t>(m)] = c * pv + s * qv;
        q.win[static_cast<size_t>(m)] = -detail::conj_or_id(s) * pv + c * qv;
      }
      q.win[0] = T(0);
      for (int r = 0; r < d; ++r) {
        const T pv = p.tail[static_cast<size_t>(r)], qv = q.tail[static_cast<size_t>(r)];
        p.tail[static_cast<size_t>(r)] = c * pv + s * qv;
        q.tail[static_cast<size_t>(r)] = -detail::conj_or_id(s) * pv + c * qv;
      }
      const T pv = p.rhs, qv = q.rhs;
      p.rhs = c * pv + s * qv;
      q.rhs = -detail::conj_or_id(s) * pv + c * qv;
    }

    const double piv = std::abs(active[0].win[0]);
    piv_min = std::min(piv_min, piv);
    if (piv < 1e-300) throw SingularSystemError("solve_almost_banded: zero pivot");

    stored[static_cast<size_t>(j)] = std::move(active[0]);
    active.erase(active.begin());

    // Slide remaining windows to start at column j + 1.
    for (auto& row : active) {
      for (int m = 0; m + 1 < w; ++m) row.win[static_cast<size_t>(m)] = row.win[static_cast<size_t>(m + 1)];
      row.win[static_cast<size_t>(w - 1)] = tail_value(row.tail, j + w);
    }
  }

  if (min_pivot) *min_pivot = piv_min;

  // Back substitution with suffix accumulators for the dense tails.
  std::vector<T> x(static_cast<size_t>(n), T(0));
  std::vector<T> suffix(static_cast<size_t>(d), T(0));  // sum over cols >= j + w
  for (int j = n - 1; j >= 0; --j) {
    const WorkRow& row = stored[static_cast<size_t>(j)];
    T acc = row.rhs;
    for (int m = 1; m < w && j + m < n; ++m)
      acc -= row.win[static_cast<size_t>(m)] * x[static_cast<size_t>(j + m)];
    for (int r = 0; r < d; ++r)
      if (row.tail[static_cast<size_t>(r)] != T(0)) acc -= row.tail[static_cast<size_t>(r)] * suffix[static_cast<size_t>(r)];
    x[static_cast<size_t>(j)] = acc / row.win[0];
    if (j > 0 && j - 1 + w < n)
      for (int r = 0; r < d; ++r)
        suffix[static_cast<size_t>(r)] += top_rows[static_cast<size_t>(r)][static_cast<size_t>(j - 1 + w)] * x[static_cast<size_t>(j - 1 + w)];
  }
  return x;
}

}  // namespace fracspec::linalg
