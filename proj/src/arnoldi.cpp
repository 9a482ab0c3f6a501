#include "fracspec/arnoldi.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace fracspec::linalg {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Swaps the diagonal entries i and i+1 of the triangular T by a unitary
/// similarity, accumulating the transform into U.
void swap_schur(MatrixXcd& t, MatrixXcd& u, int i) {
  const Complex a = t(i, i), b = t(i, i + 1), c = t(i + 1, i + 1);
  if (std::abs(c - a) < 1e-300) return;  // equal moduli anyway; keep order
  // Eigenvector of the 2x2 block for eigenvalue c is (b, c - a).
  const Complex v0 = b, v1 = c - a;
  const double nrm = std::sqrt(std::norm(v0) + std::norm(v1));
  const Complex cs = v0 / nrm;
  const Complex sn = v1 / nrm;
  // G = [cs*, sn*; -sn, cs] maps (v0, v1) to (nrm, 0).
  const int n = static_cast<int>(t.rows());
  for (int col = 0; col < n; ++col) {
    const Complex x = t(i, col), y = t(i + 1, col);
    t(i, col) = std::conj(cs) * x + std::conj(sn) * y;
    t(i + 1, col) = -sn * x + cs * y;
  }
  for (int row = 0; row < n; ++row) {
    const Complex x = t(row, i), y = t(row, i + 1);
    t(row, i) = x * cs + y * sn;
    t(row, i + 1) = -x * std::conj(sn) + y * std::conj(cs);
  }
  for (int row = 0; row < static_cast<int>(u.rows()); ++row) {
    const Complex x = u(row, i), y = u(row, i + 1);
    u(row, i) = x * cs + y * sn;
    u(row, i + 1) = -x * std::conj(sn) + y * std::conj(cs);
  }
  t(i + 1, i) = Complex(0, 0);
}

bool order_before(const Complex& p, const Complex& q) {
  const double mp = std::abs(p), mq = std::abs(q);
  if (mp != mq) return mp > mq;
  return p.imag() > q.imag();
}

/// Sorts the Schur form by descending eigenvalue modulus (bubble with
/// adjacent swaps; the projected matrices are small).
void sort_schur(MatrixXcd& t, MatrixXcd& u) {
  const int n = static_cast<int>(t.rows());
  for (int pass = 0; pass < n; ++pass) {
    bool moved = false;
    for (int i = 0; i + 1 < n; ++i) {
      if (order_before(t(i + 1, i + 1), t(i, i))) {
        swap_schur(t, u, i);
        moved = true;
      }
    }
    if (!moved) break;
  }
}

/// Unit eigenvector of the triangular T for the diagonal entry at position i.
VectorXcd triangular_eigvec(const MatrixXcd& t, int i) {
  const int n = static_cast<int>(t.rows());
  VectorXcd z = VectorXcd::Zero(n);
  z(i) = Complex(1, 0);
  for (int r = i - 1; r >= 0; --r) {
    Complex acc(0, 0);
    for (int c = r + 1; c <= i; ++c) acc += t(r, c) * z(c);
    Complex denom = t(r, r) - t(i, i);
    if (std::abs(denom) < 1e-150)
      denom = Complex(denom.real() + 1e-150, denom.imag());
    z(r) = -acc / denom;
  }
  z.normalize();
  return z;
}

}  // namespace

std::vector<EigenPair> largest_eigenpairs(
    int dim, const std::function<void(const Complex*, Complex*)>& matvec, int m,
    double tol, ArnoldiOptions opts) {
  if (m < 1 || m > dim) throw std::invalid_argument("largest_eigenpairs: bad count");
  int m_max = opts.max_subspace > 0 ? opts.max_subspace : std::max(4 * m + 24, 48);
  m_max = std::min(m_max, dim);
  if (m_max <= m + 1) m_max = std::min(dim, m + 2);

  MatrixXcd v(dim, m_max + 1);
  MatrixXcd h = MatrixXcd::Zero(m_max + 1, m_max);

  // Fixed start vector for deterministic runs.
  for (int i = 0; i < dim; ++i) v(i, 0) = Complex(1.0, 0.0);
  v.col(0) /= v.col(0).norm();

  int s = 0;  // currently filled basis columns beyond restarts
  std::vector<double> history;
  VectorXcd w(dim), av(dim);

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    // Arnoldi expansion from column s to m_max.
    for (int j = s; j < m_max; ++j) {
      matvec(v.col(j).data(), w.data());
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const Complex hij = v.col(i).dot(w);
          w -= hij * v.col(i);
          h(i, j) += hij;
        }
      }
      const double beta = w.norm();
      h(j + 1, j) = Complex(beta, 0.0);
      if (beta < 1e-14) {
        // Invariant subspace; continue deterministically from a fresh
        // coordinate direction.
        w.setZero();
        w(std::min(j + 1, dim - 1)) = Complex(1.0, 0.0);
        for (int i = 0; i <= j; ++i) w -= v.col(i).dot(w) * v.col(i);
        if (w.norm() < 1e-14) break;
        w /= w.norm();
        v.col(j + 1) = w;
        continue;
      }
      v.col(j + 1) = w / beta;
    }

    const double beta = std::abs(h(m_max, m_max - 1));
    MatrixXcd hm = h.topLeftCorner(m_max, m_max);
    Eigen::ComplexSchur<MatrixXcd> schur(hm, true);
    MatrixXcd t = schur.matrixT();
    MatrixXcd u = schur.matrixU();
    sort_schur(t, u);

    const double scale = std::max(hm.norm(), 1e-300);

    // Residual estimates for the leading Ritz values.
    int want = m;
    std::vector<VectorXcd> zs;
    std::vector<double> rest;
    bool all_ok = true;
    for (int i = 0; i < want; ++i) {
      VectorXcd z = triangular_eigvec(t, i);
      const double r = beta * std::abs(u.row(m_max - 1).dot(z.conjugate()));
      zs.push_back(std::move(z));
      rest.push_back(r);
      if (r > tol * scale) all_ok = false;
    }
    history.push_back(*std::max_element(rest.begin(), rest.end()));

    if (all_ok) {
      // Keep a conjugate partner that would otherwise be cut off.
      if (want < m_max) {
        const Complex lam = t(want - 1, want - 1), next = t(want, want);
        if (std::abs(std::abs(lam) - std::abs(next)) <
                1e-8 * std::max(std::abs(lam), 1.0) &&
            std::abs(std::conj(lam) - next) < 1e-6 * std::max(std::abs(lam), 1.0)) {
          zs.push_back(triangular_eigvec(t, want));
          rest.push_back(0.0);
          ++want;
        }
      }
      std::vector<EigenPair> out;
      for (int i = 0; i < want; ++i) {
        EigenPair p;
        p.value = t(i, i);
        VectorXcd vec = v.leftCols(m_max) * (u * zs[static_cast<size_t>(i)]);
        vec.normalize();
        matvec(vec.data(), av.data());
        p.residual = (av - p.value * vec).norm();
        p.vector.assign(vec.data(), vec.data() + dim);
        out.push_back(std::move(p));
      }
      return out;
    }

    // Thick restart: keep the leading Schur vectors plus the residual
    // direction, then resume expansion.
    const int keep = std::min(m_max - 2, std::max(2 * m, m + 8));
    MatrixXcd kept = v.leftCols(m_max) * u.leftCols(keep);
    v.leftCols(keep) = kept;
    v.col(keep) = v.col(m_max);
    MatrixXcd hnew = MatrixXcd::Zero(m_max + 1, m_max);
    hnew.topLeftCorner(keep, keep) = t.topLeftCorner(keep, keep);
    for (int c = 0; c < keep; ++c) hnew(keep, c) = beta * u(m_max - 1, c);
    h = hnew;
    s = keep;
  }

  throw NonConvergenceError("largest_eigenpairs: restart budget exhausted", history);
}

}  // namespace fracspec::linalg
