#pragma once

#include <functional>
#include <vector>

#include "fracspec/types.hpp"

namespace fracspec::linalg {

struct EigenPair {
  Complex value;
  std::vector<Complex> vector;  // unit 2-norm
  double residual;              // ||A v - theta v|| on return
};

struct ArnoldiOptions {
  int max_subspace = 0;  // 0: chosen from the requested count
  int max_restarts = 60;
};

/// Largest-modulus eigenpairs by Arnoldi iteration with modified
/// Gram-Schmidt (with reorthogonalization) and thick restarts through the
/// Schur form of the projected matrix. The start vector is fixed, so runs
/// are deterministic. Conjugate pairs are returned adjacently (positive
/// imaginary part first); when the requested count would split a pair, the
/// partner is included as an extra pair.
///
/// Throws NonConvergenceError when the restart budget is exhausted.
std::vector<EigenPair> largest_eigenpairs(
    int dim, const std::function<void(const Complex*, Complex*)>& matvec, int m,
    double tol, ArnoldiOptions opts = {});

}  // namespace fracspec::linalg
