#pragma once

#include <vector>

#include "fracspec/types.hpp"

// Desk-scale dense eigenvalue reference (n <= 120): Householder reduction to
// Hessenberg form followed by unshifted QR iteration, eigenvalues read off
// the quasi-triangular limit. Deliberately naive and independent of the
// Krylov path it checks.
namespace oracle {

std::vector<fracspec::Complex> dense_eigenvalues(std::vector<std::vector<double>> a,
                                                 int max_sweeps = 40000);

}  // namespace oracle
