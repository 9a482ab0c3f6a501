#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracspec {

using Complex = std::complex<double>;

/// Thrown when an iterative solve hits its size or sweep cap before the
/// requested tolerance is met. Carries the residual history for diagnostics.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}

  std::vector<double> residual_history;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while recursing operator columns; records the offending column.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, int column)
      : std::runtime_error(what), column(column) {}

  int column;
};

}  // namespace fracspec
