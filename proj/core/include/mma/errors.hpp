#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mma {

/// Base class for numerical failures (rank deficiency, solver non-convergence).
/// The CLI maps these to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficientError : public NumericalError {
 public:
  RankDeficientError(std::size_t column, double pivot, double largest);

  /// Zero-based index of the first column that lies (numerically) in the span
  /// of the columns before it.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what + " (KKT residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Malformed configuration, CSV input or command line. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mma
