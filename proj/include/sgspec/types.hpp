#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sgspec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy. The CLI maps these onto exit codes:
// ConfigError -> 2, NumericalError -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, invalid parameters, violated preconditions.
struct ConfigError : Error {
  using Error::Error;
};

// Shape mismatch between operands.
struct DimensionError : ConfigError {
  using ConfigError::ConfigError;
};

// Unreadable input or unwritable output.
struct IoError : ConfigError {
  using ConfigError::ConfigError;
};

// Solver non-convergence, overflow, divergent integrals, ill-conditioning.
struct NumericalError : Error {
  using Error::Error;
};

struct OverflowError : NumericalError {
  using NumericalError::NumericalError;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!is_finite(Complex(m(i, j)))) return false;
  return true;
}

// Max-abs-row-sum norm; the default operator norm throughout.
template <typename Derived>
double norm_inf(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  if (m.cols() == 1) return m.cwiseAbs().maxCoeff();
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
double norm_one(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw DimensionError(std::string(what) + ": matrix must be square and non-empty, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

// Lexicographic (re, im) order used for every reported set.
inline bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace sgspec
