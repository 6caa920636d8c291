#pragma once

// Independent eigenvalue oracle for small matrices: characteristic
// polynomial by cofactor expansion, roots by simultaneous (Weierstrass /
// Durand-Kerner) iteration with a Newton polish. Shares no code with the
// Schur-based solver used elsewhere.

#include <cmath>
#include <string>
#include <limits>
#include <vector>

#include "sgspec/types.hpp"

namespace sgspec {

// Coefficients in increasing degree: p(z) = c[0] + c[1] z + ...
using Polynomial = std::vector<Complex>;

namespace detail {

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.size() + b.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline void poly_add_scaled(Polynomial& acc, const Polynomial& p, double sign) {
  if (acc.size() < p.size()) acc.resize(p.size(), Complex(0.0));
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += sign * p[i];
}

// det of a matrix of polynomial entries, Laplace expansion along row 0.
inline Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Polynomial acc{Complex(0.0)};
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<Polynomial>> minor;
    minor.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      row.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    poly_add_scaled(acc, poly_mul(m[0][col], poly_det(minor)), (col % 2 == 0) ? 1.0 : -1.0);
  }
  return acc;
}

inline Complex poly_eval(const Polynomial& p, Complex z) {
  Complex acc(0.0);
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
  return acc;
}

inline Complex poly_deriv_eval(const Polynomial& p, Complex z) {
  Complex acc(0.0);
  for (std::size_t i = p.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * p[i];
  return acc;
}

}  // namespace detail

/// det(zI - A) by cofactor expansion. Monic of degree dim.
inline Polynomial characteristic_polynomial(const ComplexMatrix& a) {
  require_square(a, "characteristic_polynomial");
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex aij = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      m[i][j] = (i == j) ? Polynomial{-aij, Complex(1.0)} : Polynomial{-aij};
    }
  Polynomial p = detail::poly_det(m);
  p.resize(n + 1, Complex(0.0));
  return p;
}

/// All roots of a polynomial by simultaneous iteration. Throws
/// NumericalError after max_iter sweeps without convergence.
inline std::vector<Complex> polynomial_roots(Polynomial p, int max_iter = 5000) {
  while (p.size() > 1 && p.back() == Complex(0.0)) p.pop_back();
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  const Complex lead = p.back();
  for (auto& c : p) c /= lead;

  // Cauchy bound for the starting circle
  double bound = 0.0;
  for (std::size_t i = 0; i < deg; ++i) bound = std::max(bound, std::abs(p[i]));
  const double radius = 1.0 + bound;

  std::vector<Complex> z(deg);
  for (std::size_t k = 0; k < deg; ++k)
    z[k] = std::polar(radius * 0.9, kTwoPi * static_cast<double>(k) / static_cast<double>(deg) + 0.4);

  bool converged = false;
  double prev_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter && !converged; ++it) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      Complex denom(1.0);
      for (std::size_t j = 0; j < deg; ++j)
        if (j != k) denom *= (z[k] - z[j]);
      const Complex val = detail::poly_eval(p, z[k]);
      if (val == Complex(0.0)) continue;
      if (denom == Complex(0.0)) denom = Complex(1e-300);
      const Complex step = val / denom;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    // stop at the rounding floor: tiny steps, or small ones that stopped shrinking
    converged = max_step <= 1e-15 || (max_step <= 1e-9 && max_step >= 0.5 * prev_step);
    prev_step = max_step;
  }
  if (!converged) throw NumericalError("polynomial_roots: simultaneous iteration did not converge");

  // Newton polish, kept only when it reduces |p|
  for (auto& r : z) {
    for (int k = 0; k < 3; ++k) {
      const Complex d = detail::poly_deriv_eval(p, r);
      if (d == Complex(0.0)) break;
      const Complex cand = r - detail::poly_eval(p, r) / d;
      if (std::abs(detail::poly_eval(p, cand)) < std::abs(detail::poly_eval(p, r))) r = cand;
      else break;
    }
  }
  return z;
}

/// Eigenvalues of a matrix with dim <= 6, independent of the main eigensolver.
inline std::vector<Complex> brute_force_eigen_oracle(const ComplexMatrix& a) {
  require_square(a, "brute_force_eigen_oracle");
  if (a.rows() > 6) throw ConfigError("brute_force_eigen_oracle: dim must be <= 6");
  return polynomial_roots(characteristic_polynomial(a));
}

}  // namespace sgspec
