#pragma once

// Truncated model of the rotation semigroup T(t)f(z) = f(e^{it} z) on
// bounded holomorphic functions of the unit disc. Functions are stored by
// their Taylor coefficients up to degree N; the semigroup acts diagonally
// on monomials, so the truncation is exact on the retained modes.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sgspec/catalog.hpp"
#include "sgspec/linalg.hpp"
#include "sgspec/periodic.hpp"
#include "sgspec/quadrature.hpp"
#include "sgspec/spectra.hpp"

namespace sgspec::hardy {

inline const char* kModelLabel = "truncated model";

struct DiscFunction {
  int degree = 0;
  ComplexVector coeffs;  // degree + 1 Taylor coefficients at 0

  static DiscFunction monomial(int degree, int n) {
    if (n < 0 || n > degree) throw ConfigError("monomial index out of range");
    DiscFunction f{degree, ComplexVector::Zero(degree + 1)};
    f.coeffs(n) = 1.0;
    return f;
  }

  static DiscFunction from_coeffs(ComplexVector c) {
    if (c.size() == 0) throw ConfigError("DiscFunction: need at least one coefficient");
    if (!all_finite(c)) throw ConfigError("DiscFunction: coefficients must be finite");
    return {static_cast<int>(c.size()) - 1, std::move(c)};
  }

  // Horner evaluation; meaningful for |z| < 1.
  Complex operator()(Complex z) const {
    Complex acc(0.0);
    for (Eigen::Index i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs(i);
    return acc;
  }
};

struct WeightSample {
  Complex z;
  double value = 0.0;
};

/// Samples of a weight nu in C_0(D). decays records that the values
/// tend to 0 toward the boundary.
struct WeightFunction {
  std::vector<WeightSample> samples;
  bool decays = true;

  void validate() const {
    for (const auto& s : samples) {
      if (!(std::abs(s.z) < 1.0)) throw ConfigError("weight sample outside the open unit disc");
      if (!(s.value >= 0.0) || !std::isfinite(s.value)) throw ConfigError("weight values must be >= 0");
    }
  }

  /// Polar grid r in radii x n_theta equispaced angles, value = nu(z).
  static WeightFunction polar_grid(const std::vector<double>& radii, int n_theta,
                                   const std::function<double(Complex)>& nu, bool decays = true) {
    if (n_theta < 1) throw ConfigError("polar_grid: n_theta must be >= 1");
    WeightFunction w;
    w.decays = decays;
    for (double r : radii)
      for (int k = 0; k < n_theta; ++k) {
        const Complex z = std::polar(r, kTwoPi * k / n_theta);
        w.samples.push_back({z, nu(z)});
      }
    w.validate();
    return w;
  }
};

inline SemigroupEvaluator disc_rotation_semigroup(int degree) {
  if (degree < 0) throw ConfigError("disc_rotation_semigroup: degree must be >= 0");
  if (degree == 0) {
    // constants only: the trivial semigroup
    ComplexMatrix zero = ComplexMatrix::Zero(1, 1);
    return SemigroupEvaluator::from_closed_form(GeneratorSpec{catalog::Entry{catalog::DiscRotation{0}}},
                                                zero, [](double) { return identity(1); });
  }
  return catalog_build(catalog::DiscRotation{degree}).evaluator;
}

inline DiscFunction apply(const SemigroupEvaluator& sg, double t, const DiscFunction& f) {
  return {f.degree, sg.evaluate(t, f.coeffs)};
}

struct HardySpectrumReport {
  int degree = 0;
  std::vector<Complex> eigenvalues;
  std::vector<int> multiplicities;
  double spectrum_distance = 0.0;       // d_H(sigma_p, {0, i, ..., N i})
  bool all_one_dimensional = true;
  double max_eigenvector_angle = 0.0;   // against the coordinate vector e_n
  double tol = 0.0;
  bool pass = false;
  std::string label = kModelLabel;
};

/// sigma_p(A) = {0, i, ..., N i} with ker(in - A) = span{z^n}.
inline HardySpectrumReport verify_hardy_spectrum_of(const ComplexMatrix& a, double tol) {
  require_square(a, "verify_hardy_spectrum");
  HardySpectrumReport r;
  r.degree = static_cast<int>(a.rows()) - 1;
  r.tol = tol;
  std::vector<Complex> expected;
  for (int n = 0; n <= r.degree; ++n) expected.push_back(Complex(0.0, n));

  const auto pts = point_spectrum(a, tol);
  for (const auto& ep : pts) {
    r.eigenvalues.push_back(ep.lambda);
    r.multiplicities.push_back(ep.algebraic_multiplicity);
    if (ep.geometric_multiplicity() != 1 || ep.algebraic_multiplicity != 1) r.all_one_dimensional = false;
    const long n = std::lround(ep.lambda.imag());
    if (n < 0 || n > r.degree) {
      r.max_eigenvector_angle = kPi / 2;
      continue;
    }
    ComplexMatrix basis(a.rows(), 1);
    basis.setZero();
    basis(n, 0) = 1.0;
    r.max_eigenvector_angle =
        std::max(r.max_eigenvector_angle, principal_angle(orthonormalize(null_space(shifted(a, ep.lambda), tol * spectral_scale(a))), basis));
  }
  r.spectrum_distance = hausdorff(r.eigenvalues, expected);
  r.pass = r.spectrum_distance <= tol && r.all_one_dimensional && r.max_eigenvector_angle <= tol;
  return r;
}

inline HardySpectrumReport verify_hardy_spectrum(int degree, double tol) {
  if (degree < 1) throw ConfigError("verify_hardy_spectrum: N must be >= 1");
  return verify_hardy_spectrum_of(generator_of(disc_rotation_semigroup(degree)), tol);
}

struct HardyProjectionReport {
  int n = 0;
  DiscFunction projected;
  DiscFunction expected;  // coeffs[n] * z^n
  double error = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// P_n g = (1/2 pi) int_0^{2 pi} e^{-ins} T(s) g ds, compared with
/// g^{(n)}(0)/n! z^n = coeffs[n] z^n.
inline HardyProjectionReport hardy_projection_check(int degree, int n, const DiscFunction& g,
                                                    const QuadratureConfig& cfg, double tol) {
  if (n < 0 || n > degree) throw ConfigError("hardy_projection_check: n must lie in [0, N]");
  if (g.degree != degree) throw DimensionError("hardy_projection_check: g has the wrong degree");
  const auto sg = disc_rotation_semigroup(degree);
  HardyProjectionReport r;
  r.n = n;
  r.tol = tol;
  const ComplexMatrix p = degree == 0 ? identity(1) : spectral_projection(sg, kTwoPi, n, cfg);
  r.projected = {degree, p * g.coeffs};
  r.expected = DiscFunction::monomial(degree, n);
  r.expected.coeffs *= g.coeffs(n);
  r.error = norm_inf(r.projected.coeffs - r.expected.coeffs);
  r.pass = r.error <= tol;
  return r;
}

struct SeminormResult {
  double value = 0.0;
  Complex argmax;
  std::size_t samples = 0;  // the value is a lower bound for the sup over D
};

/// max over the weight's samples of |f(z)| nu(z).
inline SeminormResult weighted_seminorm(const DiscFunction& f, const WeightFunction& nu) {
  if (nu.samples.empty()) throw ConfigError("weighted_seminorm: empty sample set");
  nu.validate();
  SeminormResult r;
  r.samples = nu.samples.size();
  r.argmax = nu.samples.front().z;
  for (const auto& s : nu.samples) {
    const double v = std::abs(f(s.z)) * s.value;
    if (v > r.value) {
      r.value = v;
      r.argmax = s.z;
    }
  }
  return r;
}

}  // namespace sgspec::hardy
