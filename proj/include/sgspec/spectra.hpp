#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sgspec/linalg.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

struct Eigenpair {
  Complex lambda;
  int algebraic_multiplicity = 0;
  std::vector<ComplexVector> eigenvectors;  // unit inf-norm, spanning ker(lambda - A)

  int geometric_multiplicity() const { return static_cast<int>(eigenvectors.size()); }
};

/// Every spectrum variant of a matrix, each sorted by (re, im).
///
/// In finite dimension point, residual, approximate and algebraic spectra
/// coincide and the topological spectrum is empty; they are nevertheless
/// computed by separate criteria so the collapse can be checked rather than
/// assumed.
struct SpectrumReport {
  std::vector<Eigenpair> point;
  std::vector<Complex> residual;
  std::vector<Complex> approximate;
  std::vector<Complex> algebraic;
  std::vector<Complex> topological;
  std::vector<Complex> spectrum;  // sigma(A) = C \ rho(A)
  double tol = 0.0;

  std::vector<Complex> point_values() const {
    std::vector<Complex> v;
    v.reserve(point.size());
    for (const auto& p : point) v.push_back(p.lambda);
    return v;
  }
};

// Scale against which every spectral tolerance is measured.
inline double spectral_scale(const ComplexMatrix& a) { return std::max(1.0, norm_inf(a)); }

// sigma(A) as clustered eigenvalue centers, each with algebraic multiplicity.
inline std::vector<Cluster> spectrum_clusters(const ComplexMatrix& a, double tol) {
  return cluster_values(eigenvalues(a), tol * spectral_scale(a));
}

inline ComplexMatrix shifted(const ComplexMatrix& a, Complex lambda) {
  return lambda * identity(a.rows()) - a;
}

// Basis of ker(lambda - A), each vector normalized to unit inf-norm.
inline std::vector<ComplexVector> eigenvectors_at(const ComplexMatrix& a, Complex lambda, double tol) {
  const ComplexMatrix ns = null_space(shifted(a, lambda), tol * spectral_scale(a));
  std::vector<ComplexVector> out;
  for (Eigen::Index j = 0; j < ns.cols(); ++j) out.push_back(normalize_inf(ns.col(j)));
  return out;
}

/// Distinct eigenvalues (merged within tol*max(1,||A||)) with summed
/// multiplicities and eigenspace bases.
inline std::vector<Eigenpair> point_spectrum(const ComplexMatrix& a, double tol) {
  require_square(a, "point_spectrum");
  std::vector<Eigenpair> out;
  for (const Cluster& c : spectrum_clusters(a, tol)) {
    Eigenpair ep{c.center, c.count, eigenvectors_at(a, c.center, tol)};
    if (ep.eigenvectors.empty())
      throw NumericalError("point_spectrum: no kernel found at computed eigenvalue (" +
                           std::to_string(c.center.real()) + ", " + std::to_string(c.center.imag()) +
                           "); tolerance too tight for this matrix");
    out.push_back(std::move(ep));
  }
  return out;
}

inline std::vector<Complex> point_spectrum_values(const ComplexMatrix& a, double tol) {
  std::vector<Complex> v;
  for (const Cluster& c : spectrum_clusters(a, tol)) v.push_back(c.center);
  return v;
}

/// lambda with ran(lambda - A) not dense, i.e. rank(lambda - A) < dim.
/// Candidates are the computed eigenvalue clusters; each is kept only if the
/// smallest singular value of lambda - A is below the rank threshold.
inline std::vector<Complex> residual_spectrum(const ComplexMatrix& a, double tol) {
  require_square(a, "residual_spectrum");
  const double thr = tol * spectral_scale(a);
  std::vector<Complex> out;
  for (const Cluster& c : spectrum_clusters(a, tol))
    if (numerical_rank(shifted(a, c.center), thr) < a.rows()) out.push_back(c.center);
  return out;
}

/// Same set via duality: point spectrum of the (non-conjugated) transpose.
inline std::vector<Complex> residual_spectrum_dual(const ComplexMatrix& a, double tol) {
  return point_spectrum_values(a.transpose(), tol);
}

/// {lambda : sigma_min(lambda - A) <= tol*max(1,||A||)} evaluated at candidate eigenvalues.
inline std::vector<Complex> approximate_spectrum(const ComplexMatrix& a, double tol) {
  require_square(a, "approximate_spectrum");
  const double thr = tol * spectral_scale(a);
  std::vector<Complex> out;
  for (const Cluster& c : spectrum_clusters(a, tol))
    if (smallest_singular_value(shifted(a, c.center)) <= thr) out.push_back(c.center);
  return out;
}

/// lambda with lambda - A not bijective, decided by full-pivot LU rank.
inline std::vector<Complex> algebraic_spectrum(const ComplexMatrix& a, double tol) {
  require_square(a, "algebraic_spectrum");
  const double thr = tol * spectral_scale(a);
  std::vector<Complex> out;
  for (const Cluster& c : spectrum_clusters(a, tol)) {
    const ComplexMatrix m = shifted(a, c.center);
    const double biggest = m.cwiseAbs().maxCoeff();
    if (biggest <= thr) {
      out.push_back(c.center);
      continue;
    }
    Eigen::FullPivLU<ComplexMatrix> lu(m);
    lu.setThreshold(thr / biggest);
    if (!lu.isInvertible()) out.push_back(c.center);
  }
  return out;
}

inline SpectrumReport spectrum_report(const ComplexMatrix& a, double tol) {
  SpectrumReport r;
  r.tol = tol;
  r.point = point_spectrum(a, tol);
  r.residual = residual_spectrum(a, tol);
  r.approximate = approximate_spectrum(a, tol);
  r.algebraic = algebraic_spectrum(a, tol);
  r.spectrum = point_spectrum_values(a, tol);
  // sigma_t = sigma \ sigma_alg
  const double radius = tol * spectral_scale(a);
  for (Complex z : r.spectrum)
    if (directed_distance({z}, r.algebraic) > radius) r.topological.push_back(z);
  return r;
}

struct DecompositionReport {
  // d_H(sigma_alg, sigma_a U sigma_r)
  double alg_vs_union = 0.0;
  // d_H(sigma, sigma_alg U sigma_t)
  double spectrum_vs_alg_union_t = 0.0;
  // pairwise collapse distances against the point spectrum
  double residual_vs_point = 0.0;
  double approximate_vs_point = 0.0;
  double algebraic_vs_point = 0.0;
  double residual_vs_dual = 0.0;
  bool topological_empty = true;
  double tol = 0.0;
  bool pass = false;
  SpectrumReport spectra;
};

/// Checks sigma_alg = sigma_a U sigma_r, sigma = sigma_alg U sigma_t,
/// sigma_t empty, and the finite-dimensional collapse of all variants.
inline DecompositionReport decomposition_check(const ComplexMatrix& a, double tol) {
  DecompositionReport d;
  d.tol = tol;
  d.spectra = spectrum_report(a, tol);
  const auto& s = d.spectra;
  std::vector<Complex> uni = s.approximate;
  uni.insert(uni.end(), s.residual.begin(), s.residual.end());
  std::vector<Complex> alg_t = s.algebraic;
  alg_t.insert(alg_t.end(), s.topological.begin(), s.topological.end());
  const auto pv = s.point_values();

  d.alg_vs_union = hausdorff(s.algebraic, uni);
  d.spectrum_vs_alg_union_t = hausdorff(s.spectrum, alg_t);
  d.residual_vs_point = hausdorff(s.residual, pv);
  d.approximate_vs_point = hausdorff(s.approximate, pv);
  d.algebraic_vs_point = hausdorff(s.algebraic, pv);
  d.residual_vs_dual = hausdorff(s.residual, residual_spectrum_dual(a, tol));
  d.topological_empty = s.topological.empty();
  d.pass = d.topological_empty && d.alg_vs_union <= tol && d.spectrum_vs_alg_union_t <= tol &&
           d.residual_vs_point <= tol && d.approximate_vs_point <= tol &&
           d.algebraic_vs_point <= tol && d.residual_vs_dual <= tol;
  return d;
}

struct ResolventMapReport {
  Complex lambda;
  std::vector<Complex> resolvent_point;  // sigma_p(R) \ {0}
  std::vector<Complex> mapped;           // {1/(lambda - mu) : mu in sigma_p(A)}
  double hausdorff = 0.0;
  double max_kernel_angle = 0.0;  // ker(eta - R) vs ker((lambda - 1/eta) - A)
  double tol = 0.0;
  bool pass = false;
};

/// Spectral mapping for the resolvent at lambda in rho(A), including the
/// eigenspace identity ker(eta - R) = ker((lambda - 1/eta) - A).
inline ResolventMapReport resolvent_map_check(const ComplexMatrix& a, Complex lambda, double tol) {
  require_square(a, "resolvent_map_check");
  const auto sigma = point_spectrum_values(a, tol);
  if (directed_distance({lambda}, sigma) <= 1e-8)
    throw ConfigError("resolvent_map_check: lambda is within 1e-8 of the spectrum");

  ResolventMapReport r;
  r.lambda = lambda;
  r.tol = tol;
  const ComplexMatrix resolvent = shifted(a, lambda).partialPivLu().solve(identity(a.rows()));

  const auto rp = point_spectrum(resolvent, tol);
  for (const auto& ep : rp)
    if (std::abs(ep.lambda) > tol) r.resolvent_point.push_back(ep.lambda);
  for (Complex mu : sigma) r.mapped.push_back(1.0 / (lambda - mu));
  r.mapped = sorted_set(r.mapped);
  r.hausdorff = hausdorff(r.resolvent_point, r.mapped);

  const double thr = tol * spectral_scale(a);
  const double thr_r = tol * spectral_scale(resolvent);
  for (const auto& ep : rp) {
    if (std::abs(ep.lambda) <= tol) continue;
    const ComplexMatrix lhs = null_space(shifted(resolvent, ep.lambda), thr_r);
    const ComplexMatrix rhs = null_space(shifted(a, lambda - 1.0 / ep.lambda), thr);
    r.max_kernel_angle = std::max(r.max_kernel_angle, principal_angle(lhs, rhs));
  }
  r.pass = r.hausdorff <= tol && r.max_kernel_angle <= tol;
  return r;
}

inline double spectral_abscissa(const ComplexMatrix& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (Complex z : eigenvalues(a)) m = std::max(m, z.real());
  return m;
}

inline double spectral_radius(const ComplexMatrix& a) {
  double m = 0.0;
  for (Complex z : eigenvalues(a)) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace sgspec
