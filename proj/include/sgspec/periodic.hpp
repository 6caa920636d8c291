#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sgspec/linalg.hpp"
#include "sgspec/matrix_exp.hpp"
#include "sgspec/quadrature.hpp"
#include "sgspec/semigroup.hpp"
#include "sgspec/spectra.hpp"

namespace sgspec {

/// Smallest period of the form t0/k, k <= k_max, or 0 for the trivial
/// semigroup (T(t) = I on a fine grid of (0, t0]). Minimal periods can only
/// be exact divisors of a known period, so no continuous search is needed.
inline double detect_period(const SemigroupEvaluator& sg, double t0, int k_max, double tol) {
  if (!(t0 > 0.0)) throw ConfigError("detect_period: t0 must be > 0");
  if (k_max < 1) throw ConfigError("detect_period: k_max must be >= 1");
  const ComplexMatrix id = identity(sg.dim());
  auto dev = [&](double t) { return norm_inf(sg.operator_at(t) - id); };
  if (dev(t0) > tol)
    throw ConfigError("detect_period: ||T(t0) - I|| = " + std::to_string(dev(t0)) +
                      " exceeds tol; t0 is not a period");

  constexpr int kTrivialGrid = 64;
  bool trivial = true;
  for (int j = 1; j <= kTrivialGrid && trivial; ++j)
    trivial = dev(t0 * j / kTrivialGrid) <= tol;
  if (trivial) return 0.0;

  for (int k = k_max; k >= 1; --k)
    if (dev(t0 / k) <= tol) return t0 / k;
  return t0;  // unreachable: k = 1 always passes
}

struct ProjectionEntry {
  int n = 0;
  Complex mu;  // 2 pi i n / period
  ComplexMatrix p;
};

struct ProjectionFamily {
  double period = 0.0;
  std::vector<ProjectionEntry> entries;  // n = -m..m in increasing order
  int m = 0;

  const ProjectionEntry* find(int n) const {
    for (const auto& e : entries)
      if (e.n == n) return &e;
    return nullptr;
  }
};

inline Complex lattice_point(double period, int n) {
  return Complex(0.0, kTwoPi * n / period);
}

/// Samples of T on one period, shared by all averages and resolvent
/// evaluations over that period.
class PeriodicOrbitTable {
 public:
  PeriodicOrbitTable(const SemigroupEvaluator& sg, double period, const QuadratureConfig& cfg)
      : period_(period), dim_(sg.dim()) {
    if (!(period > 0.0))
      throw ConfigError("periodic operations require a period > 0 (trivial semigroup has period 0)");
    cfg.validate();
    // full-period averages: periodic trapezoid, endpoint folded
    const int n = cfg.contour_nodes;
    for (int j = 0; j < n; ++j) {
      const double s = period * j / n;
      avg_nodes_.push_back({s, 1.0 / n});
      avg_values_.push_back(sg.operator_at(s));
    }
    for (const auto& nd : composite_rule(cfg.orbit_scheme, 0.0, period, cfg.orbit_nodes)) {
      res_nodes_.push_back(nd);
      res_values_.push_back(sg.operator_at(nd.s));
    }
  }

  double period() const { return period_; }

  /// (1/rho) int_0^rho e^{-mu_n s} T(s) ds.
  ComplexMatrix projection(int n) const {
    const Complex mu = lattice_point(period_, n);
    ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
    for (std::size_t j = 0; j < avg_nodes_.size(); ++j)
      acc += (avg_nodes_[j].w * std::exp(-mu * avg_nodes_[j].s)) * avg_values_[j];
    return acc;
  }

  /// (1 - e^{-mu rho})^{-1} int_0^rho e^{-mu s} T(s) ds.
  ComplexMatrix resolvent(Complex mu) const {
    const Complex denom = 1.0 - std::exp(-mu * period_);
    if (std::abs(denom) <= 1e-8)
      throw ConfigError("periodic_resolvent: mu is too close to the lattice 2 pi i Z / rho");
    ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
    for (std::size_t j = 0; j < res_nodes_.size(); ++j)
      acc += (res_nodes_[j].w * std::exp(-mu * res_nodes_[j].s)) * res_values_[j];
    return acc / denom;
  }

 private:
  double period_;
  Eigen::Index dim_;
  std::vector<QuadratureNode> avg_nodes_;
  std::vector<ComplexMatrix> avg_values_;
  std::vector<QuadratureNode> res_nodes_;
  std::vector<ComplexMatrix> res_values_;
};

inline ComplexMatrix spectral_projection(const SemigroupEvaluator& sg, double period, int n,
                                         const QuadratureConfig& cfg) {
  return PeriodicOrbitTable(sg, period, cfg).projection(n);
}

/// P_n for n = -m..m with m the smallest index for which ||sum P_n - I|| <= tol.
inline ProjectionFamily build_projection_family(const SemigroupEvaluator& sg, double period,
                                                const QuadratureConfig& cfg, double tol) {
  const PeriodicOrbitTable table(sg, period, cfg);
  const ComplexMatrix id = identity(sg.dim());
  // beyond half the node count the averages alias
  const int m_cap = cfg.contour_nodes / 4;
  ComplexMatrix sum = table.projection(0);
  std::vector<ComplexMatrix> neg, pos;
  int m = 0;
  while (norm_inf(sum - id) > tol) {
    if (++m > m_cap)
      throw NumericalError("build_projection_family: projections do not sum to I within " +
                           std::to_string(m_cap) + " modes; raise contour_nodes or check the period");
    neg.push_back(table.projection(-m));
    pos.push_back(table.projection(m));
    sum += neg.back() + pos.back();
  }
  ProjectionFamily fam;
  fam.period = period;
  fam.m = m;
  for (int k = m; k >= 1; --k) fam.entries.push_back({-k, lattice_point(period, -k), neg[k - 1]});
  fam.entries.push_back({0, Complex(0.0), table.projection(0)});
  for (int k = 1; k <= m; ++k) fam.entries.push_back({k, lattice_point(period, k), pos[k - 1]});
  return fam;
}

inline ComplexMatrix periodic_resolvent(const SemigroupEvaluator& sg, double period, Complex mu,
                                        const QuadratureConfig& cfg) {
  if (std::abs(1.0 - std::exp(-mu * period)) <= 1e-8)
    throw ConfigError("periodic_resolvent: mu is too close to the lattice 2 pi i Z / rho");
  return PeriodicOrbitTable(sg, period, cfg).resolvent(mu);
}

/// Laurent coefficients a_{k,n}, k = -1..k_max, of R(., A) around mu_n,
/// by contour integrals of the periodic resolvent over |lambda - mu_n| = r.
/// Element 0 of the result is a_{-1,n} (the residue, equal to P_n).
inline std::vector<ComplexMatrix> laurent_coefficients(const SemigroupEvaluator& sg, double period,
                                                       int n, int k_max, const QuadratureConfig& cfg) {
  const double r = cfg.contour_radius;
  if (!(period > 0.0)) throw ConfigError("laurent_coefficients: period must be > 0");
  if (!(r > 0.0 && r < kTwoPi / period))
    throw ConfigError("laurent_coefficients: contour radius " + std::to_string(r) +
                      " must lie in (0, 2 pi / rho) = (0, " + std::to_string(kTwoPi / period) + ")");
  if (k_max < -1) throw ConfigError("laurent_coefficients: k_max must be >= -1");
  const PeriodicOrbitTable table(sg, period, cfg);
  const Complex mu_n = lattice_point(period, n);

  // resolvent at the contour nodes, evaluated once
  const int nodes = cfg.contour_nodes;
  std::vector<ComplexMatrix> samples;
  samples.reserve(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) samples.push_back(table.resolvent(mu_n + std::polar(r, kTwoPi * j / nodes)));
  auto sample_at = [&](Complex lambda) -> const ComplexMatrix& {
    double ang = std::arg(lambda - mu_n);
    if (ang < 0.0) ang += kTwoPi;
    const auto j = static_cast<std::size_t>(std::lround(ang * nodes / kTwoPi)) % samples.size();
    return samples[j];
  };

  std::vector<ComplexMatrix> out;
  for (int k = -1; k <= k_max; ++k) {
    out.push_back(contour_integral_circle(
        [&](Complex lambda) -> ComplexMatrix {
          return sample_at(lambda) / std::pow(lambda - mu_n, k + 1);
        },
        mu_n, r, nodes));
  }
  return out;
}

/// sum_{k=-1}^{K} a_k (mu - mu_n)^k.
inline ComplexMatrix laurent_partial_sum(const std::vector<ComplexMatrix>& coeffs, Complex mu_n, Complex mu) {
  if (coeffs.empty()) throw ConfigError("laurent_partial_sum: no coefficients");
  const Complex d = mu - mu_n;
  ComplexMatrix acc = coeffs[0] / d;
  Complex pw(1.0);
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    acc += coeffs[k] * pw;
    pw *= d;
  }
  return acc;
}

/// sum_n e^{mu_n t} P_n.
inline ComplexMatrix fourier_reconstruct_T(const ProjectionFamily& fam, double t) {
  if (fam.entries.empty()) throw ConfigError("fourier_reconstruct_T: empty family");
  const Eigen::Index d = fam.entries.front().p.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (const auto& e : fam.entries) acc += std::exp(e.mu * t) * e.p;
  return acc;
}

/// sum_n mu_n P_n.
inline ComplexMatrix fourier_reconstruct_A(const ProjectionFamily& fam) {
  if (fam.entries.empty()) throw ConfigError("fourier_reconstruct_A: empty family");
  const Eigen::Index d = fam.entries.front().p.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (const auto& e : fam.entries) acc += e.mu * e.p;
  return acc;
}

struct CheckItem {
  std::string name;  // idempotence, annihilation, completeness, range, invariance
  int n = 0;
  int j = 0;  // partner index for annihilation, grid index for invariance
  double value = 0.0;
  bool pass = false;
};

struct FamilyCheckReport {
  std::vector<CheckItem> items;
  std::vector<int> kernel_dims;  // dim ker(mu_n - A), aligned with fam.entries
  double tol = 0.0;
  bool pass = true;

  std::vector<CheckItem> failures() const {
    std::vector<CheckItem> f;
    for (const auto& i : items)
      if (!i.pass) f.push_back(i);
    return f;
  }
  bool failed(const std::string& name, int n) const {
    for (const auto& i : items)
      if (!i.pass && i.name == name && i.n == n) return true;
    return false;
  }
};

/// Idempotence, mutual annihilation, completeness (sum = I),
/// ran(P_n) = ker(mu_n - A) and T(t) P_n = e^{mu_n t} P_n on a t-grid.
/// T(t) is e^{tA} unless an evaluator is supplied.
inline FamilyCheckReport projection_family_checks(const ProjectionFamily& fam, const ComplexMatrix& a,
                                                  double tol,
                                                  const SemigroupEvaluator* sg = nullptr,
                                                  int t_grid_points = 8) {
  require_square(a, "projection_family_checks");
  FamilyCheckReport rep;
  rep.tol = tol;
  const Eigen::Index d = a.rows();
  const ComplexMatrix id = identity(d);
  auto add = [&](std::string name, int n, int j, double v) {
    const bool ok = v <= tol;
    rep.items.push_back({std::move(name), n, j, v, ok});
    rep.pass = rep.pass && ok;
  };

  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : fam.entries) {
    if (e.p.rows() != d || e.p.cols() != d) throw DimensionError("projection_family_checks: P_n shape");
    sum += e.p;
    add("idempotence", e.n, e.n, norm_inf(e.p * e.p - e.p));
    for (const auto& f : fam.entries)
      if (f.n != e.n) add("annihilation", e.n, f.n, norm_inf(e.p * f.p));
    const ComplexMatrix ran = range_basis(e.p, tol * std::max(1.0, norm_inf(e.p)));
    const ComplexMatrix ker = null_space(shifted(a, e.mu), tol * spectral_scale(a));
    rep.kernel_dims.push_back(static_cast<int>(ker.cols()));
    add("range", e.n, e.n, ran.cols() == ker.cols() ? principal_angle(ran, ker) : 1.0);
  }
  add("completeness", 0, 0, norm_inf(sum - id));

  if (fam.period > 0.0) {
    for (int j = 0; j < t_grid_points; ++j) {
      const double t = 2.0 * fam.period * j / t_grid_points;
      const ComplexMatrix tt = sg ? sg->operator_at(t) : matrix_exp(a, t);
      for (const auto& e : fam.entries)
        add("invariance", e.n, j, norm_inf(tt * e.p - std::exp(e.mu * t) * e.p));
    }
  }
  return rep;
}

struct PeriodicityCriterionReport {
  double alpha = 0.0;
  double max_lattice_deviation = 0.0;
  bool lattice_holds = false;   // sigma_p(A) in 2 pi i alpha Z
  int eigenvector_rank = 0;
  bool span_holds = false;      // eigenvectors span the space
  bool claim_made = false;      // both criteria hold
  double period_residual = -1.0;  // ||T(1/alpha) - I||, when claimed
  bool pass = false;
};

/// If sigma_p(A) lies in 2 pi i alpha Z and the eigenvectors span, then
/// T(1/alpha) = I. Reports each criterion and verifies the conclusion.
inline PeriodicityCriterionReport periodicity_criterion_check(const ComplexMatrix& a, double alpha,
                                                              double tol) {
  require_square(a, "periodicity_criterion_check");
  if (!(alpha > 0.0)) throw ConfigError("periodicity_criterion_check: alpha must be > 0");
  PeriodicityCriterionReport r;
  r.alpha = alpha;
  const auto pts = point_spectrum(a, tol);
  const double step = kTwoPi * alpha;
  for (const auto& ep : pts) {
    const double k = std::round(ep.lambda.imag() / step);
    r.max_lattice_deviation = std::max(r.max_lattice_deviation, std::abs(ep.lambda - Complex(0.0, k * step)));
  }
  r.lattice_holds = r.max_lattice_deviation <= tol * spectral_scale(a);

  std::vector<ComplexVector> vecs;
  for (const auto& ep : pts) vecs.insert(vecs.end(), ep.eigenvectors.begin(), ep.eigenvectors.end());
  ComplexMatrix v(a.rows(), static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t j = 0; j < vecs.size(); ++j) v.col(static_cast<Eigen::Index>(j)) = vecs[j];
  r.eigenvector_rank = static_cast<int>(numerical_rank(v, tol));
  r.span_holds = r.eigenvector_rank == a.rows();

  r.claim_made = r.lattice_holds && r.span_holds;
  if (r.claim_made) {
    r.period_residual = norm_inf(matrix_exp(a, 1.0 / alpha) - identity(a.rows()));
    r.pass = r.period_residual <= tol;
  }
  return r;
}

}  // namespace sgspec
