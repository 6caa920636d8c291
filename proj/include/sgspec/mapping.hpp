#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sgspec/linalg.hpp"
#include "sgspec/semigroup.hpp"
#include "sgspec/spectra.hpp"

namespace sgspec {

// Verification of the spectral inclusion/mapping relations between a
// generator A and its semigroup T(t). All comparisons are set-wise:
// exponentiation may merge distinct eigenvalues (mu, mu + 2 pi i / t).

struct MappingRow {
  double t = 0.0;
  std::string variant;  // point, residual, algebraic
  std::vector<Complex> lhs;
  std::vector<Complex> rhs;
  double hausdorff = 0.0;
  bool pass = false;
};

struct MappingReport {
  std::string theorem_id;
  std::vector<MappingRow> rows;
  double tol = 0.0;
  bool pass = true;

  std::vector<double> t_values() const {
    std::vector<double> t;
    for (const auto& r : rows) t.push_back(r.t);
    return t;
  }
};

namespace detail {

// e^{t s} as a set: images closer than tol (e.g. mu and mu + 2 pi i / t) merge.
inline std::vector<Complex> exp_set(const std::vector<Complex>& s, double t, double tol) {
  std::vector<Complex> images;
  images.reserve(s.size());
  for (Complex z : s) images.push_back(std::exp(t * z));
  std::vector<Complex> out;
  for (const Cluster& c : cluster_values(images, tol)) out.push_back(c.center);
  return out;
}

inline std::vector<Complex> drop_small(const std::vector<Complex>& s, double tol) {
  std::vector<Complex> out;
  for (Complex z : s)
    if (std::abs(z) > tol) out.push_back(z);
  return out;
}

inline void check_generator(const ComplexMatrix& a, const SemigroupEvaluator& sg, const char* who) {
  if (a.rows() != sg.dim() || a.cols() != sg.dim())
    throw DimensionError(std::string(who) + ": generator/evaluator dimension mismatch");
}

inline void push_row(MappingReport& rep, MappingRow row) {
  row.pass = row.hausdorff <= rep.tol;
  rep.pass = rep.pass && row.pass;
  rep.rows.push_back(std::move(row));
}

}  // namespace detail

/// sigma_p(T(t)) \ {0} = e^{t sigma_p(A)} for each t.
inline MappingReport point_mapping_check(const ComplexMatrix& a, const SemigroupEvaluator& sg,
                                         const std::vector<double>& t_values, double tol) {
  detail::check_generator(a, sg, "point_mapping_check");
  MappingReport rep{"point-mapping", {}, tol, true};
  const auto sigma_a = point_spectrum_values(a, tol);
  for (double t : t_values) {
    MappingRow row;
    row.t = t;
    row.variant = "point";
    row.lhs = detail::drop_small(point_spectrum_values(sg.operator_at(t), tol), tol);
    row.rhs = detail::exp_set(sigma_a, t, tol);
    row.hausdorff = hausdorff(row.lhs, row.rhs);
    detail::push_row(rep, std::move(row));
  }
  return rep;
}

/// One-sided e^{t sigma(A)} subset of sigma(T(t)) for the point, algebraic
/// and residual spectra; the row value is the directed distance.
inline MappingReport inclusion_checks(const ComplexMatrix& a, const SemigroupEvaluator& sg,
                                      const std::vector<double>& t_values, double tol) {
  detail::check_generator(a, sg, "inclusion_checks");
  MappingReport rep{"inclusion", {}, tol, true};
  const auto p = point_spectrum_values(a, tol);
  const auto alg = algebraic_spectrum(a, tol);
  const auto res = residual_spectrum(a, tol);
  for (double t : t_values) {
    const ComplexMatrix tt = sg.operator_at(t);
    struct Variant {
      const char* name;
      std::vector<Complex> gen;
      std::vector<Complex> sg;
    };
    const Variant variants[] = {{"point", p, point_spectrum_values(tt, tol)},
                                {"algebraic", alg, algebraic_spectrum(tt, tol)},
                                {"residual", res, residual_spectrum(tt, tol)}};
    for (const auto& v : variants) {
      MappingRow row;
      row.t = t;
      row.variant = v.name;
      row.lhs = detail::exp_set(v.gen, t, tol);
      row.rhs = v.sg;
      row.hausdorff = directed_distance(row.lhs, row.rhs);
      detail::push_row(rep, std::move(row));
    }
  }
  return rep;
}

/// sigma_r(T(t)) \ {0} = e^{t sigma_r(A)}, both residual spectra from the
/// rank criterion. Each row also cross-checks against the transpose route.
inline MappingReport residual_mapping_check(const ComplexMatrix& a, const SemigroupEvaluator& sg,
                                            const std::vector<double>& t_values, double tol) {
  detail::check_generator(a, sg, "residual_mapping_check");
  MappingReport rep{"residual-mapping", {}, tol, true};
  const auto res_a = residual_spectrum(a, tol);
  const auto dual_a = residual_spectrum_dual(a, tol);
  {
    MappingRow dual;
    dual.t = 0.0;
    dual.variant = "dual";  // rank route vs transpose route on A
    dual.lhs = res_a;
    dual.rhs = dual_a;
    dual.hausdorff = hausdorff(res_a, dual_a);
    detail::push_row(rep, std::move(dual));
  }
  for (double t : t_values) {
    const ComplexMatrix tt = sg.operator_at(t);
    MappingRow row;
    row.t = t;
    row.variant = "residual";
    row.lhs = detail::drop_small(residual_spectrum(tt, tol), tol);
    row.rhs = detail::exp_set(res_a, t, tol);
    row.hausdorff = hausdorff(row.lhs, row.rhs);
    const double dual_dist = hausdorff(row.lhs, detail::drop_small(residual_spectrum_dual(tt, tol), tol));
    row.hausdorff = std::max(row.hausdorff, dual_dist);
    detail::push_row(rep, std::move(row));
  }
  return rep;
}

struct EigenspaceReport {
  Complex lambda;
  int lhs_dim = 0;
  int rhs_dim = 0;
  double angle = 0.0;  // largest principal angle, pi/2 on dimension mismatch
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

inline std::vector<double> default_intersection_grid() {
  return {1.0, std::sqrt(2.0), kPi / 2.0};
}

/// ker(lambda - A) against the intersection over t in t_grid of
/// ker(e^{lambda t} - T(t)), computed as the null space of the stacked
/// operators.
inline EigenspaceReport eigenspace_intersection_check(const ComplexMatrix& a, const SemigroupEvaluator& sg,
                                                      Complex lambda, const std::vector<double>& t_grid,
                                                      double tol) {
  detail::check_generator(a, sg, "eigenspace_intersection_check");
  if (t_grid.empty()) throw ConfigError("eigenspace_intersection_check: empty t_grid");
  if (directed_distance({lambda}, point_spectrum_values(a, tol)) > tol * spectral_scale(a))
    throw ConfigError("eigenspace_intersection_check: lambda is not an eigenvalue of A");

  const Eigen::Index d = a.rows();
  const double thr = tol * spectral_scale(a);
  const ComplexMatrix lhs = null_space(shifted(a, lambda), thr);

  ComplexMatrix stacked(d * static_cast<Eigen::Index>(t_grid.size()), d);
  double scale = 1.0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    if (!(t > 0.0)) throw ConfigError("eigenspace_intersection_check: grid values must be > 0");
    const ComplexMatrix blk = shifted(sg.operator_at(t), std::exp(lambda * t));
    scale = std::max(scale, norm_inf(blk));
    stacked.middleRows(static_cast<Eigen::Index>(k) * d, d) = blk;
  }
  const ComplexMatrix rhs = null_space(stacked, tol * scale);

  EigenspaceReport r;
  r.lambda = lambda;
  r.tol = tol;
  r.lhs_dim = static_cast<int>(lhs.cols());
  r.rhs_dim = static_cast<int>(rhs.cols());
  r.angle = principal_angle(lhs, rhs);
  r.pass = r.lhs_dim == r.rhs_dim && r.angle <= tol;
  if (r.rhs_dim > r.lhs_dim) r.note = "intersection larger than eigenspace: grid aliases eigenvalues";
  return r;
}

inline int default_n_max(const ComplexMatrix& a, double t) {
  return static_cast<int>(std::ceil(t * spectral_radius(a) / kTwoPi)) + 1;
}

/// ker(e^{lambda t} - T(t)) against span of ker(lambda + 2 pi i n / t - A), |n| <= n_max.
/// Throws when the dimensions disagree because an eigenvalue on the
/// lattice lies beyond n_max.
inline EigenspaceReport eigenspace_union_check(const ComplexMatrix& a, const SemigroupEvaluator& sg,
                                               Complex lambda, double t, int n_max, double tol) {
  detail::check_generator(a, sg, "eigenspace_union_check");
  if (!(t > 0.0)) throw ConfigError("eigenspace_union_check: t must be > 0");
  if (n_max < 0) throw ConfigError("eigenspace_union_check: n_max must be >= 0");
  const Eigen::Index d = a.rows();
  const double thr = tol * spectral_scale(a);

  const ComplexMatrix tt = sg.operator_at(t);
  const ComplexMatrix lhs = null_space(shifted(tt, std::exp(lambda * t)), tol * spectral_scale(tt));

  ComplexMatrix gathered(d, 0);
  for (int n = -n_max; n <= n_max; ++n) {
    const ComplexMatrix k = null_space(shifted(a, lambda + Complex(0.0, kTwoPi * n / t)), thr);
    if (k.cols() == 0) continue;
    ComplexMatrix next(d, gathered.cols() + k.cols());
    next << gathered, k;
    gathered = std::move(next);
  }
  const ComplexMatrix rhs = orthonormalize(gathered, 1e-10);

  EigenspaceReport r;
  r.lambda = lambda;
  r.tol = tol;
  r.lhs_dim = static_cast<int>(lhs.cols());
  r.rhs_dim = static_cast<int>(rhs.cols());
  r.angle = principal_angle(lhs, rhs);
  r.pass = r.lhs_dim == r.rhs_dim && r.angle <= tol;

  if (r.lhs_dim != r.rhs_dim) {
    for (Complex mu : point_spectrum_values(a, tol)) {
      const double nn = (mu - lambda).imag() * t / kTwoPi;
      const double nr = std::round(nn);
      const bool on_lattice = std::abs(mu - lambda - Complex(0.0, kTwoPi * nr / t)) <= thr;
      if (on_lattice && std::abs(nr) > n_max)
        throw ConfigError("eigenspace_union_check: n_max = " + std::to_string(n_max) +
                          " too small; lattice eigenvalue at n = " + std::to_string(static_cast<long>(nr)));
    }
  }
  return r;
}

}  // namespace sgspec
