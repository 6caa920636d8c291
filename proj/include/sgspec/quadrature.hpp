#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgspec/semigroup.hpp"
#include "sgspec/spectra.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

enum class OrbitScheme { trapezoid, simpson, gauss };

inline const char* to_string(OrbitScheme s) {
  switch (s) {
    case OrbitScheme::trapezoid: return "trapezoid";
    case OrbitScheme::simpson: return "simpson";
    case OrbitScheme::gauss: return "gauss";
  }
  return "?";
}

inline OrbitScheme orbit_scheme_from_string(const std::string& s) {
  if (s == "trapezoid") return OrbitScheme::trapezoid;
  if (s == "simpson") return OrbitScheme::simpson;
  if (s == "gauss") return OrbitScheme::gauss;
  throw ConfigError("unknown orbit_scheme '" + s + "' (expected trapezoid|simpson|gauss)");
}

struct QuadratureConfig {
  int orbit_nodes = 512;  // composite panels on [0, t]
  OrbitScheme orbit_scheme = OrbitScheme::simpson;
  std::optional<double> laplace_horizon;  // nullopt = auto
  double laplace_tail_tol = 1e-10;
  int contour_nodes = 64;  // also the node count for full-period averages
  double contour_radius = 0.5;
  double tol = 1e-8;

  void validate() const {
    if (orbit_nodes < 2) throw ConfigError("orbit_nodes must be >= 2");
    if (laplace_horizon && !(*laplace_horizon > 0.0))
      throw ConfigError("laplace_horizon must be > 0 or auto");
    if (!(laplace_tail_tol > 0.0)) throw ConfigError("laplace_tail_tol must be > 0");
    if (contour_nodes < 8) throw ConfigError("contour_nodes must be >= 8");
    if (!(contour_radius > 0.0)) throw ConfigError("contour_radius must be > 0");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  }
};

struct QuadratureNode {
  double s;
  double w;
};

/// Composite rule on [a, b] with the given number of panels. Simpson uses
/// each panel's midpoint; gauss is 5-point Gauss-Legendre per panel.
inline std::vector<QuadratureNode> composite_rule(OrbitScheme scheme, double a, double b, int panels) {
  if (panels < 1) throw ConfigError("composite_rule: panels must be >= 1");
  std::vector<QuadratureNode> nodes;
  const double h = (b - a) / panels;
  switch (scheme) {
    case OrbitScheme::trapezoid:
      nodes.reserve(static_cast<std::size_t>(panels) + 1);
      for (int j = 0; j <= panels; ++j)
        nodes.push_back({a + j * h, (j == 0 || j == panels) ? 0.5 * h : h});
      break;
    case OrbitScheme::simpson: {
      const double hs = 0.5 * h;
      nodes.reserve(2 * static_cast<std::size_t>(panels) + 1);
      for (int j = 0; j <= 2 * panels; ++j) {
        const double w = (j == 0 || j == 2 * panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        nodes.push_back({a + j * hs, w * hs / 3.0});
      }
      break;
    }
    case OrbitScheme::gauss: {
      static constexpr std::array<double, 5> x{-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
      static constexpr std::array<double, 5> w{0.2369268850561891, 0.4786286704993665,
                                               0.5688888888888889, 0.4786286704993665,
                                               0.2369268850561891};
      nodes.reserve(5 * static_cast<std::size_t>(panels));
      for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t k = 0; k < 5; ++k) nodes.push_back({mid + 0.5 * h * x[k], 0.5 * h * w[k]});
      }
      break;
    }
  }
  return nodes;
}

/// Integral over a node set of e^{-lambda s} T(s), as a matrix.
/// Terms are accumulated in node order.
inline ComplexMatrix weighted_orbit_sum(const SemigroupEvaluator& sg, Complex lambda,
                                        const std::vector<QuadratureNode>& nodes) {
  ComplexMatrix acc = ComplexMatrix::Zero(sg.dim(), sg.dim());
  for (const auto& nd : nodes) acc += (nd.w * std::exp(-lambda * nd.s)) * sg.operator_at(nd.s);
  return acc;
}

/// int_0^t e^{-lambda s} T(s) ds as an operator (columnwise).
inline ComplexMatrix orbit_integral_operator(const SemigroupEvaluator& sg, Complex lambda, double t,
                                             const QuadratureConfig& cfg) {
  if (!(t >= 0.0)) throw ConfigError("orbit_integral: t must be >= 0");
  if (t == 0.0) return ComplexMatrix::Zero(sg.dim(), sg.dim());
  return weighted_orbit_sum(sg, lambda, composite_rule(cfg.orbit_scheme, 0.0, t, cfg.orbit_nodes));
}

/// int_0^t e^{-lambda s} T(s) x ds by the configured composite rule.
inline ComplexVector orbit_integral(const SemigroupEvaluator& sg, Complex lambda, double t,
                                    const ComplexVector& x, const QuadratureConfig& cfg) {
  if (x.size() != sg.dim()) throw DimensionError("orbit_integral: dimension mismatch");
  if (!(t >= 0.0)) throw ConfigError("orbit_integral: t must be >= 0");
  if (t == 0.0) return ComplexVector::Zero(x.size());
  ComplexVector acc = ComplexVector::Zero(x.size());
  for (const auto& nd : composite_rule(cfg.orbit_scheme, 0.0, t, cfg.orbit_nodes))
    acc += (nd.w * std::exp(-lambda * nd.s)) * sg.evaluate(nd.s, x);
  return acc;
}

struct RescaleResiduals {
  double residual1 = 0.0;  // operator applied to the integral
  double residual2 = 0.0;  // operator applied inside the integral
};

/// Residuals of the two rescaled-semigroup identities
///   e^{-lt}T(t)x - x = (A - l) int_0^t e^{-ls}T(s)x ds
///   e^{-lt}T(t)x - x = int_0^t e^{-ls}T(s)(A - l)x ds
/// with A the supplied generator.
inline RescaleResiduals verify_rescale_identities(const SemigroupEvaluator& sg, const ComplexMatrix& a,
                                                  Complex lambda, double t, const ComplexVector& x,
                                                  const QuadratureConfig& cfg) {
  if (a.rows() != sg.dim() || a.cols() != sg.dim())
    throw DimensionError("verify_rescale_identities: generator/evaluator dimension mismatch");
  const ComplexMatrix a_shift = a - lambda * identity(a.rows());
  const ComplexVector lhs = std::exp(-lambda * t) * sg.evaluate(t, x) - x;
  const ComplexVector outer = a_shift * orbit_integral(sg, lambda, t, x, cfg);
  const ComplexVector inner = orbit_integral(sg, lambda, t, a_shift * x, cfg);
  return {norm_inf(lhs - outer), norm_inf(lhs - inner)};
}

struct LaplaceResult {
  ComplexMatrix resolvent;
  double horizon = 0.0;
  double abscissa = 0.0;
  int panels = 0;
  double left_residual = 0.0;   // ||(lambda - A) R - I||
  double right_residual = 0.0;  // ||R (lambda - A) - I||
};

/// R(lambda, A) = int_0^inf e^{-lambda s} T(s) ds, truncated.
///
/// The horizon makes the tail bound e^{(a - Re l) H}/(Re l - a) fall below
/// laplace_tail_tol, a being the spectral abscissa. Panels are 5-point
/// Gauss-Legendre with width ~ 1/(|lambda| + ||A||). If the two-sided
/// residual misses cfg.tol (transient growth of non-normal T), the horizon
/// and panel density are doubled, a bounded number of times.
inline LaplaceResult laplace_resolvent_detailed(const SemigroupEvaluator& sg, Complex lambda,
                                                const QuadratureConfig& cfg,
                                                std::optional<double> abscissa = std::nullopt) {
  cfg.validate();
  const ComplexMatrix& a = sg.generator();
  const double absc = abscissa ? *abscissa : spectral_abscissa(a);
  const double gap = lambda.real() - absc;
  if (!(gap > 0.0))
    throw NumericalError("laplace_resolvent: Re(lambda) = " + std::to_string(lambda.real()) +
                         " <= spectral abscissa " + std::to_string(absc) +
                         "; the Laplace integral diverges");
  if (directed_distance({lambda}, eigenvalues(a)) < 1e-8)
    throw NumericalError("laplace_resolvent: lambda within 1e-8 of the spectrum");

  double horizon = cfg.laplace_horizon
                       ? *cfg.laplace_horizon
                       : std::max(1.0, std::log(1.0 / (cfg.laplace_tail_tol * gap)) / gap);
  const double rate = std::abs(lambda) + norm_inf(a) + 1.0;
  const ComplexMatrix shifted_a = lambda * identity(a.rows()) - a;

  LaplaceResult res;
  res.abscissa = absc;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const int panels = static_cast<int>(std::ceil(2.0 * horizon * rate)) * (1 << attempt);
    res.resolvent = weighted_orbit_sum(sg, lambda, composite_rule(OrbitScheme::gauss, 0.0, horizon, panels));
    res.horizon = horizon;
    res.panels = panels;
    res.left_residual = norm_inf(shifted_a * res.resolvent - identity(a.rows()));
    res.right_residual = norm_inf(res.resolvent * shifted_a - identity(a.rows()));
    if (res.left_residual <= cfg.tol && res.right_residual <= cfg.tol) return res;
    if (cfg.laplace_horizon) break;  // fixed horizon: no refinement
    horizon *= 2.0;
  }
  throw NumericalError("laplace_resolvent: residual " + std::to_string(res.left_residual) +
                       " above tol " + std::to_string(cfg.tol) + " after refinement");
}

inline ComplexMatrix laplace_resolvent(const SemigroupEvaluator& sg, Complex lambda,
                                       const QuadratureConfig& cfg) {
  return laplace_resolvent_detailed(sg, lambda, cfg).resolvent;
}

/// (1/2 pi i) times the integral of f over the positively oriented circle
/// |z - center| = radius, by the trapezoid rule in the angle.
/// f may return a scalar, vector or matrix.
template <typename F>
auto contour_integral_circle(F&& f, Complex center, double radius, int n_nodes) {
  if (!(radius > 0.0)) throw ConfigError("contour_integral_circle: radius must be > 0");
  if (n_nodes < 8) throw ConfigError("contour_integral_circle: n_nodes must be >= 8");
  using R = std::decay_t<decltype(f(center))>;
  // d(lambda) = i r e^{i theta} d(theta); the i cancels against 1/(2 pi i).
  auto term = [&](int j) {
    const Complex offset = std::polar(radius, kTwoPi * j / n_nodes);
    return R(f(center + offset) * offset);
  };
  R acc = term(0);
  for (int j = 1; j < n_nodes; ++j) acc += term(j);
  return R(acc / static_cast<double>(n_nodes));
}

}  // namespace sgspec
