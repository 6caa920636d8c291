#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sgspec/catalog.hpp"
#include "sgspec/linalg.hpp"
#include "sgspec/quadrature.hpp"

using namespace sgspec;

namespace {

SemigroupEvaluator diag_sg(std::vector<Complex> d) { return catalog_build(catalog::Diagonal{std::move(d)}).evaluator; }

// int_0^t e^{(a - lambda) s} ds
Complex antiderivative(Complex a, Complex lambda, double t) {
  const Complex k = a - lambda;
  if (std::abs(k) == 0.0) return t;
  return (std::exp(k * t) - 1.0) / k;
}

}  // namespace

TEST(OrbitIntegral, ConstantIntegrand) {
  const auto sg = SemigroupEvaluator::from_dense(ComplexMatrix::Zero(3, 3));
  Rng rng(1);
  const ComplexVector x = random_vector(3, rng);
  for (auto scheme : {OrbitScheme::trapezoid, OrbitScheme::simpson, OrbitScheme::gauss}) {
    QuadratureConfig cfg;
    cfg.orbit_scheme = scheme;
    EXPECT_LE(norm_inf(orbit_integral(sg, 0.0, 1.0, x, cfg) - x), 1e-12) << to_string(scheme);
  }
}

TEST(OrbitIntegral, MatchedShiftGivesTimesX) {
  const Complex a(0.4, -1.3);
  const auto sg = diag_sg({a});
  ComplexVector x(1);
  x << Complex(2.0, 1.0);
  EXPECT_LE(norm_inf(orbit_integral(sg, a, 2.5, x, {}) - 2.5 * x), 1e-13);
}

TEST(OrbitIntegral, DiagonalMatchesAntiderivative) {
  const std::vector<Complex> d{Complex(0.5, 0.0), Complex(-1.0, 3.0), Complex(0.0, kTwoPi)};
  const auto sg = diag_sg(d);
  ComplexVector x(3);
  x << 1.0, Complex(0.0, 1.0), -2.0;
  for (Complex lam : {Complex(0.0), Complex(1.0), Complex(0.3, 0.1)})
    for (double t : {0.1, 1.0, 2.0}) {
      const ComplexVector got = orbit_integral(sg, lam, t, x, {});
      for (int k = 0; k < 3; ++k)
        EXPECT_LE(std::abs(got(k) - x(k) * antiderivative(d[k], lam, t)), 1e-10) << "lambda " << lam << " t " << t;
    }
}

TEST(OrbitIntegral, TimeZeroIsZeroWithoutEvaluating) {
  int calls = 0;
  const auto sg = SemigroupEvaluator::from_closed_form(GeneratorSpec{identity(2)}, identity(2), [&calls](double) {
    ++calls;
    return identity(2);
  });
  const ComplexVector got = orbit_integral(sg, 1.0, 0.0, ComplexVector::Ones(2), {});
  EXPECT_EQ(got, ComplexVector::Zero(2));
  EXPECT_EQ(calls, 0);
}

TEST(OrbitIntegral, ConvergenceOrders) {
  const std::vector<Complex> d{Complex(0.3, 2.0), Complex(-0.7, -5.0)};
  const auto sg = diag_sg(d);
  ComplexVector x(2);
  x << 1.0, 1.0;
  const Complex lam(0.2, 0.1);
  const double t = 1.5;
  ComplexVector exact(2);
  for (int k = 0; k < 2; ++k) exact(k) = antiderivative(d[k], lam, t);
  auto err = [&](OrbitScheme s, int n) {
    QuadratureConfig cfg;
    cfg.orbit_scheme = s;
    cfg.orbit_nodes = n;
    return norm_inf(orbit_integral(sg, lam, t, x, cfg) - exact);
  };
  for (int n : {8, 16, 32}) {
    // halving the panel width: 4x for trapezoid, 16x for simpson
    EXPECT_GE(err(OrbitScheme::simpson, n) / err(OrbitScheme::simpson, 2 * n), 3.5) << n;
    EXPECT_GE(err(OrbitScheme::trapezoid, n) / err(OrbitScheme::trapezoid, 2 * n), 3.5) << n;
    EXPECT_LT(err(OrbitScheme::gauss, n), err(OrbitScheme::simpson, n));
  }
}

TEST(CompositeRule, WeightsIntegratePolynomials) {
  for (auto scheme : {OrbitScheme::trapezoid, OrbitScheme::simpson, OrbitScheme::gauss}) {
    const auto nodes = composite_rule(scheme, 0.0, 2.0, 4);
    double w = 0.0, lin = 0.0;
    for (const auto& n : nodes) {
      w += n.w;
      lin += n.w * n.s;
    }
    EXPECT_NEAR(w, 2.0, 1e-14);
    EXPECT_NEAR(lin, 2.0, 1e-14);
  }
  double cubic = 0.0;
  for (const auto& n : composite_rule(OrbitScheme::simpson, 0.0, 1.0, 3)) cubic += n.w * n.s * n.s * n.s;
  EXPECT_NEAR(cubic, 0.25, 1e-15);
}

TEST(RescaleIdentities, ZeroGenerator) {
  const ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  const auto sg = SemigroupEvaluator::from_dense(a);
  Rng rng(2);
  const ComplexVector x = random_vector(3, rng);
  for (double t : {0.0, 0.5, 4.0}) {
    const auto r = verify_rescale_identities(sg, a, 0.0, t, x, {});
    EXPECT_LE(r.residual1, 1e-12);
    EXPECT_LE(r.residual2, 1e-12);
  }
}

TEST(RescaleIdentities, RotationAtComplexShift) {
  const auto sg = catalog_build(catalog::Rotation2d{1.0}).evaluator;
  ComplexVector x(2);
  x << 1.0, 0.0;
  const auto r = verify_rescale_identities(sg, sg.generator(), Complex(0.3, 0.1), 1.0, x, {});
  EXPECT_LE(r.residual1, 1e-8);
  EXPECT_LE(r.residual2, 1e-8);
}

TEST(RescaleIdentities, RandomStableGenerator) {
  const auto sg = catalog_build(catalog::RandomStable{5, 17, -0.3}).evaluator;
  Rng rng(5);
  const ComplexVector x = random_vector(5, rng);
  const auto r = verify_rescale_identities(sg, sg.generator(), 1.0, 0.5, x, {});
  EXPECT_LE(r.residual1, 1e-8);
  EXPECT_LE(r.residual2, 1e-8);
}

TEST(RescaleIdentities, WrongGeneratorIsDetected) {
  const auto sg = catalog_build(catalog::Rotation2d{1.0}).evaluator;
  ComplexVector x(2);
  x << 1.0, 0.0;
  const auto r = verify_rescale_identities(sg, 2.0 * sg.generator(), 0.0, 1.0, x, {});
  EXPECT_GT(r.residual1, 1e-2);
  EXPECT_GT(r.residual2, 1e-2);
}

TEST(Laplace, ZeroGeneratorGivesIdentity) {
  const auto sg = SemigroupEvaluator::from_dense(ComplexMatrix::Zero(2, 2));
  EXPECT_LE(norm_inf(laplace_resolvent(sg, 1.0, {}) - identity(2)), 1e-8);
}

TEST(Laplace, DiagonalScalarTransform) {
  const std::vector<Complex> d{Complex(-1.0, 2.0), Complex(0.5, 0.0), Complex(0.0, -3.0)};
  const auto sg = diag_sg(d);
  const Complex lam(1.5, 0.7);
  const ComplexMatrix r = laplace_resolvent(sg, lam, {});
  for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(r(k, k) - 1.0 / (lam - d[k])), 1e-8);
}

TEST(Laplace, RandomStableMatchesDirectSolve) {
  const auto sg = catalog_build(catalog::RandomStable{6, 42, -0.5}).evaluator;
  const ComplexMatrix a = sg.generator();
  const auto res = laplace_resolvent_detailed(sg, 2.0, {});
  const ComplexMatrix direct = (2.0 * identity(6) - a).partialPivLu().solve(identity(6));
  EXPECT_LE(norm_inf(res.resolvent - direct) / norm_inf(direct), 1e-6);
  EXPECT_LE(res.left_residual, 1e-8);
  EXPECT_LE(res.right_residual, 1e-8);
}

TEST(Laplace, TwoSidedResidualOnRandomStable) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto sg = catalog_build(catalog::RandomStable{4, seed, -0.2}).evaluator;
    const ComplexMatrix a = sg.generator();
    for (Complex lam : {Complex(0.5), Complex(1.0, 2.0)}) {
      const ComplexMatrix r = laplace_resolvent(sg, lam, {});
      const ComplexMatrix s = lam * identity(4) - a;
      EXPECT_LE(norm_inf(s * r - identity(4)), 1e-8);
      EXPECT_LE(norm_inf(r * s - identity(4)), 1e-8);
    }
  }
}

TEST(Laplace, ResolventIdentity) {
  const auto sg = catalog_build(catalog::RandomStable{5, 9, -0.5}).evaluator;
  const QuadratureConfig cfg;
  const Complex lam(1.0, 0.5), mu(2.0, -1.0);
  const ComplexMatrix rl = laplace_resolvent(sg, lam, cfg);
  const ComplexMatrix rm = laplace_resolvent(sg, mu, cfg);
  EXPECT_LE(norm_inf(rl - rm - (mu - lam) * rl * rm), 10 * cfg.tol);
}

TEST(Laplace, DivergenceAndProximityRaise) {
  const auto sg = diag_sg({Complex(1.0), Complex(-1.0)});
  EXPECT_THROW(laplace_resolvent(sg, 0.5, {}), NumericalError);
  EXPECT_THROW(laplace_resolvent(sg, 1.0, {}), NumericalError);
  // a supplied abscissa estimate is honored
  EXPECT_THROW(laplace_resolvent_detailed(sg, 2.0, {}, 3.0), NumericalError);
}

TEST(Laplace, FixedHorizonIsUsed) {
  const auto sg = diag_sg({Complex(-1.0)});
  QuadratureConfig cfg;
  cfg.laplace_horizon = 40.0;
  const auto res = laplace_resolvent_detailed(sg, 1.0, cfg);
  EXPECT_EQ(res.horizon, 40.0);
  EXPECT_NEAR(std::abs(res.resolvent(0, 0) - 0.5), 0.0, 1e-10);
}

TEST(Contour, ScalarResidue) {
  const Complex c(0.3, -0.2);
  const Complex got = contour_integral_circle([&](Complex z) { return 1.0 / (z - c); }, c, 0.7, 16);
  EXPECT_LE(std::abs(got - 1.0), 1e-14);
}

TEST(Contour, EntireFunctionVanishes) {
  const Complex got = contour_integral_circle([](Complex z) { return std::exp(z); }, 0.0, 1.0, 32);
  EXPECT_LE(std::abs(got), 1e-12);
}

TEST(Contour, ResolventGivesSpectralProjector) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(1, 1) = Complex(0.0, kTwoPi);
  auto resolvent = [&](Complex z) -> ComplexMatrix { return (z * identity(2) - a).inverse(); };
  const ComplexMatrix p = contour_integral_circle(resolvent, 0.0, 1.0, 64);
  EXPECT_LE(norm_inf(p - oracle::basis_projector(2, 0)), 1e-10);
}

TEST(Contour, NodeDoublingIsStable) {
  const ComplexMatrix a = random_matrix(4, 12);
  auto f = [&](Complex z) -> ComplexMatrix { return (z * identity(4) - a).inverse() * std::exp(z); };
  // circle around the whole spectrum with a wide margin
  double rad = 0.0;
  for (Complex z : eigenvalues(a)) rad = std::max(rad, std::abs(z));
  const ComplexMatrix c64 = contour_integral_circle(f, 0.0, rad + 2.0, 64);
  const ComplexMatrix c128 = contour_integral_circle(f, 0.0, rad + 2.0, 128);
  EXPECT_LE(norm_inf(c64 - c128), 1e-12);
  // and equals e^A
  EXPECT_LE(norm_inf(c128 - oracle::series_exp(a, 1.0)), 1e-12);
}

TEST(Contour, InvalidArguments) {
  auto f = [](Complex z) { return z; };
  EXPECT_THROW(contour_integral_circle(f, 0.0, 0.0, 16), ConfigError);
  EXPECT_THROW(contour_integral_circle(f, 0.0, 1.0, 4), ConfigError);
}

TEST(QuadratureConfig, Validation) {
  QuadratureConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.orbit_nodes = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.contour_nodes = 4;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_EQ(orbit_scheme_from_string("gauss"), OrbitScheme::gauss);
  EXPECT_THROW(orbit_scheme_from_string("romberg"), ConfigError);
}
