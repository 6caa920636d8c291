#include <gtest/gtest.h>

#include "sgspec/catalog.hpp"
#include "sgspec/mapping.hpp"

using namespace sgspec;

namespace {

constexpr double kTol = 1e-8;

CatalogBuild build(const catalog::Entry& e) { return catalog_build(e); }

SemigroupEvaluator zero_sg(int n) { return SemigroupEvaluator::from_dense(ComplexMatrix::Zero(n, n)); }

const catalog::Entry kCollision = catalog::Diagonal{{Complex(0.0), Complex(0.0, kTwoPi)}};

}  // namespace

TEST(PointMapping, ZeroGenerator) {
  const auto sg = zero_sg(3);
  const auto rep = point_mapping_check(sg.generator(), sg, {1.0}, kTol);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.theorem_id, "point-mapping");
  EXPECT_LE(hausdorff(rep.rows[0].lhs, {1.0}), 1e-15);
}

TEST(PointMapping, DiscRotationExponentiates) {
  const auto b = build(catalog::DiscRotation{3});
  const auto rep = point_mapping_check(b.evaluator.generator(), b.evaluator, {1.0}, kTol);
  std::vector<Complex> want;
  for (int k = 0; k < 4; ++k) want.push_back(std::exp(Complex(0.0, k)));
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(hausdorff(rep.rows[0].lhs, want), 1e-14);
  EXPECT_LE(hausdorff(rep.rows[0].rhs, want), 1e-14);
}

TEST(PointMapping, LatticeCollisionUsesSetSemantics) {
  const auto b = build(kCollision);
  const auto rep = point_mapping_check(b.evaluator.generator(), b.evaluator, {1.0}, kTol);
  EXPECT_TRUE(rep.pass);
  ASSERT_EQ(rep.rows[0].lhs.size(), 1u);
  ASSERT_EQ(rep.rows[0].rhs.size(), 1u);
  EXPECT_LE(std::abs(rep.rows[0].lhs[0] - 1.0), 1e-12);
}

TEST(PointMapping, EveryCatalogEntryAndTime) {
  for (const auto& entry : standard_catalog()) {
    const auto b = build(entry);
    const auto rep = point_mapping_check(b.evaluator.generator(), b.evaluator, {0.3, 1.0, kPi}, kTol);
    EXPECT_TRUE(rep.pass) << describe(entry);
    for (const auto& row : rep.rows) EXPECT_LE(row.hausdorff, kTol) << describe(entry) << " t=" << row.t;
    // verdict agrees with the rows
    bool all = true;
    for (const auto& row : rep.rows) all = all && row.hausdorff <= rep.tol;
    EXPECT_EQ(rep.pass, all);
  }
}

TEST(PointMapping, ZeroNeverInSemigroupSpectrum) {
  for (const auto& entry : standard_catalog()) {
    const auto sg = build(entry).evaluator;
    for (double t : {0.3, 1.0, kPi})
      for (Complex z : point_spectrum_values(sg.operator_at(t), kTol)) EXPECT_GT(std::abs(z), kTol) << describe(entry);
  }
}

TEST(PointMapping, MismatchedPairFails) {
  const auto sg = build(catalog::Rotation2d{1.0}).evaluator;
  const auto rep = point_mapping_check(2.0 * sg.generator(), sg, {1.0}, kTol);
  EXPECT_FALSE(rep.pass);
}

TEST(Inclusion, ZeroGenerator) {
  const auto sg = zero_sg(2);
  const auto rep = inclusion_checks(sg.generator(), sg, {1.0}, kTol);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.rows.size(), 3u);
}

TEST(Inclusion, NilpotentUnipotent) {
  const auto sg = build(catalog::NilpotentShift{3}).evaluator;
  const auto rep = inclusion_checks(sg.generator(), sg, {1.0}, kTol);
  EXPECT_TRUE(rep.pass);
  for (const auto& row : rep.rows) EXPECT_LE(hausdorff(row.rhs, {1.0}), 1e-12) << row.variant;
}

TEST(Inclusion, RandomGenerator) {
  const auto sg = SemigroupEvaluator::from_dense(random_matrix(5, 77));
  EXPECT_TRUE(inclusion_checks(sg.generator(), sg, {0.7}, kTol).pass);
}

TEST(Inclusion, ImpliedByPointMapping) {
  Rng rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sg = SemigroupEvaluator::from_dense(random_matrix(4, rng));
    const std::vector<double> ts{0.2, 0.9};
    if (point_mapping_check(sg.generator(), sg, ts, kTol).pass) {
      EXPECT_TRUE(inclusion_checks(sg.generator(), sg, ts, kTol).pass);
    }
  }
  for (const auto& entry : standard_catalog()) {
    const auto sg = build(entry).evaluator;
    if (point_mapping_check(sg.generator(), sg, {1.0}, kTol).pass) {
      EXPECT_TRUE(inclusion_checks(sg.generator(), sg, {1.0}, kTol).pass) << describe(entry);
    }
  }
}

TEST(ResidualMapping, SmallCases) {
  const auto z = zero_sg(2);
  EXPECT_TRUE(residual_mapping_check(z.generator(), z, {1.0}, kTol).pass);
  const auto d = build(catalog::Diagonal{{1.0, 2.0}}).evaluator;
  const auto rep = residual_mapping_check(d.generator(), d, {1.0}, kTol);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(hausdorff(rep.rows.back().lhs, {std::exp(1.0), std::exp(2.0)}), 1e-12);
}

TEST(ResidualMapping, RandomAndCatalog) {
  const auto sg = SemigroupEvaluator::from_dense(random_matrix(6, 91));
  EXPECT_TRUE(residual_mapping_check(sg.generator(), sg, {0.5}, kTol).pass);
  for (const auto& entry : standard_catalog()) {
    const auto s = build(entry).evaluator;
    const auto rep = residual_mapping_check(s.generator(), s, {0.3, 1.0, kPi}, kTol);
    EXPECT_TRUE(rep.pass) << describe(entry);
    EXPECT_EQ(rep.rows.front().variant, "dual");
  }
}

TEST(EigenspaceIntersection, ZeroGeneratorFullSpace) {
  const auto sg = zero_sg(3);
  const auto r = eigenspace_intersection_check(sg.generator(), sg, 0.0, default_intersection_grid(), kTol);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.lhs_dim, 3);
  EXPECT_EQ(r.rhs_dim, 3);
}

TEST(EigenspaceIntersection, SingleTimeAliases) {
  const auto sg = build(kCollision).evaluator;
  const auto single = eigenspace_intersection_check(sg.generator(), sg, 0.0, {1.0}, kTol);
  EXPECT_EQ(single.lhs_dim, 1);
  EXPECT_EQ(single.rhs_dim, 2);
  EXPECT_FALSE(single.pass);
  EXPECT_FALSE(single.note.empty());
  const auto two = eigenspace_intersection_check(sg.generator(), sg, 0.0, {1.0, 1.0 / std::sqrt(2.0)}, kTol);
  EXPECT_EQ(two.rhs_dim, 1);
  EXPECT_TRUE(two.pass);
}

TEST(EigenspaceIntersection, Rotation) {
  const auto sg = build(catalog::Rotation2d{1.0}).evaluator;
  const auto r = eigenspace_intersection_check(sg.generator(), sg, Complex(0, 1), {1.0, std::sqrt(2.0)}, kTol);
  EXPECT_EQ(r.lhs_dim, 1);
  EXPECT_EQ(r.rhs_dim, 1);
  EXPECT_LE(r.angle, kTol);
}

TEST(EigenspaceIntersection, NonEigenvalueRejected) {
  const auto sg = build(catalog::Rotation2d{1.0}).evaluator;
  EXPECT_THROW(eigenspace_intersection_check(sg.generator(), sg, 0.5, {1.0}, kTol), ConfigError);
}

TEST(EigenspaceUnion, ZeroGenerator) {
  const auto sg = zero_sg(2);
  const auto r = eigenspace_union_check(sg.generator(), sg, 0.0, 1.0, 1, kTol);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.lhs_dim, 2);
}

TEST(EigenspaceUnion, CollisionSpansPlane) {
  const auto sg = build(kCollision).evaluator;
  const auto r = eigenspace_union_check(sg.generator(), sg, 0.0, 1.0, 1, kTol);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.lhs_dim, 2);
  EXPECT_EQ(r.rhs_dim, 2);
}

TEST(EigenspaceUnion, DiscRotationFullTurnCollectsEveryMonomial) {
  const auto sg = build(catalog::DiscRotation{4}).evaluator;
  const double t = kTwoPi;
  const auto r = eigenspace_union_check(sg.generator(), sg, Complex(0, 1), t, default_n_max(sg.generator(), t), kTol);
  // e^{2 pi i n} = 1 for every n: all five monomials
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.lhs_dim, 5);
}

TEST(EigenspaceUnion, TooSmallNmaxRaises) {
  const auto sg = build(catalog::DiscRotation{4}).evaluator;
  EXPECT_THROW(eigenspace_union_check(sg.generator(), sg, 0.0, kTwoPi, 1, kTol), ConfigError);
}

TEST(EigenspaceUnion, DimensionMatchesLatticeCount) {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sg = SemigroupEvaluator::from_dense(random_matrix(4, rng));
    const ComplexMatrix a = sg.generator();
    for (Complex lam : point_spectrum_values(a, kTol)) {
      const double t = 0.8;
      const int n_max = default_n_max(a, t);
      const auto r = eigenspace_union_check(a, sg, lam, t, n_max, kTol);
      int expected = 0;
      for (int n = -n_max; n <= n_max; ++n)
        expected += static_cast<int>(null_space(shifted(a, lam + Complex(0, kTwoPi * n / t)), kTol * spectral_scale(a)).cols());
      EXPECT_EQ(r.lhs_dim, expected);
      EXPECT_TRUE(r.pass);
    }
  }
}

TEST(MappingReport, TimesAreRecorded) {
  const auto sg = zero_sg(1);
  const auto rep = point_mapping_check(sg.generator(), sg, {0.3, 1.0}, kTol);
  EXPECT_EQ(rep.t_values(), (std::vector<double>{0.3, 1.0}));
}
