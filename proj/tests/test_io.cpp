#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "sgspec/io.hpp"

using namespace sgspec;
using io::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sgspec_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(IoJson, ComplexIsTwoElementArray) {
  EXPECT_EQ(io::to_json(Complex(1.5, -2.0)).dump(), "[1.5,-2.0]");
  EXPECT_EQ(io::complex_from_json(json::parse("[0.25, 3]")), Complex(0.25, 3.0));
  EXPECT_THROW(io::complex_from_json(json::parse("[1]")), ConfigError);
  EXPECT_THROW(io::complex_from_json(json::parse("\"x\"")), ConfigError);
}

TEST(IoJson, GeneratorRoundTrip) {
  const ComplexMatrix a = random_matrix(3, 4);
  const json j = io::generator_to_json(a);
  EXPECT_EQ(j["dim"], 3);
  EXPECT_EQ(io::generator_from_json(j), a);
}

TEST(IoJson, GeneratorValidation) {
  EXPECT_THROW(io::generator_from_json(json::parse(R"({"dim": 2, "matrix": [[[0,0],[1,0]]]})")), ConfigError);
  EXPECT_THROW(io::generator_from_json(json::parse(R"({"dim": 1})")), ConfigError);
  EXPECT_THROW(io::generator_from_json(json::parse(R"({"dim": 0, "matrix": []})")), ConfigError);
}

TEST(IoJson, CatalogSpecRoundTrip) {
  for (const auto& e : standard_catalog()) {
    const json j = io::catalog_to_json(e);
    EXPECT_EQ(io::catalog_to_json(io::catalog_from_json(j)), j) << describe(e);
  }
  EXPECT_THROW(io::catalog_from_json(json::parse(R"({"catalog": "spiral", "params": {}})")), ConfigError);
  EXPECT_THROW(io::catalog_from_json(json::parse(R"({"catalog": "rotation2d", "params": {"omega": -1}})")), ConfigError);
}

TEST(IoJson, CatalogUri) {
  const auto e = io::parse_catalog_uri("catalog:diagonal?entries=0:0,0:6.5");
  const auto& d = std::get<catalog::Diagonal>(e);
  ASSERT_EQ(d.entries.size(), 2u);
  EXPECT_EQ(d.entries[1], Complex(0.0, 6.5));
  EXPECT_EQ(std::get<catalog::DiscRotation>(io::parse_catalog_uri("catalog:disc_rotation?N=4")).degree, 4);
  EXPECT_EQ(std::get<catalog::RandomStable>(io::parse_catalog_uri("catalog:random_stable?dim=6&seed=42&a=-0.5")).seed, 42u);
  EXPECT_THROW(io::parse_catalog_uri("catalog:nilpotent_shift?dim=2.5"), ConfigError);
  EXPECT_THROW(io::parse_catalog_uri("catalog:rotation2d?omega"), ConfigError);
}

TEST(IoJson, QuadratureConfig) {
  const auto c = io::quadrature_from_json(json::parse(
      R"({"orbit_nodes":512,"orbit_scheme":"simpson","laplace_horizon":"auto","laplace_tail_tol":1e-10,"contour_nodes":64,"contour_radius":0.5,"tol":1e-8})"));
  EXPECT_EQ(c.orbit_nodes, 512);
  EXPECT_FALSE(c.laplace_horizon.has_value());
  EXPECT_EQ(io::quadrature_to_json(c), io::quadrature_to_json(QuadratureConfig{}));
  const auto h = io::quadrature_from_json(json::parse(R"({"laplace_horizon": 30, "orbit_scheme": "gauss"})"));
  EXPECT_EQ(*h.laplace_horizon, 30.0);
  EXPECT_EQ(h.orbit_scheme, OrbitScheme::gauss);
  EXPECT_THROW(io::quadrature_from_json(json::parse(R"({"contour_nodes": 4})")), ConfigError);
  EXPECT_THROW(io::quadrature_from_json(json::parse(R"({"tol": "small"})")), ConfigError);
}

TEST(IoJson, SpectrumReportIsSorted) {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = Complex(2, 0);
  a(1, 1) = Complex(-1, 1);
  a(2, 2) = Complex(-1, -1);
  const json j = io::spectrum_to_json(spectrum_report(a, 1e-8));
  ASSERT_EQ(j["point"].size(), 3u);
  EXPECT_EQ(j["point"][0]["lambda"], json::parse("[-1.0,-1.0]"));
  EXPECT_EQ(j["point"][2]["mult"], 1);
  EXPECT_EQ(j["residual"].size(), 3u);
  EXPECT_TRUE(j["topological"].empty());
}

TEST(IoJson, ProjectionFamilyRoundTrip) {
  const auto sg = catalog_build(catalog::Rotation2d{1.0}).evaluator;
  const auto fam = build_projection_family(sg, kTwoPi, {}, 1e-8);
  const json j = io::family_to_json(fam);
  EXPECT_EQ(j["entries"][0]["n"], -1);
  const auto back = io::family_from_json(j);
  ASSERT_EQ(back.entries.size(), fam.entries.size());
  EXPECT_EQ(back.m, 1);
  for (std::size_t k = 0; k < fam.entries.size(); ++k) EXPECT_EQ(back.entries[k].p, fam.entries[k].p);
}

TEST(IoCsv, MappingReportColumns) {
  const auto sg = SemigroupEvaluator::from_dense(ComplexMatrix::Zero(1, 1));
  const auto rep = point_mapping_check(sg.generator(), sg, {0.5, 1.0}, 1e-8);
  const std::string csv = io::mapping_to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theorem_id,t,hausdorff,verdict");
  EXPECT_NE(csv.find("point-mapping:point,0.5,0,pass"), std::string::npos);
}

TEST(IoCsv, WeightGridRoundTrip) {
  const auto w = hardy::WeightFunction::polar_grid({0.0, 0.5}, 4, [](Complex z) { return 1.0 - std::abs(z); });
  const auto back = io::weight_from_csv(io::weight_to_csv(w));
  ASSERT_EQ(back.samples.size(), w.samples.size());
  for (std::size_t k = 0; k < w.samples.size(); ++k) {
    EXPECT_LE(std::abs(back.samples[k].z - w.samples[k].z), 1e-15);
    EXPECT_EQ(back.samples[k].value, w.samples[k].value);
  }
  EXPECT_THROW(io::weight_from_csv("r,theta,value\n1.5,0,1\n"), ConfigError);
  EXPECT_THROW(io::weight_from_csv("r,theta,value\n0.5,0\n"), ConfigError);
}

TEST(IoJson, DiscFunctionRoundTrip) {
  ComplexVector c(3);
  c << 1.0, 2.0, Complex(0.0, 3.0);
  const auto f = hardy::DiscFunction::from_coeffs(c);
  const json j = io::disc_function_to_json(f);
  EXPECT_EQ(j["degree"], 2);
  EXPECT_EQ(io::disc_function_from_json(j).coeffs, c);
  EXPECT_THROW(io::disc_function_from_json(json::parse(R"({"degree": 3, "coeffs": [[1,0]]})")), ConfigError);
}

TEST(IoFiles, LoadGeneratorSources) {
  const auto dense = scratch("dense.json");
  write_text(dense, R"({"dim": 2, "matrix": [[[0,0],[-1,0]],[[1,0],[0,0]]]})");
  const auto a = io::load_generator(dense.string());
  EXPECT_EQ(a.evaluator.strategy(), EvaluationStrategy::matrix_exponential);
  EXPECT_EQ(a.evaluator.generator()(0, 1), Complex(-1.0));

  const auto cat = scratch("catalog.json");
  write_text(cat, R"({"catalog": "disc_rotation", "params": {"N": 2}})");
  EXPECT_EQ(io::load_generator(cat.string()).evaluator.dim(), 3);
  EXPECT_EQ(io::load_generator("catalog:rotation2d?omega=2").evaluator.generator()(1, 0), Complex(2.0));

  EXPECT_THROW(io::load_generator(scratch("missing.json").string()), IoError);
  const auto bad = scratch("bad.json");
  write_text(bad, "{ not json");
  EXPECT_THROW(io::load_generator(bad.string()), ConfigError);
}

TEST(IoFiles, AtomicWrite) {
  const auto p = scratch("report.txt");
  io::write_atomically(p.string(), "first\n");
  io::write_atomically(p.string(), "second\n");
  std::ifstream in(p);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(s, "second\n");
  EXPECT_FALSE(std::filesystem::exists(p.string() + ".tmp"));
  EXPECT_THROW(io::write_atomically("/nonexistent-dir/x/report.json", "x"), IoError);
}

TEST(IoFormat, DoublesRoundTrip) {
  for (double v : {0.1, kPi, -1e-300, 12345.678}) EXPECT_EQ(std::stod(io::format_double(v)), v);
}
