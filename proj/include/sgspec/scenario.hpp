#pragma once

// Scenario runner behind the command-line front end: loads a generator,
// runs the requested checks and renders a deterministic report.

#include <algorithm>
#include <cstdlib>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgspec/catalog.hpp"
#include "sgspec/charpoly_oracle.hpp"
#include "sgspec/hardy.hpp"
#include "sgspec/io.hpp"
#include "sgspec/mapping.hpp"
#include "sgspec/periodic.hpp"
#include "sgspec/quadrature.hpp"
#include "sgspec/spectra.hpp"

namespace sgspec::scenario {

using io::json;

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> ids{"analyze-spectrum",  "verify-identities", "periodic-projections",
                                            "point-mapping",     "residual-mapping",  "resolvent-mapping",
                                            "eigenspaces",       "hardy"};
  return ids;
}

enum class OutputFormat { json, csv };

struct ScenarioConfig {
  std::string generator_source;                 // file path or catalog:<id>?params
  std::optional<std::string> evaluator_source;  // pairs a different evaluator with the generator
  QuadratureConfig quadrature;
  std::vector<std::string> checks;
  std::vector<double> t_values{1.0};
  OutputFormat format = OutputFormat::json;
  std::uint64_t seed = 0;
  std::optional<double> t0;  // known period multiple for periodic-projections
  int threads = 1;

  void validate() const {
    if (checks.empty()) throw ConfigError("at least one check is required");
    for (const auto& c : checks)
      if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
        throw ConfigError("unknown check '" + c + "'");
    for (double t : t_values)
      if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t values must be finite and >= 0");
    if (t0 && !(*t0 > 0.0)) throw ConfigError("t0 must be > 0");
    quadrature.validate();
  }
};

struct CsvRow {
  double t = 0.0;
  std::string metric;
  double value = 0.0;
  bool pass = true;
};

struct CheckResult {
  std::string id;
  bool pass = false;
  bool numerical_failure = false;
  json details = json::object();
  std::vector<CsvRow> rows;
};

struct ScenarioResult {
  std::vector<CheckResult> checks;
  json header = json::object();

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  bool numerical_failure() const {
    return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.numerical_failure; });
  }
  // 0 all pass, 3 numerical failure, 1 check failure
  int exit_code() const { return numerical_failure() ? 3 : (all_pass() ? 0 : 1); }
};

struct Context {
  ScenarioConfig cfg;
  ComplexMatrix a;
  SemigroupEvaluator sg;
  GeneratorSpec spec;
  double tol;
};

namespace detail {

inline CheckResult start(std::string id) {
  CheckResult r;
  r.id = std::move(id);
  r.pass = true;
  return r;
}

inline void metric(CheckResult& r, double t, std::string name, double value, bool pass) {
  r.rows.push_back({t, std::move(name), value, pass});
  r.pass = r.pass && pass;
}

inline std::vector<double> positive(const std::vector<double>& ts) {
  std::vector<double> out;
  for (double t : ts)
    if (t > 0.0) out.push_back(t);
  return out;
}

inline CheckResult analyze_spectrum(const Context& c) {
  CheckResult r = start("analyze-spectrum");
  const auto d = decomposition_check(c.a, c.tol);
  r.details["spectra"] = io::spectrum_to_json(d.spectra);
  r.details["alg_vs_union"] = d.alg_vs_union;
  r.details["spectrum_vs_alg_union_t"] = d.spectrum_vs_alg_union_t;
  r.details["topological_empty"] = d.topological_empty;
  metric(r, 0.0, "alg_vs_approx_union_residual", d.alg_vs_union, d.alg_vs_union <= c.tol);
  metric(r, 0.0, "spectrum_vs_alg_union_topological", d.spectrum_vs_alg_union_t, d.spectrum_vs_alg_union_t <= c.tol);
  metric(r, 0.0, "residual_vs_point", d.residual_vs_point, d.residual_vs_point <= c.tol);
  metric(r, 0.0, "approximate_vs_point", d.approximate_vs_point, d.approximate_vs_point <= c.tol);
  metric(r, 0.0, "algebraic_vs_point", d.algebraic_vs_point, d.algebraic_vs_point <= c.tol);
  metric(r, 0.0, "residual_rank_vs_transpose", d.residual_vs_dual, d.residual_vs_dual <= c.tol);
  metric(r, 0.0, "topological_count", static_cast<double>(d.spectra.topological.size()), d.topological_empty);
  if (c.a.rows() <= 6) {
    // informational: multiple roots limit the oracle's accuracy
    try {
      r.details["charpoly_oracle_distance"] = hausdorff(eigenvalues(c.a), brute_force_eigen_oracle(c.a));
    } catch (const NumericalError& e) {
      r.details["charpoly_oracle_distance"] = e.what();
    }
  }
  return r;
}

inline CheckResult verify_identities(const Context& c) {
  CheckResult r = start("verify-identities");
  Rng rng(c.cfg.seed);
  const ComplexVector x = random_vector(c.a.rows(), rng);
  const std::vector<Complex> lambdas{Complex(0.0), Complex(1.0), Complex(0.3, 0.1)};
  json entries = json::array();
  for (double t : c.cfg.t_values)
    for (Complex lam : lambdas) {
      const auto res = verify_rescale_identities(c.sg, c.a, lam, t, x, c.cfg.quadrature);
      const bool ok1 = res.residual1 <= c.tol, ok2 = res.residual2 <= c.tol;
      entries.push_back({{"t", t},
                         {"lambda", io::to_json(lam)},
                         {"residual_operator_outside", res.residual1},
                         {"residual_operator_inside", res.residual2},
                         {"failed", json::array()}});
      if (!ok1) entries.back()["failed"].push_back("operator_outside_integral");
      if (!ok2) entries.back()["failed"].push_back("operator_inside_integral");
      metric(r, t, "residual_operator_outside@" + io::format_double(lam.real()) + "," + io::format_double(lam.imag()),
             res.residual1, ok1);
      metric(r, t, "residual_operator_inside@" + io::format_double(lam.real()) + "," + io::format_double(lam.imag()),
             res.residual2, ok2);
    }
  r.details["x_seed"] = c.cfg.seed;
  r.details["entries"] = entries;
  return r;
}

// Smallest common period of the purely imaginary spectrum, if any.
inline std::optional<double> infer_period_multiple(const ComplexMatrix& a, double tol) {
  const double scale = spectral_scale(a);
  std::vector<double> freqs;
  for (Complex z : point_spectrum_values(a, tol)) {
    if (std::abs(z.real()) > tol * scale) return std::nullopt;
    if (std::abs(z.imag()) > tol * scale) freqs.push_back(std::abs(z.imag()));
  }
  if (freqs.empty()) return 1.0;
  const double base = *std::min_element(freqs.begin(), freqs.end());
  for (int q = 1; q <= 12; ++q) {
    const double w0 = base / q;
    const bool ok = std::all_of(freqs.begin(), freqs.end(), [&](double w) {
      return std::abs(w / w0 - std::round(w / w0)) <= 1e-9 * std::max(1.0, w / w0);
    });
    if (ok) return kTwoPi / w0;
  }
  return std::nullopt;
}

inline CheckResult periodic_projections(const Context& c) {
  CheckResult r = start("periodic-projections");
  const auto t0 = c.cfg.t0 ? c.cfg.t0 : infer_period_multiple(c.a, c.tol);
  if (!t0) {
    r.details["note"] = "spectrum is not contained in a lattice i*w0*Z; no period candidate (pass --t0)";
    metric(r, 0.0, "period_found", 0.0, false);
    return r;
  }
  double period = 0.0;
  try {
    period = detect_period(c.sg, *t0, 8, c.tol);
  } catch (const ConfigError& e) {
    r.details["note"] = std::string("not periodic: ") + e.what();
    metric(r, *t0, "period_found", 0.0, false);
    return r;
  }
  r.details["t0"] = *t0;
  r.details["period"] = period;
  if (period == 0.0) {
    // T(t) = I: any rho > 0 is a period, the family is {P_0 = I}
    r.details["note"] = "trivial semigroup (period 0); family {P_0 = I}";
    period = 1.0;
  }
  metric(r, 0.0, "period", period, true);

  const ProjectionFamily fam = build_projection_family(c.sg, period, c.cfg.quadrature, c.tol);
  r.details["family"] = io::family_to_json(fam);
  const auto checks = projection_family_checks(fam, c.a, c.tol, &c.sg);
  json fails = json::array();
  double worst = 0.0;
  for (const auto& it : checks.items) {
    worst = std::max(worst, it.value);
    if (!it.pass) fails.push_back({{"check", it.name}, {"n", it.n}, {"j", it.j}, {"value", it.value}});
  }
  r.details["family_failures"] = fails;
  r.details["kernel_dims"] = checks.kernel_dims;
  metric(r, 0.0, "family_checks_max", worst, checks.pass);

  QuadratureConfig qc = c.cfg.quadrature;
  if (qc.contour_radius >= kTwoPi / period) {
    qc.contour_radius = 0.5 * kTwoPi / period;
    r.details["contour_radius_clamped"] = qc.contour_radius;
  }
  double residue_gap = 0.0;
  for (const auto& e : fam.entries) {
    const auto coeffs = laurent_coefficients(c.sg, period, e.n, -1, qc);
    residue_gap = std::max(residue_gap, norm_inf(coeffs[0] - e.p));
  }
  metric(r, 0.0, "residue_vs_average", residue_gap, residue_gap <= c.tol);

  double worst_t = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double t = 2.0 * period * j / 9.0;
    worst_t = std::max(worst_t, norm_inf(fourier_reconstruct_T(fam, t) - c.sg.operator_at(t)));
  }
  for (double t : c.cfg.t_values) {
    const double e = norm_inf(fourier_reconstruct_T(fam, t) - c.sg.operator_at(t));
    metric(r, t, "fourier_T", e, e <= c.tol);
  }
  metric(r, 0.0, "fourier_T_grid", worst_t, worst_t <= c.tol);
  const double ea = norm_inf(fourier_reconstruct_A(fam) - c.a);
  metric(r, 0.0, "fourier_A", ea, ea <= c.tol);
  return r;
}

inline CheckResult point_mapping(const Context& c) {
  CheckResult r = start("point-mapping");
  const auto rep = point_mapping_check(c.a, c.sg, c.cfg.t_values, c.tol);
  const auto inc = inclusion_checks(c.a, c.sg, c.cfg.t_values, c.tol);
  r.details["mapping"] = io::mapping_to_json(rep);
  r.details["inclusion"] = io::mapping_to_json(inc);
  for (const auto& row : rep.rows) metric(r, row.t, "hausdorff", row.hausdorff, row.pass);
  for (const auto& row : inc.rows) metric(r, row.t, "inclusion_" + row.variant, row.hausdorff, row.pass);
  // e^{tA} is invertible, so removing 0 from sigma_p(T(t)) may only drop
  // eigenvalues that decayed below tol, never a genuine zero
  const auto sigma_a = point_spectrum_values(c.a, c.tol);
  for (double t : c.cfg.t_values) {
    int removed = 0, expected = 0;
    for (Complex z : point_spectrum_values(c.sg.operator_at(t), c.tol)) removed += std::abs(z) <= c.tol;
    for (Complex z : sigma_a) expected += std::abs(std::exp(t * z)) <= c.tol;
    metric(r, t, "zero_exclusion_removed", removed, removed <= expected);
  }
  return r;
}

inline CheckResult residual_mapping(const Context& c) {
  CheckResult r = start("residual-mapping");
  const auto rep = residual_mapping_check(c.a, c.sg, c.cfg.t_values, c.tol);
  r.details["mapping"] = io::mapping_to_json(rep);
  for (const auto& row : rep.rows) metric(r, row.t, row.variant == "dual" ? "rank_vs_transpose" : "hausdorff", row.hausdorff, row.pass);
  return r;
}

inline CheckResult resolvent_mapping(const Context& c) {
  CheckResult r = start("resolvent-mapping");
  const double base = norm_inf(c.a) + 1.0;
  json entries = json::array();
  for (Complex lam : {Complex(base, 0.0), Complex(base, 0.5)}) {
    const auto rep = resolvent_map_check(c.a, lam, c.tol);
    entries.push_back({{"lambda", io::to_json(lam)},
                       {"resolvent_point", io::to_json(sorted_set(rep.resolvent_point))},
                       {"mapped", io::to_json(rep.mapped)},
                       {"hausdorff", rep.hausdorff},
                       {"max_kernel_angle", rep.max_kernel_angle}});
    metric(r, 0.0, "hausdorff@" + io::format_double(lam.imag()), rep.hausdorff, rep.hausdorff <= c.tol);
    metric(r, 0.0, "kernel_angle@" + io::format_double(lam.imag()), rep.max_kernel_angle, rep.max_kernel_angle <= c.tol);
  }
  r.details["entries"] = entries;
  return r;
}

inline CheckResult eigenspaces(const Context& c) {
  CheckResult r = start("eigenspaces");
  json inter = json::array(), uni = json::array();
  const auto grid = default_intersection_grid();
  for (Complex lam : point_spectrum_values(c.a, c.tol)) {
    const auto rep = eigenspace_intersection_check(c.a, c.sg, lam, grid, c.tol);
    inter.push_back({{"lambda", io::to_json(lam)}, {"eigenspace_dim", rep.lhs_dim},
                     {"intersection_dim", rep.rhs_dim}, {"angle", rep.angle}});
    metric(r, 0.0, "intersection_angle", rep.angle, rep.pass);
    for (double t : positive(c.cfg.t_values)) {
      const int n_max = default_n_max(c.a, t);
      const auto u = eigenspace_union_check(c.a, c.sg, lam, t, n_max, c.tol);
      uni.push_back({{"lambda", io::to_json(lam)}, {"t", t}, {"n_max", n_max},
                     {"kernel_dim", u.lhs_dim}, {"union_dim", u.rhs_dim}, {"angle", u.angle}});
      metric(r, t, "union_angle", u.angle, u.pass);
    }
  }
  r.details["t_grid"] = grid;
  r.details["intersection"] = inter;
  r.details["union"] = uni;
  return r;
}

inline CheckResult hardy_check(const Context& c) {
  CheckResult r = start("hardy");
  int degree = 8;
  if (const auto* e = std::get_if<catalog::Entry>(&c.spec))
    if (const auto* d = std::get_if<catalog::DiscRotation>(e)) degree = d->degree;
  r.details["label"] = std::string(hardy::kModelLabel) + ", degree N = " + std::to_string(degree);
  r.details["degree"] = degree;

  const auto spec = hardy::verify_hardy_spectrum(degree, c.tol);
  r.details["eigenvalues"] = io::to_json(spec.eigenvalues);
  metric(r, 0.0, "spectrum_distance", spec.spectrum_distance, spec.spectrum_distance <= c.tol);
  metric(r, 0.0, "eigenvector_angle", spec.max_eigenvector_angle, spec.max_eigenvector_angle <= c.tol);
  metric(r, 0.0, "one_dimensional", spec.all_one_dimensional ? 1.0 : 0.0, spec.all_one_dimensional);

  Rng rng(c.cfg.seed);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto g = hardy::DiscFunction::from_coeffs(random_vector(degree + 1, rng));
    for (int n = 0; n <= degree; ++n)
      worst = std::max(worst, hardy::hardy_projection_check(degree, n, g, c.cfg.quadrature, c.tol).error);
  }
  metric(r, 0.0, "projection_error", worst, worst <= c.tol);

  std::vector<double> radii;
  for (int k = 0; k < 10; ++k) radii.push_back(0.1 * k);
  const auto nu = hardy::WeightFunction::polar_grid(radii, 16, [](Complex z) { return 1.0 - std::abs(z); });
  const auto sn = hardy::weighted_seminorm(hardy::DiscFunction::monomial(degree, 1), nu);
  r.details["seminorm_z_weight_1_minus_r"] = {{"value", sn.value}, {"samples", sn.samples}, {"lower_bound", true}};
  return r;
}

inline CheckResult run_one(const Context& c, const std::string& id) {
  try {
    if (id == "analyze-spectrum") return analyze_spectrum(c);
    if (id == "verify-identities") return verify_identities(c);
    if (id == "periodic-projections") return periodic_projections(c);
    if (id == "point-mapping") return point_mapping(c);
    if (id == "residual-mapping") return residual_mapping(c);
    if (id == "resolvent-mapping") return resolvent_mapping(c);
    if (id == "eigenspaces") return eigenspaces(c);
    if (id == "hardy") return hardy_check(c);
  } catch (const NumericalError& e) {
    CheckResult r = start(id);
    r.pass = false;
    r.numerical_failure = true;
    r.details["error"] = e.what();
    return r;
  }
  throw ConfigError("unknown check '" + id + "'");
}

}  // namespace detail

/// Runs every requested check. Checks may run concurrently (cfg.threads);
/// results keep the requested order.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  auto loaded = io::load_generator(cfg.generator_source);
  SemigroupEvaluator sg = loaded.evaluator;
  if (cfg.evaluator_source)
    sg = io::load_generator(*cfg.evaluator_source).evaluator.with_declared_generator(loaded.evaluator.generator());
  const Context ctx{cfg, loaded.evaluator.generator(), sg, loaded.spec, cfg.quadrature.tol};

  ScenarioResult res;
  res.header["version"] = 1;
  res.header["generator"] = {{"source", cfg.generator_source},
                             {"dim", ctx.a.rows()},
                             {"spec", io::generator_spec_to_json(loaded.spec)},
                             {"strategy", to_string(loaded.evaluator.strategy())}};
  if (const auto* e = std::get_if<catalog::Entry>(&loaded.spec))
    if (const auto* d = std::get_if<catalog::DiscRotation>(e))
      res.header["generator"]["truncation"] = "degree N = " + std::to_string(d->degree);
  if (cfg.evaluator_source) res.header["evaluator_source"] = *cfg.evaluator_source;
  res.header["quadrature"] = io::quadrature_to_json(cfg.quadrature);
  res.header["t"] = cfg.t_values;
  res.header["seed"] = cfg.seed;

  res.checks.resize(cfg.checks.size());
  const auto threads = static_cast<std::size_t>(std::max(1, cfg.threads));
  for (std::size_t start = 0; start < cfg.checks.size(); start += threads) {
    std::vector<std::future<CheckResult>> batch;
    const std::size_t end = std::min(cfg.checks.size(), start + threads);
    for (std::size_t i = start; i < end; ++i)
      batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                 [&ctx, id = cfg.checks[i]] { return detail::run_one(ctx, id); }));
    for (std::size_t i = start; i < end; ++i) res.checks[i] = batch[i - start].get();
  }
  return res;
}

inline std::string render_json(const ScenarioResult& res) {
  json out = res.header;
  json checks = json::array();
  for (const auto& c : res.checks) {
    json metrics = json::array();
    for (const auto& row : c.rows)
      metrics.push_back({{"t", row.t}, {"metric", row.metric}, {"value", row.value}, {"verdict", io::verdict(row.pass)}});
    checks.push_back({{"id", c.id},
                      {"verdict", c.numerical_failure ? "error" : io::verdict(c.pass)},
                      {"metrics", metrics},
                      {"details", c.details}});
  }
  out["checks"] = checks;
  out["verdict"] = io::verdict(res.all_pass());
  return out.dump(2) + "\n";
}

// check,t,metric,value,verdict sorted by (check, t); stable within a key.
inline std::string render_csv(const ScenarioResult& res) {
  struct Line {
    std::string check;
    double t;
    std::string text;
  };
  std::vector<Line> lines;
  for (const auto& c : res.checks) {
    if (c.numerical_failure) lines.push_back({c.id, 0.0, c.id + ",0,error,nan,error"});
    for (const auto& row : c.rows)
      lines.push_back({c.id, row.t,
                       c.id + "," + io::format_double(row.t) + "," + row.metric + "," + io::format_double(row.value) +
                           "," + io::verdict(row.pass)});
  }
  std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.check != b.check ? a.check < b.check : a.t < b.t;
  });
  std::string out = "check,t,metric,value,verdict\n";
  for (const auto& l : lines) out += l.text + "\n";
  return out;
}

inline std::string render(const ScenarioResult& res, OutputFormat f) {
  return f == OutputFormat::json ? render_json(res) : render_csv(res);
}

/// Writes the rendered report; "-" means stdout.
inline void emit_report(const ScenarioResult& res, OutputFormat f, const std::string& path, std::ostream& stdout_stream) {
  if (res.checks.empty()) throw ConfigError("emit_report: no results");
  const std::string text = render(res, f);
  if (path.empty() || path == "-") {
    stdout_stream << text;
    return;
  }
  io::write_atomically(path, text);
}

inline int threads_from_env(int fallback = 1) {
  if (const char* v = std::getenv("SGSPEC_THREADS")) {
    try {
      const int n = std::stoi(v);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

}  // namespace sgspec::scenario
