#pragma once

// File formats. Complex numbers are always two-element arrays [re, im];
// matrices are row-major nested arrays.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgspec/catalog.hpp"
#include "sgspec/hardy.hpp"
#include "sgspec/mapping.hpp"
#include "sgspec/periodic.hpp"
#include "sgspec/quadrature.hpp"
#include "sgspec/spectra.hpp"

namespace sgspec::io {

using nlohmann::json;

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("expected a complex number [re, im], got " + j.dump());
  Complex z(j[0].get<double>(), j[1].get<double>());
  if (!is_finite(z)) throw ConfigError("complex number must be finite");
  return z;
}

inline json to_json(const std::vector<Complex>& v) {
  json a = json::array();
  for (Complex z : v) a.push_back(to_json(z));
  return a;
}

inline json vector_to_json(const ComplexVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline ComplexVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of complex numbers");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline json rows_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix rows_from_json(const json& rows, Eigen::Index dim) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim)
    throw ConfigError("matrix must have " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      throw ConfigError("matrix row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    for (Eigen::Index k = 0; k < dim; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

// {"dim": n, "matrix": [[[re,im],...],...]}
inline json generator_to_json(const ComplexMatrix& a) {
  return json{{"dim", a.rows()}, {"matrix", rows_to_json(a)}};
}

inline ComplexMatrix generator_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("matrix"))
    throw ConfigError("generator JSON needs \"dim\" and \"matrix\"");
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1)
    throw ConfigError("generator JSON: dim must be a positive integer");
  return rows_from_json(j["matrix"], j["dim"].get<Eigen::Index>());
}

// {"catalog": "<id>", "params": {...}}
inline catalog::Entry catalog_from_json(const json& j) {
  using namespace catalog;
  if (!j.is_object() || !j.contains("catalog") || !j["catalog"].is_string())
    throw ConfigError("catalog JSON needs a string \"catalog\" field");
  const std::string id = j["catalog"].get<std::string>();
  const json params = j.value("params", json::object());
  auto num = [&](const char* key) -> double {
    if (!params.contains(key) || !params[key].is_number())
      throw ConfigError("catalog " + id + ": missing numeric param '" + key + "'");
    return params[key].get<double>();
  };
  auto integer = [&](std::initializer_list<const char*> keys) -> long {
    for (const char* k : keys)
      if (params.contains(k)) {
        if (!params[k].is_number_integer()) throw ConfigError("catalog " + id + ": param '" + k + "' must be an integer");
        return params[k].get<long>();
      }
    throw ConfigError("catalog " + id + ": missing integer param '" + *keys.begin() + "'");
  };

  Entry e;
  if (id == "diagonal") {
    if (!params.contains("entries")) throw ConfigError("catalog diagonal: missing 'entries'");
    Diagonal d;
    for (const auto& z : params["entries"]) d.entries.push_back(complex_from_json(z));
    e = d;
  } else if (id == "rotation2d") {
    e = Rotation2d{num("omega")};
  } else if (id == "nilpotent_shift") {
    e = NilpotentShift{static_cast<int>(integer({"dim"}))};
  } else if (id == "disc_rotation") {
    e = DiscRotation{static_cast<int>(integer({"N", "degree"}))};
  } else if (id == "random_stable") {
    const long seed = integer({"seed"});
    if (seed < 0) throw ConfigError("catalog random_stable: seed must be >= 0");
    e = RandomStable{static_cast<int>(integer({"dim"})), static_cast<std::uint64_t>(seed), num("a")};
  } else {
    throw ConfigError("unknown catalog id '" + id +
                      "' (expected diagonal|rotation2d|nilpotent_shift|disc_rotation|random_stable)");
  }
  validate(e);
  return e;
}

inline json catalog_to_json(const catalog::Entry& e) {
  using namespace catalog;
  struct V {
    json operator()(const Diagonal& d) const {
      json a = json::array();
      for (Complex z : d.entries) a.push_back(to_json(z));
      return {{"entries", a}};
    }
    json operator()(const Rotation2d& r) const { return {{"omega", r.omega}}; }
    json operator()(const NilpotentShift& n) const { return {{"dim", n.dim}}; }
    json operator()(const DiscRotation& d) const { return {{"N", d.degree}}; }
    json operator()(const RandomStable& r) const {
      return {{"dim", r.dim}, {"seed", r.seed}, {"a", r.abscissa}};
    }
  };
  return json{{"catalog", id_of(e)}, {"params", std::visit(V{}, e)}};
}

inline json generator_spec_to_json(const GeneratorSpec& spec) {
  if (const auto* m = std::get_if<ComplexMatrix>(&spec)) return generator_to_json(*m);
  return catalog_to_json(std::get<catalog::Entry>(spec));
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("cannot parse number '" + s + "'");
  return v;
}

}  // namespace detail

/// Inline catalog form: "catalog:<id>?key=value&key=value".
/// Complex lists are re:im pairs separated by commas,
/// e.g. catalog:diagonal?entries=0:0,0:6.283185307179586
inline catalog::Entry parse_catalog_uri(const std::string& uri) {
  const std::string prefix = "catalog:";
  if (uri.rfind(prefix, 0) != 0) throw ConfigError("not a catalog spec: " + uri);
  const std::string rest = uri.substr(prefix.size());
  const auto q = rest.find('?');
  const std::string id = rest.substr(0, q);
  json params = json::object();
  if (q != std::string::npos) {
    for (const auto& kv : detail::split(rest.substr(q + 1), '&')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("catalog param without '=': " + kv);
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "entries") {
        json arr = json::array();
        for (const auto& pair : detail::split(val, ',')) {
          const auto colon = pair.find(':');
          const double re = detail::parse_double(pair.substr(0, colon));
          const double im = colon == std::string::npos ? 0.0 : detail::parse_double(pair.substr(colon + 1));
          arr.push_back(json::array({re, im}));
        }
        params[key] = arr;
      } else if (key == "dim" || key == "N" || key == "degree" || key == "seed") {
        const double v = detail::parse_double(val);
        if (v != std::floor(v)) throw ConfigError("catalog param '" + key + "' must be an integer");
        params[key] = static_cast<long>(v);
      } else {
        params[key] = detail::parse_double(val);
      }
    }
  }
  return catalog_from_json(json{{"catalog", id}, {"params", params}});
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

struct LoadedGenerator {
  GeneratorSpec spec;
  SemigroupEvaluator evaluator;
  std::string source;
};

/// Dense generator file, catalog JSON file, or inline catalog URI.
inline LoadedGenerator load_generator(const std::string& source) {
  if (source.rfind("catalog:", 0) == 0) {
    auto b = catalog_build(parse_catalog_uri(source));
    return {b.spec, b.evaluator, source};
  }
  const json j = read_json_file(source);
  if (j.contains("catalog")) {
    auto b = catalog_build(catalog_from_json(j));
    return {b.spec, b.evaluator, source};
  }
  const ComplexMatrix a = generator_from_json(j);
  return {GeneratorSpec{a}, SemigroupEvaluator::from_dense(a), source};
}

// {"orbit_nodes":512,"orbit_scheme":"simpson","laplace_horizon":"auto",
//  "laplace_tail_tol":1e-10,"contour_nodes":64,"contour_radius":0.5,"tol":1e-8}
inline json quadrature_to_json(const QuadratureConfig& c) {
  json j;
  j["orbit_nodes"] = c.orbit_nodes;
  j["orbit_scheme"] = to_string(c.orbit_scheme);
  j["laplace_horizon"] = c.laplace_horizon ? json(*c.laplace_horizon) : json("auto");
  j["laplace_tail_tol"] = c.laplace_tail_tol;
  j["contour_nodes"] = c.contour_nodes;
  j["contour_radius"] = c.contour_radius;
  j["tol"] = c.tol;
  return j;
}

inline QuadratureConfig quadrature_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("quadrature config must be a JSON object");
  QuadratureConfig c;
  try {
    if (j.contains("orbit_nodes")) c.orbit_nodes = j["orbit_nodes"].get<int>();
    if (j.contains("orbit_scheme")) c.orbit_scheme = orbit_scheme_from_string(j["orbit_scheme"].get<std::string>());
    if (j.contains("laplace_horizon")) {
      const auto& h = j["laplace_horizon"];
      if (h.is_string()) {
        if (h.get<std::string>() != "auto") throw ConfigError("laplace_horizon must be a number or \"auto\"");
        c.laplace_horizon.reset();
      } else {
        c.laplace_horizon = h.get<double>();
      }
    }
    if (j.contains("laplace_tail_tol")) c.laplace_tail_tol = j["laplace_tail_tol"].get<double>();
    if (j.contains("contour_nodes")) c.contour_nodes = j["contour_nodes"].get<int>();
    if (j.contains("contour_radius")) c.contour_radius = j["contour_radius"].get<double>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("quadrature config: ") + e.what());
  }
  c.validate();
  return c;
}

// {"point":[{"lambda":[re,im],"mult":k,"eigenvectors":[...]}],"residual":[...],...,"tol":...}
inline json spectrum_to_json(const SpectrumReport& r) {
  json point = json::array();
  for (const auto& ep : r.point) {
    json vecs = json::array();
    for (const auto& v : ep.eigenvectors) vecs.push_back(vector_to_json(v));
    point.push_back({{"lambda", to_json(ep.lambda)},
                     {"mult", ep.algebraic_multiplicity},
                     {"geometric", ep.geometric_multiplicity()},
                     {"eigenvectors", vecs}});
  }
  return json{{"point", point},
              {"residual", to_json(sorted_set(r.residual))},
              {"approximate", to_json(sorted_set(r.approximate))},
              {"algebraic", to_json(sorted_set(r.algebraic))},
              {"topological", to_json(sorted_set(r.topological))},
              {"tol", r.tol}};
}

// {"period": rho, "entries":[{"n":k,"mu":[0, 2 pi k / rho],"P":[[...]]}]}
inline json family_to_json(const ProjectionFamily& f) {
  json entries = json::array();
  for (const auto& e : f.entries)
    entries.push_back({{"n", e.n}, {"mu", to_json(e.mu)}, {"P", rows_to_json(e.p)}});
  return json{{"period", f.period}, {"entries", entries}};
}

inline ProjectionFamily family_from_json(const json& j) {
  if (!j.contains("period") || !j.contains("entries")) throw ConfigError("projection family needs period and entries");
  ProjectionFamily f;
  f.period = j["period"].get<double>();
  for (const auto& e : j["entries"]) {
    ProjectionEntry pe;
    pe.n = e["n"].get<int>();
    pe.mu = complex_from_json(e["mu"]);
    pe.p = rows_from_json(e["P"], static_cast<Eigen::Index>(e["P"].size()));
    f.m = std::max(f.m, std::abs(pe.n));
    f.entries.push_back(std::move(pe));
  }
  return f;
}

inline const char* verdict(bool pass) { return pass ? "pass" : "fail"; }

inline json mapping_to_json(const MappingReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"t", row.t},
                    {"variant", row.variant},
                    {"lhs", to_json(sorted_set(row.lhs))},
                    {"rhs", to_json(sorted_set(row.rhs))},
                    {"hausdorff", row.hausdorff},
                    {"verdict", verdict(row.pass)}});
  return json{{"theorem_id", r.theorem_id}, {"tol", r.tol}, {"verdict", verdict(r.pass)}, {"rows", rows}};
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// theorem_id,t,hausdorff,verdict
inline std::string mapping_to_csv(const MappingReport& r) {
  std::string out = "theorem_id,t,hausdorff,verdict\n";
  for (const auto& row : r.rows)
    out += r.theorem_id + (row.variant.empty() ? "" : ":" + row.variant) + "," + format_double(row.t) + "," +
           format_double(row.hausdorff) + "," + verdict(row.pass) + "\n";
  return out;
}

// {"degree": N, "coeffs": [[re,im],...]}
inline json disc_function_to_json(const hardy::DiscFunction& f) {
  return json{{"degree", f.degree}, {"coeffs", vector_to_json(f.coeffs)}};
}

inline hardy::DiscFunction disc_function_from_json(const json& j) {
  if (!j.contains("degree") || !j.contains("coeffs")) throw ConfigError("DiscFunction JSON needs degree and coeffs");
  auto f = hardy::DiscFunction::from_coeffs(vector_from_json(j["coeffs"]));
  if (f.degree != j["degree"].get<int>()) throw ConfigError("DiscFunction JSON: degree does not match coeffs");
  return f;
}

// r,theta,value
inline std::string weight_to_csv(const hardy::WeightFunction& w) {
  std::string out = "r,theta,value\n";
  for (const auto& s : w.samples)
    out += format_double(std::abs(s.z)) + "," + format_double(std::arg(s.z)) + "," + format_double(s.value) + "\n";
  return out;
}

inline hardy::WeightFunction weight_from_csv(const std::string& text) {
  hardy::WeightFunction w;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("r,", 0) == 0) continue;
    }
    const auto cells = detail::split(line, ',');
    if (cells.size() != 3) throw ConfigError("weight CSV rows need r,theta,value: " + line);
    const double r = detail::parse_double(cells[0]), th = detail::parse_double(cells[1]);
    w.samples.push_back({std::polar(r, th), detail::parse_double(cells[2])});
  }
  w.validate();
  return w;
}

/// Writes via a temporary file and rename, so readers never see a partial report.
inline void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move report into place at '" + path + "': " + ec.message());
}

}  // namespace sgspec::io
