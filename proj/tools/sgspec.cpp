// Command-line front end: sgspec analyze -i <generator> --checks <list> ...

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgspec/scenario.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Spectral verification of finite-dimensional semigroups"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "run checks against a generator");
  std::string input, evaluator, checks = "all", t_list = "1", format = "json", output = "-", quad_path;
  std::optional<double> tol, t0;
  std::uint64_t seed = 0;
  analyze->add_option("-i,--input", input, "generator JSON file or catalog:<id>?k=v&...")->required();
  analyze->add_option("--evaluator", evaluator, "evaluate T(t) from a different generator (negative control)");
  analyze->add_option("--checks", checks, "comma-separated check ids or 'all'");
  analyze->add_option("--t", t_list, "comma-separated times");
  analyze->add_option("--tol", tol, "tolerance (overrides the quadrature config)");
  analyze->add_option("--t0", t0, "known period multiple for periodic-projections");
  analyze->add_option("--quad", quad_path, "quadrature config JSON");
  analyze->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("-o,--output", output, "output path, '-' for stdout");
  analyze->add_option("--seed", seed, "seed for random test vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  sgspec::scenario::ScenarioConfig cfg;
  cfg.generator_source = input;
  if (!evaluator.empty()) cfg.evaluator_source = evaluator;
  if (!quad_path.empty()) cfg.quadrature = sgspec::io::quadrature_from_json(sgspec::io::read_json_file(quad_path));
  if (tol) cfg.quadrature.tol = *tol;
  cfg.checks = checks == "all" ? sgspec::scenario::known_checks() : split_list(checks);
  cfg.t_values.clear();
  for (const auto& t : split_list(t_list)) cfg.t_values.push_back(sgspec::io::detail::parse_double(t));
  if (cfg.t_values.empty()) throw sgspec::ConfigError("--t needs at least one value");
  cfg.format = format == "csv" ? sgspec::scenario::OutputFormat::csv : sgspec::scenario::OutputFormat::json;
  cfg.seed = seed;
  cfg.t0 = t0;
  cfg.threads = sgspec::scenario::threads_from_env();

  const auto result = sgspec::scenario::run_scenario(cfg);
  sgspec::scenario::emit_report(result, cfg.format, output, std::cout);
  for (const auto& c : result.checks)
    std::cerr << c.id << ": " << (c.numerical_failure ? "error" : sgspec::io::verdict(c.pass)) << "\n";
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sgspec::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sgspec::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
