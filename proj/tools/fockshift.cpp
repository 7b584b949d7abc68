#include <iostream>

#include <CLI11.hpp>

#include "fockshift/cli.hpp"

using namespace fockshift;

int main(int argc, char** argv) {
  CLI::App app{"Weighted shifts on truncated Fock space"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<int> depth;
  std::optional<double> tol;
  std::optional<double> epsilon;
  std::string grid;
  std::vector<std::string> lambdas;
  std::string coeffs_path;
  std::vector<int> ks;
  std::string mode = "right";
  double assumed = 0.0;
  std::string out_path;
  std::string report_path;
  bool timings = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Weight-system JSON config");
    sub->add_option("--depth", depth, "Truncation depth")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "Check tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_path, "Output path for CSV");
    sub->add_option("--report", report_path, "Output path for the JSON report");
    sub->add_flag("--timings", timings, "Record per-check wall-clock time");
  };

  auto* check = app.add_subcommand("check", "Cocycle, commutant, commutation, norm and vacuum checks");
  add_common(check);
  auto* commutant = app.add_subcommand("commutant", "Commutant weight table and extraction round-trips");
  add_common(commutant);
  auto* region = app.add_subcommand("region", "Sample the eigenvalue region on a grid");
  add_common(region);
  region->add_option("--grid", grid, "lo:hi:step per coordinate");
  region->add_option("--epsilon", epsilon, "Ratio margin for inside/outside verdicts");
  auto* cesaro = app.add_subcommand("cesaro", "Compare Cesaro sums with Fejer polynomials");
  add_common(cesaro);
  cesaro->add_option("--coeffs", coeffs_path, "Fourier coefficient JSON")->required();
  cesaro->add_option("--k", ks, "Cesaro orders (repeatable)");
  auto* spectra = app.add_subcommand("spectra", "Right/left spectrum experiments for the left creation tuple");
  add_common(spectra);
  spectra->add_option("--lambda", lambdas, "Complex tuple a+bi,... (repeatable)");
  spectra->add_option("--mode", mode, "right | resolvent | left | zero")
      ->check(CLI::IsMember({"right", "resolvent", "left", "zero"}));
  spectra->add_option("--k", ks, "Table length for left growth certificates");
  spectra->add_option("--assumed", assumed, "Assumed norm M in left growth certificates")->check(CLI::NonNegativeNumber);
  spectra->add_option("--coeffs", coeffs_path, "eta vectors for zero mode: {\"eta1\": {...}, \"eta2\": {...}}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitPrecondition;
  }
  CLI::App* sub = app.get_subcommands().front();

  cli::RunConfig config;
  try {
    if (!config_path.empty()) {
      config = cli::load_config(config_path);
    } else if (sub != spectra) {
      throw cli::ConfigError("--config", "required for " + sub->get_name());
    }
    if (depth) config.depth = *depth;
    if (tol) config.tolerance = *tol;
    if (epsilon) {
      if (!(*epsilon > 0.0 && *epsilon < 1.0)) throw cli::ConfigError("--epsilon", "must lie in (0, 1)");
      config.epsilon = *epsilon;
    }
    if (!grid.empty()) config.grid = GridSpec::parse(grid);
    for (const auto& text : lambdas) config.lambdas.push_back(cli::parse_lambda(text));
    if (!coeffs_path.empty()) config.coeffs_doc = cli::read_json_file(coeffs_path);
    config.k = ks;
    config.mode = mode;
    config.assumed = assumed;
    if (!out_path.empty()) config.out = out_path;
    if (!report_path.empty()) config.report = report_path;
    config.timings = timings;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kExitPrecondition;
  }
  return cli::run_command(sub->get_name(), config, std::cout, std::cerr);
}
