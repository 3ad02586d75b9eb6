#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsalpha/errors.hpp"
#include "hsalpha/harness.hpp"

namespace {

using hsalpha::ConfigError;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) {
      throw ConfigError(std::string("bad number '") + cell + "' in " + what);
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(std::string("empty ") + what);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"alpha-dissipative Hunter-Saxton solver: convergence experiments"};
  std::string example = "multipeakon", dx_list, domain, snapshots, initial_data, out, format = "csv";
  hsalpha::harness::ExperimentConfig cfg;
  app.add_option("--example", example, "multipeakon | cusp | cosine | custom");
  app.add_option("--alpha", cfg.alpha, "dissipation parameter in [0, 1]");
  app.add_option("--beta", cfg.beta, "multipeakon atom mass");
  app.add_option("--dx-list", dx_list, "comma-separated grid spacings, decreasing");
  app.add_option("--grid-origin", cfg.grid_origin, "grid node x_0");
  app.add_option("--domain", domain, "a,b: region the grid and snapshots must cover");
  app.add_option("--T", cfg.T, "final time");
  app.add_option("--nt", cfg.n_time_samples, "uniform time samples on [0, T]");
  app.add_option("--snapshots", snapshots, "comma-separated snapshot times");
  app.add_option("--initial-data", initial_data, "JSON initial data for --example custom");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "error table format: csv | json");
  app.add_option("--threads", cfg.threads, "parallel dx runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    cfg.example = hsalpha::harness::parse_example(example);
    if (!dx_list.empty()) cfg.dx_list = parse_list(dx_list, "--dx-list");
    if (!domain.empty()) {
      const auto d = parse_list(domain, "--domain");
      if (d.size() != 2) throw ConfigError("--domain expects a,b");
      cfg.domain = hsalpha::Window{d[0], d[1]};
    }
    if (!snapshots.empty()) cfg.snapshot_times = parse_list(snapshots, "--snapshots");
    cfg.initial_data = initial_data;
    cfg.output_dir = out;
    if (format == "csv") cfg.format = hsalpha::harness::Format::csv;
    else if (format == "json") cfg.format = hsalpha::harness::Format::json;
    else throw ConfigError("--format must be csv or json");

    const auto table = hsalpha::harness::run_experiment(cfg);
    std::cout << "example " << hsalpha::harness::example_name(cfg.example) << ", alpha " << cfg.alpha
              << ", T " << cfg.T << "\n"
              << hsalpha::harness::error_table_text(table);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hsalpha::ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
