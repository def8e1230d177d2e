// twinbeam: run twin-beam filtering scenarios and the Fock-oracle check.

#include "twinbeam/config.hpp"
#include "twinbeam/error.hpp"
#include "twinbeam/oracle_check.hpp"
#include "twinbeam/runner.hpp"
#include "twinbeam/scenarios.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>

namespace fs = std::filesystem;
using namespace twinbeam;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct OutputOptions {
  std::string out = ".";
  std::string format = "csv";
  int grid = 0;
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--out", opts.out, "Output directory")->capture_default_str();
  cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--grid", opts.grid, "Override the number of grid points")->check(CLI::Range(2, 8192));
}

std::map<std::string, ResultTable> write_tables(const ScenarioConfig& config, const OutputOptions& opts,
                                                const fs::path& dir) {
  auto tables = run_scenario(config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  const Format format = opts.format == "json" ? Format::json : Format::csv;
  bool warned = false;
  for (const auto& [name, table] : tables) {
    const fs::path path = dir / (name + (format == Format::json ? ".json" : ".csv"));
    emit(table, format, path);
    std::cout << "wrote " << path.string() << '\n';
    if (format == Format::csv) {
      const fs::path meta = dir / (name + ".meta.json");
      ResultTable header_only;
      header_only.metadata = table.metadata;
      emit(header_only, Format::json, meta);
    }
    if (!warned) {
      for (const auto& w : table.metadata["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
      if (table.metadata["grid_convergence"]["status"] == "unconverged") {
        std::cerr << "warning: K values change by more than 0.5% when the grid is doubled\n";
      }
      warned = true;
    }
  }
  return tables;
}

ScenarioConfig with_overrides(ScenarioConfig config, const OutputOptions& opts) {
  if (opts.grid > 0) config.source.grid = opts.grid;
  return config;
}

void print_k_table(const ResultTable& table) {
  std::cout << std::left << std::setw(12) << "filter" << std::setw(10) << "K_s" << "K_i" << '\n';
  for (std::size_t row = 0; row < table.rows(); ++row) {
    std::cout << std::setw(12) << std::get<std::string>(table.column("filter").values[row]) << std::fixed
              << std::setprecision(2) << std::setw(10) << table.number("K_s", row) << table.number("K_i", row)
              << std::defaultfloat << '\n';
  }
}

int oracle_check(int cases, std::uint64_t seed, int cutoff) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  std::cout << std::setprecision(3);
  for (int k = 0; k < cases; ++k) {
    const OracleCase c = random_oracle_case(rng);
    const OracleReport report = compare_with_oracle(c, cutoff, 3);
    const double tolerance = std::max(1e-6, 10.0 * report.truncation_error);
    const bool ok = report.max_relative_deviation < tolerance;
    failures += ok ? 0 : 1;
    std::cout << "case " << k << ": bins " << c.jsa.amplitudes.rows() << "x" << c.jsa.amplitudes.cols() << ", B "
              << c.gain << ", max rel. deviation " << std::scientific << report.max_relative_deviation
              << std::defaultfloat << (ok ? "  ok" : "  FAIL") << '\n';
  }
  std::cout << (failures == 0 ? "all cases agree" : std::to_string(failures) + " case(s) disagree") << '\n';
  return failures == 0 ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-beam spectral filtering simulator"};
  app.require_subcommand(1);

  OutputOptions run_opts;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("config", config_path, "Scenario config file (JSON)")->required();
  add_output_options(run, run_opts);

  int cases = 20;
  std::uint64_t seed = 1;
  int cutoff = 12;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the Gaussian engine with the truncated Fock oracle");
  oracle->add_option("--cases", cases, "Number of random systems")->check(CLI::PositiveNumber)->capture_default_str();
  oracle->add_option("--seed", seed, "Random seed")->capture_default_str();
  oracle->add_option("--cutoff", cutoff, "Photons per mode")->check(CLI::Range(4, 12))->capture_default_str();

  OutputOptions table1_opts;
  auto* table1 = app.add_subcommand("table1", "Effective mode numbers behind 1, 2.5, 10 nm filters and unfiltered");
  add_output_options(table1, table1_opts);

  OutputOptions fig2_opts;
  auto* fig2 = app.add_subcommand("fig2", "Joint correlation sweeps with one-arm and two-arm filtering");
  add_output_options(fig2, fig2_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      write_tables(with_overrides(load_config(config_path), run_opts), run_opts, run_opts.out);
    } else if (oracle->parsed()) {
      return oracle_check(cases, seed, cutoff);
    } else if (table1->parsed()) {
      const auto tables = write_tables(with_overrides(parse_config(bundled_scenario("table1")), table1_opts),
                                       table1_opts, table1_opts.out);
      print_k_table(tables.at("K_table"));
    } else if (fig2->parsed()) {
      for (const char* name : {"fig2", "fig2_both_filtered"}) {
        write_tables(with_overrides(parse_config(bundled_scenario(name)), fig2_opts), fig2_opts,
                     fs::path(fig2_opts.out) / name);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
