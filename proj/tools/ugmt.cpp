// ugmt: command-line entry point for the verification suites.
//
//   ugmt run <suite> --config <path> --seed <u64> [--samples N] [--out dir]
//   ugmt list-batteries
//   ugmt plot-data <report.json> [--out dir]
//
// Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
// configuration or usage error. UGMT_WORKERS sets the worker count.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ugmt/harness.hpp"
#include "ugmt/parallel.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

int run_command(const std::string& suite, const std::string& config_path, std::uint64_t seed, std::size_t samples,
                const std::string& out) {
  ugmt::SuiteConfig cfg = ugmt::SuiteConfig::from_file(config_path);
  if (!cfg.suite.empty() && cfg.suite != suite) {
    throw ugmt::ConfigError("config file names suite '" + cfg.suite + "' but '" + suite + "' was requested");
  }
  cfg.suite = suite;
  cfg.seed = seed;
  cfg.seed_set = true;
  if (samples != 0) cfg.samples = samples;
  if (!out.empty()) cfg.out_dir = out;
  if (cfg.out_dir.empty()) cfg.out_dir = ".";
  cfg.validate();
  (void)ugmt::worker_count();

  const ugmt::Report report = ugmt::run_suite(cfg);
  for (const auto& r : report.records) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << "[" << r.criterion << "] " << r.name << "  value=" << std::setprecision(8)
              << r.value << " target=" << r.target << " sigma=" << r.sigma;
    if (!r.pass && !r.note.empty() && r.note.front() != '{') std::cout << "  (" << r.note << ")";
    std::cout << "\n";
  }
  for (const auto& path : ugmt::write_report(report, cfg.out_dir)) std::cout << "wrote " << path << "\n";
  std::cout << (report.all_pass() ? "suite passed" : "suite FAILED") << "\n";
  return report.all_pass() ? 0 : kExitFail;
}

int list_command() {
  for (const auto& e : ugmt::list_batteries()) {
    std::cout << std::left << std::setw(20) << e.name << std::setw(10) << e.kind << std::setw(36) << e.anchor << e.note
              << "\n";
  }
  return 0;
}

int plot_command(const std::string& report_path, const std::string& out) {
  std::ifstream f(report_path);
  if (!f) throw ugmt::ConfigError("cannot read report '" + report_path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const ugmt::Report report = ugmt::Report::from_json(ss.str());
  const std::string dir = out.empty() ? std::filesystem::path(report_path).parent_path().string() : out;
  for (const auto& path : ugmt::emit_plot_data(report, dir.empty() ? "." : dir)) std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for the Poisson configuration space"};
  app.require_subcommand(1);

  std::string suite, config_path, out;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  auto* run = app.add_subcommand("run", "Run a verification suite");
  run->add_option("suite", suite, "Suite name")->required();
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--seed", seed, "Master seed")->required();
  run->add_option("--samples", samples, "Monte Carlo sample count override");
  run->add_option("--out", out, "Output directory");

  auto* list = app.add_subcommand("list-batteries", "List the built-in test batteries");

  std::string report_path, plot_out;
  auto* plot = app.add_subcommand("plot-data", "Write CSV plot data from a report");
  plot->add_option("report", report_path, "Report JSON file")->required();
  plot->add_option("--out", plot_out, "Output directory (default: next to the report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(suite, config_path, seed, samples, out);
    if (*list) return list_command();
    if (*plot) return plot_command(report_path, plot_out);
  } catch (const ugmt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}
