// sben: run SBEN experiments from config files.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sben/errors.hpp"
#include "sben/run.hpp"
#include "sben/selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symplectic Brezis-Ekeland-Nayroles dynamics: solver, sampler and Liouville verifier"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sben::version_string());

  auto* run = app.add_subcommand("run", "Execute the pipeline described by a config file");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool plots = false;
  std::optional<int> refine;
  run->add_option("config", config_path, "Path to the JSON config")->required();
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--out", out, "Output directory (overrides the config and $SBEN_OUTPUT_ROOT)");
  run->add_flag("--plots", plots, "Emit SVG plots");
  run->add_option("--refine", refine, "Refinement levels for liouville and work_pump runs")->check(CLI::NonNegativeNumber);

  auto* selftest = app.add_subcommand("selftest", "Run the bundled invariant suites");
  std::uint64_t selftest_seed = 1;
  selftest->add_option("--seed", selftest_seed, "Seed for the randomised suites");

  app.add_subcommand("export-schema", "Print the JSON schema of the config format");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("export-schema")) {
    std::cout << sben::export_schema();
    return sben::kExitSuccess;
  }
  if (app.got_subcommand("selftest")) {
    const sben::SelftestReport report = sben::run_selftest({}, selftest_seed);
    std::cout << report.format();
    return report.passed() ? sben::kExitSuccess : sben::kExitVerdict;
  }

  sben::RunOverrides overrides;
  overrides.seed = seed;
  if (out) overrides.output = *out;
  if (plots) overrides.plots = true;
  overrides.refine = refine;
  sben::RunConfig config;
  try {
    config = sben::load_run_config(config_path, overrides);
  } catch (const sben::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return sben::kExitValidation;
  }
  return sben::run(config, std::cout).exit_code;
}
