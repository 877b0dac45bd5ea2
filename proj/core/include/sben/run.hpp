#pragma once

// Experiment orchestration: config ingestion, pipelines, artifacts.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sben/scenario.hpp"
#include "sben/solver.hpp"
#include "sben/stochastic.hpp"

namespace sben {

enum class RunKind { Deterministic, Stochastic, Liouville, WorkPump, Selftest };

std::string_view to_string(RunKind k);
RunKind run_kind_from_string(std::string_view name);

/// Process exit codes of `sben run`.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitValidation = 1,
  kExitVerdict = 2,
  kExitNumerical = 3,
};

/// Command-line values that take precedence over the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output;
  std::optional<bool> plots;
  std::optional<int> refine;
};

struct RunConfig {
  RunKind kind = RunKind::Deterministic;
  /// Absent only for kind selftest.
  std::optional<Scenario> scenario;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  bool plots = false;
  SolverOptions solver;

  // stochastic
  int ensemble = 8;
  SamplerBackend sampler = SamplerBackend::Auto;

  // liouville and work_pump
  int resolution = 64;
  int refine = 1;
  /// "sben" or "perturbed".
  std::string flow = "sben";
  double perturbation = 0.1;
  /// Liouville only: require equality_tight (defaults to true for sben flows
  /// with smooth dissipation).
  std::optional<bool> expect_tight;
  int d_samples = 20000;

  /// Canonical JSON of the config as interpreted (overrides applied, output
  /// directory omitted); echoed into the manifest.
  std::string echo;
};

/// Default output root: $SBEN_OUTPUT_ROOT, else ./sben-out.
std::filesystem::path default_output_root();

/// Parses and validates a config document. Without an explicit output the
/// directory is <output root>/<name>. Throws ConfigError with a dotted path.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir, const std::string& name,
                           const RunOverrides& overrides = {});
/// Reads `path` and parses it with name = file stem.
RunConfig load_run_config(const std::filesystem::path& path, const RunOverrides& overrides = {});

struct RunResult {
  int exit_code = kExitSuccess;
  /// Artifact file names relative to the output directory, sorted.
  std::vector<std::string> artifacts;
  std::string message;
};

/// Executes the pipeline, writing artifacts and manifest.json into
/// config.output_dir. Progress and summaries go to `log`. Numerical and
/// precondition failures are reported through the exit code, not thrown.
RunResult run(const RunConfig& config, std::ostream& log);

/// JSON schema of the config format.
std::string export_schema();

/// Library versions recorded in manifests.
std::string version_string();

}  // namespace sben
