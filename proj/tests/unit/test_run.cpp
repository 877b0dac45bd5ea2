#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sben/errors.hpp"
#include "sben/run.hpp"
#include "sben/selftest.hpp"

namespace sben {
namespace {

namespace fs = std::filesystem;

const char* kScenario = R"(
    "dimension": 1,
    "hamiltonian": { "type": "separable_kinetic", "mass": 1.0, "potential": { "type": "harmonic", "stiffness": 1.0 } },
    "dissipation": { "type": "quadratic_velocity", "c": 0.5 },
    "horizon": 1.0, "step": 0.001, "beta": 1.0,
    "initial": { "q": [1.0], "p": [0.0] },
    "box": { "q_lower": [-1.0], "p_lower": [-1.0], "q_upper": [1.0], "p_upper": [1.0] })";

std::string config(const std::string& kind, const std::string& extra = "", const std::string& scenario = kScenario) {
  return R"({ "kind": ")" + kind + R"(", "seed": 5, "plots": true, "scenario": {)" + scenario + "}" + extra + "}";
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sben_run_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run_text(const std::string& text, const fs::path& out, const RunOverrides& extra = {}) {
  RunOverrides o = extra;
  o.output = out;
  std::ostringstream log;
  return run(parse_run_config(text, {}, "test", o), log);
}

std::string error_field(const std::string& text) {
  try {
    parse_run_config(text, {}, "test");
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(RunConfig, ValidationNamesFields) {
  std::string no_beta = kScenario;
  no_beta.replace(no_beta.find(R"(, "beta": 1.0)"), 13, "");
  EXPECT_EQ(error_field(config("deterministic", "", no_beta)), "scenario.beta");
  EXPECT_EQ(error_field(config("deterministic", R"(, "bogus": 1)")), "bogus");
  EXPECT_EQ(error_field(config("sideways")), "kind");
  EXPECT_EQ(error_field(config("stochastic", R"(, "stochastic": { "ensemble": 0 })")), "stochastic.ensemble");
  EXPECT_EQ(error_field(config("stochastic", R"(, "stochastic": { "sampler": "truncated_exponential" })")),
            "stochastic.sampler");
  EXPECT_EQ(error_field(config("liouville", R"(, "liouville": { "flow": "other" })")), "liouville.flow");
  std::string no_box = kScenario;
  no_box = no_box.substr(0, no_box.find(",\n    \"box\""));
  EXPECT_EQ(error_field(config("liouville", "", no_box)), "scenario.box");
  EXPECT_EQ(error_field(R"({ "kind": "selftest", "seed": -1 })"), "seed");
}

TEST(RunConfig, OverridesAndDefaultOutputRoot) {
  ::setenv("SBEN_OUTPUT_ROOT", "/tmp/sben-root", 1);
  RunOverrides o;
  o.seed = 99;
  o.refine = 0;
  const RunConfig c = parse_run_config(config("liouville"), {}, "myrun", o);
  EXPECT_EQ(c.output_dir, fs::path("/tmp/sben-root") / "myrun");
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.refine, 0);
  ::unsetenv("SBEN_OUTPUT_ROOT");
  EXPECT_EQ(default_output_root(), fs::path("sben-out"));
}

TEST(Run, DeterministicArtifactsAreReproducible) {
  const auto a = run_text(config("deterministic"), fresh_dir("det_a"));
  const auto b = run_text(config("deterministic"), fresh_dir("det_b"));
  ASSERT_EQ(a.exit_code, kExitSuccess) << a.message;
  const std::vector<std::string> expected{"energy.svg", "gap.svg",     "manifest.json", "p.svg",
                                          "q.svg",      "summary.txt", "trajectory.csv"};
  EXPECT_EQ(a.artifacts, expected);
  const fs::path root = fs::temp_directory_path() / "sben_run_tests";
  for (const auto& name : a.artifacts) EXPECT_EQ(slurp(root / "det_a" / name), slurp(root / "det_b" / name)) << name;
  const auto manifest = nlohmann::json::parse(slurp(root / "det_a/manifest.json"));
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["kind"], "deterministic");
  EXPECT_TRUE(manifest.contains("versions"));
  EXPECT_FALSE(manifest["config"].contains("output"));
}

TEST(Run, StochasticSeedControlsTheEnsemble) {
  const std::string text = config("stochastic", R"(, "stochastic": { "ensemble": 3 })");
  const auto a = run_text(text, fresh_dir("st_a"));
  const auto b = run_text(text, fresh_dir("st_b"));
  RunOverrides other;
  other.seed = 6;
  const auto c = run_text(text, fresh_dir("st_c"), other);
  ASSERT_EQ(a.exit_code, kExitSuccess) << a.message;
  const fs::path root = fs::temp_directory_path() / "sben_run_tests";
  for (const auto& name : a.artifacts) EXPECT_EQ(slurp(root / "st_a" / name), slurp(root / "st_b" / name)) << name;
  EXPECT_NE(slurp(root / "st_a/trajectory_000.csv"), slurp(root / "st_c/trajectory_000.csv"));
  EXPECT_NE(slurp(root / "st_a/trajectory_000.csv"), slurp(root / "st_a/trajectory_001.csv"));
}

TEST(Run, LiouvilleVerdictsDriveTheExitCode) {
  const auto ok = run_text(config("liouville", R"(, "liouville": { "resolution": 16, "refine": 1 })"), fresh_dir("lv"));
  EXPECT_EQ(ok.exit_code, kExitSuccess) << ok.message;
  const auto strict = run_text(
      config("liouville", R"(, "liouville": { "resolution": 16, "refine": 1, "flow": "perturbed", "expect_tight": true })"),
      fresh_dir("lv_pert"));
  EXPECT_EQ(strict.exit_code, kExitVerdict) << strict.message;
  const auto loose = run_text(
      config("liouville", R"(, "liouville": { "resolution": 16, "refine": 1, "flow": "perturbed" })"), fresh_dir("lv_p2"));
  EXPECT_EQ(loose.exit_code, kExitSuccess) << loose.message;
}

TEST(Run, WorkPumpGateIsAValidationFailure) {
  std::string shifted = kScenario;
  shifted.replace(shifted.find(R"("c": 0.5 })"), 10, R"("c": 0.5, "shift": { "q": [0.5] } })");
  shifted.replace(shifted.find(R"("type": "separable_kinetic")"), 27, R"("type": "forced_separable")");
  shifted.replace(shifted.find(R"("stiffness": 1.0 } })"), 20,
                  R"("stiffness": 1.0 }, "forcing": { "type": "ramp", "rate": [0.3] } })");
  const auto r = run_text(config("work_pump", R"(, "work_pump": { "resolution": 16, "refine": 0 })", shifted),
                          fresh_dir("wp"));
  EXPECT_EQ(r.exit_code, kExitValidation) << r.message;
  EXPECT_NE(r.message.find("sign condition"), std::string::npos);
}

TEST(Run, FlaggedStepsAreANumericalFailure) {
  std::string phase = kScenario;
  phase.replace(phase.find(R"("type": "quadratic_velocity", "c": 0.5)"), 37,
                R"("type": "phase_quadratic", "c": 0.5, "b": 2.0)");
  const auto r = run_text(config("deterministic", R"(, "solver": { "gap_tolerance": 1e-300 })", phase), fresh_dir("num"));
  EXPECT_EQ(r.exit_code, kExitNumerical) << r.message;
}

TEST(Run, SelftestKind) {
  const auto r = run_text(R"({ "kind": "selftest", "seed": 1 })", fresh_dir("self"));
  EXPECT_EQ(r.exit_code, kExitSuccess);
  EXPECT_EQ(r.artifacts, (std::vector<std::string>{"manifest.json", "selftest.txt"}));
}

struct Command {
  int status;
  std::string output;
};

Command shell(const std::string& cmd) {
  Command c{0, ""};
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) c.output += buf;
  const int raw = ::pclose(pipe);
  c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return c;
}

TEST(Cli, MissingBetaExitsWithValidationCode) {
  const fs::path dir = fresh_dir("cli");
  fs::create_directories(dir);
  std::string no_beta = kScenario;
  no_beta.replace(no_beta.find(R"(, "beta": 1.0)"), 13, "");
  std::ofstream(dir / "bad.json") << config("deterministic", "", no_beta);
  const Command c = shell(std::string(SBEN_CLI) + " run " + (dir / "bad.json").string() + " --out " + (dir / "o").string());
  EXPECT_EQ(c.status, 1);
  EXPECT_NE(c.output.find("scenario.beta"), std::string::npos) << c.output;
}

TEST(Cli, SubcommandsAndFlags) {
  const Command schema = shell(std::string(SBEN_CLI) + " export-schema");
  EXPECT_EQ(schema.status, 0);
  EXPECT_NO_THROW(nlohmann::json::parse(schema.output));
  EXPECT_EQ(shell(std::string(SBEN_CLI) + " selftest").status, 0);
  EXPECT_NE(shell(std::string(SBEN_CLI)).status, 0);

  const fs::path dir = fresh_dir("cli_run");
  fs::create_directories(dir);
  std::ofstream(dir / "det.json") << config("deterministic");
  const Command run = shell(std::string(SBEN_CLI) + " run " + (dir / "det.json").string() + " --seed 17 --out " +
                            (dir / "out").string());
  EXPECT_EQ(run.status, 0) << run.output;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "out/manifest.json"))["seed"], 17);
}

TEST(Selftest, FreshBuildPassesAndIsDeterministic) {
  const SelftestReport a = run_selftest(), b = run_selftest();
  EXPECT_TRUE(a.passed()) << a.format();
  EXPECT_EQ(a.format(), b.format());
}

TEST(Selftest, InjectedSignErrorInJIsCaught) {
  SelftestOps broken;
  broken.J = [](const PhasePoint& z) { return CotangentPoint{z.p, z.q}; };
  EXPECT_FALSE(symplectic_suite(broken).passed());
  SelftestOps broken_star;
  broken_star.J_star = [](const CotangentPoint& a) { return PhasePoint{a.q, a.p}; };
  EXPECT_FALSE(symplectic_suite(broken_star).passed());
  EXPECT_FALSE(run_selftest(broken).passed());
  EXPECT_TRUE(symplectic_suite().passed());
}

}  // namespace
}  // namespace sben
