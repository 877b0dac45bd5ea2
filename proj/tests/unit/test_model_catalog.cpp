#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "sben/errors.hpp"
#include "sben/hamiltonian.hpp"
#include "sben/scenario.hpp"
#include "sben/solver.hpp"
#include "support/oracles.hpp"

namespace sben {
namespace {

using oracle::point;

const char* kOscillator = R"({
  "dimension": 1,
  "hamiltonian": { "type": "separable_kinetic", "mass": 1.0, "potential": { "type": "harmonic", "stiffness": 1.0 } },
  "dissipation": { "type": "quadratic_velocity", "c": 0.5 },
  "horizon": 10.0, "step": 0.001, "beta": 1.0,
  "initial": { "q": [1.0], "p": [0.0] }
})";

std::string field_of(const std::string& json) {
  try {
    build_scenario(json);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  if (pos == std::string::npos) throw std::logic_error("pattern not found: " + from);
  return s.replace(pos, from.size(), to);
}

TEST(BuildScenario, HarmonicOscillatorWiring) {
  const Scenario s = build_scenario(kOscillator);
  EXPECT_EQ(s.dimension(), 1);
  EXPECT_EQ(s.steps(), 10000);
  EXPECT_EQ(s.scheme, Scheme::Midpoint);
  const PhasePoint xh = symplectic_gradient(s.hamiltonian, 0.0, point(0.3, -0.8));
  EXPECT_DOUBLE_EQ(xh.q[0], -0.8);
  EXPECT_DOUBLE_EQ(xh.p[0], -0.3);
  EXPECT_DOUBLE_EQ(s.dissipation.evaluate(point(2.0, 5.0)).value(), 1.0);
}

TEST(BuildScenario, ZeroDissipationReducesToConservativeFlow) {
  Scenario s = build_scenario(replace(kOscillator, R"("type": "quadratic_velocity", "c": 0.5)", R"("type": "zero")"));
  const StepResult r = solve_step(s, 0.0, point(1.0, 0.0), 1e-3);
  EXPECT_EQ(max_abs(r.dissipative_velocity), 0.0);
  EXPECT_EQ(r.gap, 0.0);
}

TEST(BuildScenario, ValidationNamesTheField) {
  EXPECT_EQ(field_of(replace(kOscillator, R"("mass": 1.0)", R"("mass": -1.0)")), "scenario.hamiltonian.mass");
  EXPECT_EQ(field_of(replace(kOscillator, R"(, "beta": 1.0)", "")), "scenario.beta");
  EXPECT_EQ(field_of(replace(kOscillator, R"("c": 0.5)", R"("c": "x")")), "scenario.dissipation.c");
  EXPECT_EQ(field_of(replace(kOscillator, R"("q": [1.0])", R"("q": [1.0, 2.0])")), "scenario.initial.q");
  EXPECT_EQ(field_of(replace(kOscillator, R"("harmonic")", R"("quartic")")), "scenario.hamiltonian.potential.type");
  EXPECT_EQ(field_of(replace(kOscillator, R"("step": 0.001)", R"("step": 20.0)")), "scenario.step");
  EXPECT_EQ(field_of("{ not json"), "");
}

TEST(BuildScenario, GridPotentialFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "sben_grid_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "phi.csv") << "x,value\n-2,2\n0,0\n2,2\n";
  }
  const Scenario s = build_scenario(
      replace(kOscillator, R"("type": "quadratic_velocity", "c": 0.5)", R"("type": "grid", "file": "phi.csv")"), dir);
  EXPECT_DOUBLE_EQ(s.dissipation.evaluate(point(1.0, 0.0)).value(), 1.0);
  // Linear extension past the last sample.
  EXPECT_DOUBLE_EQ(s.dissipation.evaluate(point(3.0, 0.0)).value(), 3.0);
  EXPECT_EQ(field_of(replace(kOscillator, R"("type": "quadratic_velocity", "c": 0.5)",
                             R"("type": "grid", "file": "/nonexistent/phi.csv")")),
            "scenario.dissipation.file");
}

TEST(GradientSelftest, CatalogueMatchesFiniteDifferences) {
  const auto sep = Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::harmonic(1.0));
  EXPECT_LE(gradient_selftest(sep, 100).max_gradient_error, 1e-6);
  Vector e1(1);
  e1 << 1.0;
  const auto forced = Hamiltonian::forced_separable(1, 1.0, PotentialEnergy::harmonic(1.0), Forcing::ramp(e1));
  const auto r = gradient_selftest(forced, 100);
  EXPECT_TRUE(r.passed);
  // ∂H/∂t = −⟨ḟ, q⟩ = −q₁ for f(t) = t e₁.
  EXPECT_DOUBLE_EQ(forced.time_derivative(2.0, point(0.7, 0.1)), -0.7);
}

TEST(GradientSelftest, WrongGradientIsReported) {
  const auto bad = Hamiltonian::custom(
      1, [](double, const PhasePoint& z) { return 0.5 * (z.q[0] * z.q[0] + z.p[0] * z.p[0]); },
      [](double, const PhasePoint& z) {
        CotangentPoint g = CotangentPoint::zero(1);
        g.p[0] = 2.0 * z.q[0];
        g.q[0] = z.p[0];
        return g;
      },
      {}, "wrong", false);
  EXPECT_FALSE(gradient_selftest(bad, 50).passed);
}

}  // namespace
}  // namespace sben
