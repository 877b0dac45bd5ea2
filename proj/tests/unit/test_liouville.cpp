#include <gtest/gtest.h>

#include <cmath>

#include "sben/errors.hpp"
#include "sben/liouville.hpp"
#include "support/oracles.hpp"

namespace sben {
namespace {

GibbsSpec spec_for(const Scenario& s, int resolution, double half_width = 1.0) {
  return GibbsSpec{s.alpha, s.beta, oracle::square(half_width), resolution};
}

Scenario conservative(double horizon, double step) {
  Scenario s = oracle::viscous_oscillator(0.5, horizon, step);
  s.dissipation = ConvexPotential::zero(1);
  return s;
}

Scenario forced(const Vector& rate, double horizon) {
  return oracle::make_scenario(
      Hamiltonian::forced_separable(1, 1.0, PotentialEnergy::harmonic(1.0), Forcing::ramp(rate)),
      ConvexPotential::quadratic_velocity(1, 0.5), horizon, 1e-3);
}

Vector scalar(double v) {
  Vector out(1);
  out << v;
  return out;
}

TEST(GibbsMeasure, InitialMassMatchesGaussianIntegral) {
  const Scenario s = conservative(0.01, 1e-3);
  const double exact = oracle::gaussian_box_mass(1.0);
  EXPECT_NEAR(exact, 2.9283724, 1e-7);
  const FlowField f64 = compute_flow(s, spec_for(s, 64), FlowRecipe::sben(), 2);
  const FlowField f32 = compute_flow(s, spec_for(s, 32), FlowRecipe::sben(), 2);
  const double e64 = gibbs_measure(spec_for(s, 64), s.hamiltonian, f64, 0.0) - exact;
  const double e32 = gibbs_measure(spec_for(s, 32), s.hamiltonian, f32, 0.0) - exact;
  EXPECT_LT(std::abs(e64), 3e-4);
  EXPECT_NEAR(e32 / e64, 4.0, 0.1);  // midpoint rule, second order
}

TEST(GibbsMeasure, ConservativeFlowKeepsMass) {
  const Scenario s = conservative(2.0, 1e-3);
  const GibbsSpec spec = spec_for(s, 16);
  const FlowField f = compute_flow(s, spec, FlowRecipe::sben(), 5);
  const double mu0 = gibbs_measure(spec, s.hamiltonian, f, 0.0);
  for (double t : f.stored_times()) EXPECT_NEAR(gibbs_measure(spec, s.hamiltonian, f, t), mu0, 1e-6);
  EXPECT_NEAR(dissipation_cost(spec, f).value(), 0.0, 1e-12);
  EXPECT_THROW(gibbs_measure(spec, s.hamiltonian, f, 0.123), std::out_of_range);
}

TEST(GibbsMeasure, AlphaScalesAndTinyBetaGivesVolume) {
  Scenario s = oracle::viscous_oscillator(0.5, 0.5, 1e-3);
  GibbsSpec spec = spec_for(s, 16);
  const FlowField f = compute_flow(s, spec, FlowRecipe::sben(), 2);
  const double base = gibbs_measure(spec, s.hamiltonian, f, 0.5);
  spec.alpha = 1.0;
  EXPECT_NEAR(gibbs_measure(spec, s.hamiltonian, f, 0.5), std::exp(-1.0) * base, 1e-12);
  s.beta = 1e-12;
  GibbsSpec flat = spec_for(s, 16);
  flat.alpha = 0.7;
  const FlowField g = compute_flow(s, flat, FlowRecipe::sben(), 2);
  EXPECT_NEAR(gibbs_measure(flat, s.hamiltonian, g, 0.5), std::exp(-0.7) * 4.0, 1e-9);
}

TEST(GibbsSpec, Validation) {
  GibbsSpec spec{0.0, 1.0, oracle::square(1.0), 4};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.resolution = 16;
  spec.beta = 0.0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.beta = 1.0;
  spec.box.upper.q[0] = -1.0;
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(TheoremCheck, ConservativeBothSidesVanish) {
  const Scenario s = conservative(1.0, 1e-3);
  const CostReport r = theorem_check(s, spec_for(s, 16), FlowRecipe::sben(), 1);
  EXPECT_NEAR(r.lhs, 0.0, r.tol_total);
  EXPECT_NEAR(r.rhs, 0.0, r.tol_total);
  EXPECT_TRUE(r.equality_tight);
  EXPECT_EQ(r.verdict(), Verdict::Pass);
}

TEST(TheoremCheck, SbenFlowIsTightAndPerturbedFlowIsStrict) {
  const Scenario s = oracle::viscous_oscillator(0.5, 1.0, 1e-3);
  const CostReport sben = theorem_check(s, spec_for(s, 16), FlowRecipe::sben(), 1);
  EXPECT_GT(sben.cost, 0.0);
  EXPECT_TRUE(sben.inequality_holds);
  EXPECT_TRUE(sben.equality_tight);
  EXPECT_LE(sben.max_gap, 1e-12);
  EXPECT_LE(sben.max_energy_identity_residual, 1e-12);
  ASSERT_EQ(sben.levels.size(), 2u);
  EXPECT_EQ(sben.levels[1].resolution, 32);
  EXPECT_DOUBLE_EQ(sben.levels[1].step, 5e-4);

  const CostReport pert = theorem_check(s, spec_for(s, 16), FlowRecipe::perturbed(0.1), 1);
  EXPECT_GT(pert.cost, sben.cost);
  EXPECT_TRUE(pert.inequality_holds);
  EXPECT_FALSE(pert.equality_tight);
  // The 3x margin is checked at production resolution in the acceptance suite.
  EXPECT_GT(pert.slack, pert.tol_total);
}

TEST(TheoremCheck, NonsmoothDissipationIsInformative) {
  Scenario s = oracle::viscous_oscillator(0.5, 0.5, 1e-3);
  s.dissipation = ConvexPotential::dry_friction(1, 0.3);
  const CostReport r = theorem_check(s, spec_for(s, 16), FlowRecipe::sben(), 0);
  EXPECT_TRUE(r.informative);
  EXPECT_EQ(r.verdict(), Verdict::Informative);
}

TEST(WorkPump, RampForcingSatisfiesCorollary) {
  const Scenario s = forced(scalar(0.3), 1.0);
  const WorkPumpReport r = work_pump_check(s, spec_for(s, 16), 1, 2000);
  EXPECT_TRUE(r.corollary_holds);
  EXPECT_FALSE(r.hypothesis_d.violated);
  EXPECT_EQ(r.verdict(), Verdict::Pass);
}

TEST(WorkPump, ConstantForcingHasZeroWork) {
  const Scenario s = oracle::make_scenario(
      Hamiltonian::forced_separable(1, 1.0, PotentialEnergy::harmonic(1.0), Forcing::constant(scalar(0.4))),
      ConvexPotential::quadratic_velocity(1, 0.5), 1.0, 1e-3);
  const WorkPumpReport r = work_pump_check(s, spec_for(s, 16), 0, 2000);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.corollary_holds);
  EXPECT_GE(r.muT, r.mu0 - r.tol_total);
}

TEST(WorkPump, GateRefusesShiftedPotentialAndUnforcedHamiltonian) {
  Scenario s = forced(scalar(0.3), 1.0);
  s.dissipation = s.dissipation.translated(oracle::point(0.5, 0.0));
  EXPECT_THROW(work_pump_check(s, spec_for(s, 16), 0, 2000), PreconditionError);
  const Scenario plain = oracle::viscous_oscillator(0.5, 1.0);
  EXPECT_THROW(work_pump_check(plain, spec_for(plain, 16), 0, 2000), PreconditionError);
}

TEST(PushforwardWitness, GibbsCurveIsNotThePushforward) {
  const Scenario cons = conservative(1.0, 1e-3);
  const auto c = pushforward_witness(cons, spec_for(cons, 16), FlowRecipe::sben());
  EXPECT_LT(std::abs(c.difference), 1e-2) << c.difference;  // quadrature error only, about 1e-3
  const Scenario visc = oracle::viscous_oscillator(0.5, 1.0, 1e-3);
  const auto v = pushforward_witness(visc, spec_for(visc, 16), FlowRecipe::sben());
  EXPECT_GT(std::abs(v.difference), 0.3) << v.difference;  // about 0.68
}

}  // namespace
}  // namespace sben
