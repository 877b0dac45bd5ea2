#include <gtest/gtest.h>

#include <cmath>

#include "sben/stochastic.hpp"
#include "support/oracles.hpp"

namespace sben {
namespace {

using oracle::point;

std::vector<double> draw_eta(const DissipativeVelocityDensity& d, SamplerBackend b, int n, std::uint64_t seed) {
  Rng rng(seed);
  MetropolisChain chain;
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(sample_dissipative_velocity(d, b, rng, &chain).v_dissipative.p[0]);
  return out;
}

TEST(DeriveSeed, DistinctAndStable) {
  EXPECT_EQ(derive_seed(42, 0), derive_seed(42, 0));
  EXPECT_NE(derive_seed(42, 0), derive_seed(42, 1));
  EXPECT_NE(derive_seed(42, 0), derive_seed(43, 0));
}

TEST(ExactGaussian, MeanAndVarianceOfViscousLaw) {
  // c = 0.5, β = 4, q̇ = 1.
  const Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 4.0);
  const auto d = DissipativeVelocityDensity::at(s, 0.0, point(0.0, 1.0));
  EXPECT_EQ(resolve_backend(s, SamplerBackend::Auto), SamplerBackend::ExactGaussian);
  const int n = 100000;
  const auto eta = draw_eta(d, SamplerBackend::ExactGaussian, n, 1);
  const double var = 0.125;
  EXPECT_NEAR(oracle::mean(eta), -0.5, 3.0 * std::sqrt(var / n));
  EXPECT_NEAR(oracle::variance(eta), var, 3.0 * var * std::sqrt(2.0 / (n - 1)));
}

TEST(ExactGaussian, ZeroVelocityIsCentred) {
  const Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 4.0);
  const auto eta = draw_eta(DissipativeVelocityDensity::at(s, 0.0, point(0.3, 0.0)), SamplerBackend::ExactGaussian, 40000, 2);
  EXPECT_NEAR(oracle::mean(eta), 0.0, 4.0 * std::sqrt(0.125 / 40000));
}

TEST(ExactGaussian, LargeBetaConcentratesOnDeterministicForce) {
  const Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 1e6);
  for (double eta : draw_eta(DissipativeVelocityDensity::at(s, 0.0, point(0.0, 1.0)), SamplerBackend::ExactGaussian, 1000, 3))
    EXPECT_NEAR(eta, -0.5, 1e-2);
}

TEST(TruncatedExponential, MeanMatchesQuadrature) {
  Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 10.0);
  s.dissipation = ConvexPotential::dry_friction(1, 1.0);
  EXPECT_EQ(resolve_backend(s, SamplerBackend::Auto), SamplerBackend::TruncatedExponential);
  const double expected = oracle::truncated_exponential_mean_quadrature(1.0, 10.0);
  EXPECT_NEAR(truncated_exponential_mean(1.0, 10.0), expected, 1e-10);
  EXPECT_NEAR(truncated_exponential_mean(1.0, 1e-9), 0.0, 1e-9);
  const int n = 100000;
  const auto eta = draw_eta(DissipativeVelocityDensity::at(s, 0.0, point(0.0, 1.0)), SamplerBackend::TruncatedExponential, n, 4);
  EXPECT_NEAR(oracle::mean(eta), expected, 4.0 * std::sqrt(oracle::variance(eta) / n));
  for (double e : eta) ASSERT_LE(std::abs(e), 1.0);
}

TEST(Metropolis, AgreesWithExactSampler) {
  const Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 4.0);
  const auto d = DissipativeVelocityDensity::at(s, 0.0, point(0.0, 1.0));
  const auto exact = draw_eta(d, SamplerBackend::ExactGaussian, 5000, 5);
  const auto mh = draw_eta(d, SamplerBackend::Metropolis, 5000, 6);
  EXPECT_LE(oracle::ks_distance(exact, mh), 0.03);
}

TEST(Metropolis, RejectsDegenerateSupport) {
  Scenario s = oracle::viscous_oscillator();
  s.dissipation = ConvexPotential::zero(1);
  EXPECT_EQ(resolve_backend(s, SamplerBackend::Auto), SamplerBackend::PointMass);
  EXPECT_THROW(resolve_backend(s, SamplerBackend::Metropolis), std::invalid_argument);
  EXPECT_THROW(resolve_backend(oracle::viscous_oscillator(), SamplerBackend::TruncatedExponential),
               std::invalid_argument);
}

TEST(ForceDensity, ConstantDifferenceToFullBracket) {
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-3.0 + 0.03 * i);
  Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 2.0);
  EXPECT_LE(force_density_consistency(s, 0.0, point(0.4, 0.7), grid), 1e-10);
  s.dissipation = ConvexPotential::dry_friction(1, 1.0);
  EXPECT_LE(force_density_consistency(s, 0.0, point(0.4, 0.7), grid), 1e-10);
}

TEST(ForceDensity, ZeroDissipationIsPointMass) {
  Scenario s = oracle::viscous_oscillator();
  s.dissipation = ConvexPotential::zero(1);
  const ForceDensity f = reduce_to_force_density(s, 0.0, point(0.4, 0.7));
  const auto support = f.support();
  EXPECT_EQ(support[0].lower, 0.0);
  EXPECT_EQ(support[0].upper, 0.0);
}

TEST(Normalization, GaussianIntegralAndDegenerateCase) {
  const Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 4.0);
  const auto d = DissipativeVelocityDensity::at(s, 0.0, point(0.0, 1.0));
  const auto z = estimate_normalization_1d(d);
  ASSERT_FALSE(z.diverged);
  // ∫ exp(−β (η + c q̇)²/(2c)) dη = sqrt(2π c/β); the bracket vanishes at the mode.
  EXPECT_NEAR(z.value, std::sqrt(2.0 * std::numbers::pi * 0.125), 1e-8);
}

TEST(IntegrateStochastic, ZeroDissipationEqualsDeterministicRun) {
  Scenario s = oracle::viscous_oscillator(0.5, 2.0);
  s.dissipation = ConvexPotential::zero(1);
  Rng rng(7);
  const auto st = integrate_stochastic(s, point(1.0, 0.0), rng);
  const auto det = integrate(s, point(1.0, 0.0));
  ASSERT_EQ(st.trajectory.states.size(), det.states.size());
  for (std::size_t k = 0; k < det.states.size(); ++k) ASSERT_TRUE(st.trajectory.states[k] == det.states[k]);
}

TEST(IntegrateStochastic, LargeBetaTracksDeterministicTrajectory) {
  const Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 1e6);
  Rng rng(8);
  const auto st = integrate_stochastic(s, point(1.0, 0.0), rng);
  const auto det = integrate(s, point(1.0, 0.0));
  double sup = 0.0;
  for (std::size_t k = 0; k < det.states.size(); ++k) sup = std::max(sup, max_abs(st.trajectory.states[k] - det.states[k]));
  EXPECT_LE(sup, 0.05);
}

TEST(IntegrateStochastic, SameSeedSameTrajectory) {
  const Scenario s = oracle::viscous_oscillator(0.5, 1.0, 1e-3, 10.0);
  Rng a(derive_seed(9, 0)), b(derive_seed(9, 0)), c(derive_seed(9, 1));
  const auto ta = integrate_stochastic(s, point(1.0, 0.0), a);
  const auto tb = integrate_stochastic(s, point(1.0, 0.0), b);
  const auto tc = integrate_stochastic(s, point(1.0, 0.0), c);
  EXPECT_TRUE(ta.trajectory.states.back() == tb.trajectory.states.back());
  EXPECT_FALSE(ta.trajectory.states.back() == tc.trajectory.states.back());
}

TEST(IntegrateStochastic, PerStepDrawsPassNormalityCheck) {
  // Standardised η over a small ensemble: (η + c q̇)/sqrt(c/β) ~ N(0, 1).
  const double c = 0.5, beta = 10.0;
  const Scenario s = oracle::viscous_oscillator(c, 1.0, 1e-2, beta);
  std::vector<double> zs;
  for (int m = 0; m < 1000; ++m) {
    Rng rng(derive_seed(11, static_cast<std::uint64_t>(m)));
    const auto st = integrate_stochastic(s, point(1.0, 0.0), rng);
    for (std::size_t k = 0; k < st.eta.size(); ++k) {
      const double qdot = st.trajectory.states[k].p[0];
      zs.push_back((st.eta[k][0] + c * qdot) / std::sqrt(c / beta));
    }
  }
  const double n = static_cast<double>(zs.size());
  EXPECT_NEAR(oracle::mean(zs), 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(oracle::variance(zs), 1.0, 4.0 * std::sqrt(2.0 / n));
}

}  // namespace
}  // namespace sben
