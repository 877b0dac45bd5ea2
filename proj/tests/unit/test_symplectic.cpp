#include <gtest/gtest.h>

#include <random>

#include "sben/errors.hpp"
#include "sben/hamiltonian.hpp"
#include "sben/symplectic.hpp"
#include "support/oracles.hpp"

namespace sben {
namespace {

PhasePoint random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  PhasePoint z = PhasePoint::zero(n);
  for (int i = 0; i < n; ++i) z.q[i] = u(rng), z.p[i] = u(rng);
  return z;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(Pairing, OrthogonalBasisVectors) { EXPECT_EQ(pairing(vec({1, 0}), vec({0, 1})), 0.0); }

TEST(Pairing, DotProduct) { EXPECT_EQ(pairing(vec({2, 3}), vec({4, 5})), 23.0); }

TEST(Pairing, ZeroVector) {
  std::mt19937_64 rng(3);
  const PhasePoint z = random_point(4, rng);
  EXPECT_EQ(pairing(z.q, Vector::Zero(4)), 0.0);
}

TEST(Pairing, DimensionMismatchThrows) { EXPECT_THROW(pairing(vec({1, 2}), vec({1})), DimensionError); }

TEST(DoublePairing, UnitCase) {
  CotangentPoint a{vec({1}), vec({0})};
  PhasePoint z{vec({1}), vec({0})};
  EXPECT_EQ(double_pairing(a, z), 1.0);
}

TEST(DoublePairing, JzAgainstzVanishes) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const PhasePoint z = random_point(3, rng);
    EXPECT_NEAR(double_pairing(to_cotangent(z), z), 0.0, 1e-14);
  }
}

TEST(DoublePairing, ZeroCovector) {
  std::mt19937_64 rng(6);
  EXPECT_EQ(double_pairing(CotangentPoint::zero(2), random_point(2, rng)), 0.0);
}

TEST(J, MinusJStarJIsIdentityExactly) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const PhasePoint z = random_point(1 + k % kMaxDimension, rng);
    EXPECT_TRUE(-to_phase(to_cotangent(z)) == z);
    EXPECT_TRUE(to_phase(to_cotangent(z)) == -z);
  }
}

TEST(J, RejectsNonFinite) {
  PhasePoint z = oracle::point(1.0, std::nan(""));
  EXPECT_THROW(validate(z), std::invalid_argument);
  EXPECT_THROW(validate(PhasePoint{vec({1, 2}), vec({1})}), DimensionError);
}

TEST(Omega, CanonicalPair) { EXPECT_EQ(omega(oracle::point(1, 0), oracle::point(0, 1)), 1.0); }

TEST(Omega, AntisymmetryAndBilinearity) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const PhasePoint a = random_point(2, rng), b = random_point(2, rng), c = random_point(2, rng);
    EXPECT_EQ(omega(a, a), 0.0);
    EXPECT_NEAR(omega(a, b) + omega(b, a), 0.0, 1e-12);
    EXPECT_NEAR(omega(2.5 * a + b, c), 2.5 * omega(a, c) + omega(b, c), 1e-12);
    EXPECT_NEAR(omega(a, b), double_pairing(to_cotangent(a), b), 1e-12);
  }
}

TEST(SymplecticGradient, HarmonicOscillatorHand) {
  const auto h = Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::harmonic(1.0));
  const PhasePoint xh = symplectic_gradient(h, 0.0, oracle::point(1, 0));
  EXPECT_EQ(xh.q[0], 0.0);
  EXPECT_EQ(xh.p[0], -1.0);
}

TEST(SymplecticGradient, ConstantHamiltonianHasZeroField) {
  const auto h = Hamiltonian::custom(
      1, [](double, const PhasePoint&) { return 3.0; }, {}, {}, "constant", false);
  const PhasePoint xh = symplectic_gradient(h, 0.5, oracle::point(0.3, -0.7));
  EXPECT_NEAR(max_abs(xh), 0.0, 1e-9);
}

TEST(SymplecticGradient, EnergyConservationIdentity) {
  std::mt19937_64 rng(11);
  const auto h = Hamiltonian::separable_kinetic(2, 1.3, PotentialEnergy::double_well(1.0, 0.4));
  for (int k = 0; k < 100; ++k) {
    const PhasePoint z = random_point(2, rng);
    EXPECT_NEAR(double_pairing(h.gradient(0.0, z), symplectic_gradient(h, 0.0, z)), 0.0, 1e-8);
  }
}

}  // namespace
}  // namespace sben
