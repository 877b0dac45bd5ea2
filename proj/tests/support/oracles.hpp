#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library's numerics.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sben/scenario.hpp"

namespace sben::oracle {

/// Underdamped m q̈ + c q̇ + q = 0 with q(0) = 1, q̇(0) = 0 (m = 1).
inline double damped_q(double t, double c) {
  const double w = std::sqrt(1.0 - c * c / 4.0);
  return std::exp(-c * t / 2.0) * (std::cos(w * t) + c / (2.0 * w) * std::sin(w * t));
}

/// p = m q̇ for the same solution.
inline double damped_p(double t, double c) {
  const double w = std::sqrt(1.0 - c * c / 4.0);
  return -std::exp(-c * t / 2.0) * (1.0 + c * c / (4.0 * w * w)) * w * std::sin(w * t);
}

/// (∫_{−a}^{a} e^{−x²/2} dx)², the Gibbs mass of H = ½(q² + p²) on [−a, a]².
inline double gaussian_box_mass(double a) {
  const double one = std::sqrt(2.0 * std::numbers::pi) * std::erf(a / std::numbers::sqrt2);
  return one * one;
}

/// Mean of the density ∝ exp(−λ η) on [−k, k] by composite Simpson.
inline double truncated_exponential_mean_quadrature(double k, double lambda, int panels = 20000) {
  double num = 0.0, den = 0.0;
  const double h = 2.0 * k / panels;
  for (int i = 0; i <= panels; ++i) {
    const double x = -k + h * i;
    const double wgt = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double f = std::exp(-lambda * x);
    num += wgt * x * f;
    den += wgt * f;
  }
  return num / den;
}

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Scenario skeleton; callers fill in the rest.
inline Scenario make_scenario(Hamiltonian h, ConvexPotential phi, double horizon, double step, double beta = 1.0) {
  Scenario s{.hamiltonian = std::move(h), .dissipation = std::move(phi), .initial = {}, .box = {}};
  s.horizon = horizon;
  s.step = step;
  s.beta = beta;
  return s;
}

inline Scenario viscous_oscillator(double c = 0.5, double horizon = 10.0, double step = 1e-3, double beta = 1.0) {
  return make_scenario(Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::harmonic(1.0)),
                       ConvexPotential::quadratic_velocity(1, c), horizon, step, beta);
}

inline PhasePoint point(double q, double p) {
  PhasePoint z = PhasePoint::zero(1);
  z.q[0] = q;
  z.p[0] = p;
  return z;
}

inline PhaseBox square(double a) { return PhaseBox{point(-a, -a), point(a, a)}; }

}  // namespace sben::oracle
