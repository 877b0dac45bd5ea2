#include "sben/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "sben/errors.hpp"
#include "sben/hamiltonian.hpp"
#include "sben/scenario.hpp"
#include "sben/solver.hpp"
#include "sben/stochastic.hpp"

namespace sben {

namespace {

using Rng64 = std::mt19937_64;

PhasePoint random_point(int n, Rng64& rng, double half_width = 2.0) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  PhasePoint z = PhasePoint::zero(n);
  for (int i = 0; i < n; ++i) {
    z.q[i] = u(rng);
    z.p[i] = u(rng);
  }
  return z;
}

SuiteCheck at_most(std::string name, double observed, double threshold) {
  return {std::move(name), observed <= threshold, observed, threshold};
}

std::vector<Hamiltonian> hamiltonian_catalogue() {
  std::vector<Hamiltonian> out;
  out.push_back(Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::harmonic(1.0)));
  out.push_back(Hamiltonian::separable_kinetic(2, 2.0, PotentialEnergy::double_well(1.0, 0.5)));
  out.push_back(Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::pendulum(9.81)));
  Vector ramp(1);
  ramp << 0.3;
  out.push_back(Hamiltonian::forced_separable(1, 1.0, PotentialEnergy::harmonic(1.0), Forcing::ramp(ramp)));
  Vector amp(2);
  amp << 0.5, -0.2;
  out.push_back(Hamiltonian::forced_separable(2, 1.5, PotentialEnergy::harmonic(2.0), Forcing::sinusoid(amp, 1.3)));
  return out;
}

std::vector<ConvexPotential> potential_catalogue() {
  std::vector<ConvexPotential> out;
  out.push_back(ConvexPotential::zero(1));
  out.push_back(ConvexPotential::quadratic_velocity(1, 0.5));
  out.push_back(ConvexPotential::quadratic_velocity(2, 1.5));
  out.push_back(ConvexPotential::dry_friction(1, 1.0));
  out.push_back(ConvexPotential::dry_friction(2, 0.3));
  out.push_back(ConvexPotential::phase_quadratic(1, 0.7, 1.3));
  out.push_back(ConvexPotential::grid_velocity(1, PiecewiseLinearFunction({-2, -1, 0, 1, 2}, {3, 1, 0, 0.5, 2})));
  PhasePoint shift = PhasePoint::zero(1);
  shift.q[0] = 0.4;
  out.push_back(ConvexPotential::quadratic_velocity(1, 0.5).translated(shift));
  return out;
}

// An element of a nonempty interval: its midpoint when bounded.
double pick(const Interval& I) { return I.is_bounded() ? 0.5 * (I.lower + I.upper) : I.clamp(0.0); }

Scenario make_scenario(Hamiltonian h, ConvexPotential phi, double beta) {
  Scenario s{.hamiltonian = std::move(h), .dissipation = std::move(phi), .initial = {}, .box = {}};
  s.beta = beta;
  return s;
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

bool SelftestReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

std::string SelftestReport::format() const {
  std::ostringstream out;
  for (const auto& s : suites) {
    out << fmt::format("{} {}\n", s.passed() ? "PASS" : "FAIL", s.name);
    for (const auto& c : s.checks)
      out << fmt::format("  {} {:<44} observed {:.3e}  limit {:.3e}\n", c.passed ? "ok  " : "FAIL", c.name,
                         c.observed, c.threshold);
  }
  out << fmt::format("{}\n", passed() ? "all suites passed" : "selftest FAILED");
  return out.str();
}

SuiteResult symplectic_suite(const SelftestOps& ops, std::uint64_t seed) {
  Rng64 rng(seed);
  SuiteResult r{"symplectic", {}};
  double involution = 0.0, antisym = 0.0, bilinear = 0.0, omega_vs_j = 0.0;
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 200; ++trial) {
      const PhasePoint z1 = random_point(n, rng), z2 = random_point(n, rng), z3 = random_point(n, rng);
      involution = std::max(involution, max_abs(-ops.J_star(ops.J(z1)) - z1));
      antisym = std::max(antisym, std::abs(omega(z1, z2) + omega(z2, z1)));
      const double a = coef(rng), b = coef(rng);
      const double lhs = omega(a * z1 + b * z2, z3);
      const double rhs = a * omega(z1, z3) + b * omega(z2, z3);
      bilinear = std::max(bilinear, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
      omega_vs_j = std::max(omega_vs_j, std::abs(omega(z1, z2) - double_pairing(ops.J(z1), z2)));
    }
  }
  r.checks.push_back({"-J*J = identity (exact)", involution == 0.0, involution, 0.0});
  r.checks.push_back(at_most("omega antisymmetry", antisym, 1e-12));
  r.checks.push_back(at_most("omega bilinearity", bilinear, 1e-12));
  r.checks.push_back(at_most("omega(z1,z2) = <<J z1, z2>>", omega_vs_j, 1e-12));

  double conservation = 0.0;
  std::uniform_real_distribution<double> time(0.0, 10.0);
  for (const auto& h : hamiltonian_catalogue()) {
    for (int trial = 0; trial < 100; ++trial) {
      const double t = time(rng);
      const PhasePoint z = random_point(h.dimension(), rng);
      const CotangentPoint dh = h.gradient(t, z);
      const PhasePoint xh = -ops.J_star(dh);
      conservation = std::max(conservation, std::abs(double_pairing(dh, xh)));
    }
  }
  r.checks.push_back(at_most("<<DH, XH>> = 0 on the catalogue", conservation, 1e-8));
  return r;
}

SuiteResult fenchel_suite(std::uint64_t seed) {
  Rng64 rng(seed);
  SuiteResult r{"fenchel", {}};
  double worst_inequality = 0.0, worst_equality = 0.0, worst_gap_sign = 0.0;
  for (const auto& phi : potential_catalogue()) {
    const int n = phi.dimension();
    for (int trial = 0; trial < 300; ++trial) {
      const PhasePoint z = random_point(n, rng, 3.0);
      const ExtendedReal fz = phi.evaluate(z);
      if (fz.is_infinite()) continue;
      // Symplectic Fenchel inequality at an arbitrary z' in the domain.
      const CoordinateBox dom = phi.symplectic_conjugate_domain();
      PhasePoint zp = random_point(n, rng, 3.0);
      for (int i = 0; i < n; ++i) {
        zp.q[i] = dom.q[static_cast<std::size_t>(i)].clamp(zp.q[i]);
        zp.p[i] = dom.p[static_cast<std::size_t>(i)].clamp(zp.p[i]);
      }
      const ExtendedReal fzp = symplectic_conjugate(phi, zp);
      if (fzp.is_finite())
        worst_inequality = std::max(worst_inequality, omega(zp, z) - (fz.value() + fzp.value()));
      // Equality on the symplectic subdifferential z' = −J* g, g ∈ ∂φ(z);
      // the box stores q-derivatives in `p` and p-derivatives in `q`.
      const CoordinateBox sub = phi.subdifferential(z);
      PhasePoint s = PhasePoint::zero(n);
      for (int i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        s.q[i] = pick(sub.q[iu]);
        s.p[i] = -pick(sub.p[iu]);
      }
      const ExtendedReal fs = symplectic_conjugate(phi, s);
      const double eq = fs.is_finite() ? std::abs(fz.value() + fs.value() - omega(s, z)) : INFINITY;
      worst_equality = std::max(worst_equality, eq / (1.0 + std::abs(fz.value())));
      // The SBEN gap is nonnegative everywhere.
      const PhasePoint xh = random_point(n, rng), v = random_point(n, rng);
      const ExtendedReal gap = sben_gap(phi, xh, v);
      if (gap.is_finite()) worst_gap_sign = std::max(worst_gap_sign, -gap.value());
    }
  }
  r.checks.push_back(at_most("phi(z) + phi^*w(z') >= omega(z', z)", worst_inequality, 1e-12));
  r.checks.push_back(at_most("equality on the symplectic subdifferential", worst_equality, 1e-12));
  r.checks.push_back(at_most("SBEN gap nonnegative", worst_gap_sign, 1e-12));
  return r;
}

SuiteResult conjugate_suite(int grid_points) {
  SuiteResult r{"conjugate", {}};
  // One-dimensional conjugates against sampled suprema, and biconjugates.
  const std::vector<ScalarConvex> parts = {
      ScalarConvex::quadratic(0.7, 0.3), ScalarConvex::absolute(1.2, -0.4),
      ScalarConvex(PiecewiseLinearFunction({-2, -1, 0, 1, 2}, {3, 1, 0, 0.5, 2}))};
  const int samples = 40001;
  std::vector<double> xs(samples), ys(samples);
  double worst_conj = 0.0, worst_bi = 0.0;
  for (const auto& f : parts) {
    // Sample on [−2, 2] (the piecewise-linear domain) for the grid shape,
    // wider elsewhere so sampled maximisers are interior.
    const bool grid = std::holds_alternative<PiecewiseLinearFunction>(f.shape());
    const double half = grid ? 2.0 : 20.0;
    for (int i = 0; i < samples; ++i) {
      xs[i] = -half + 2.0 * half * i / (samples - 1);
      ys[i] = f.value(xs[i]).value();
    }
    const Interval dom = f.conjugate_domain();
    for (int k = 0; k <= 40; ++k) {
      const double w = std::clamp(-3.0 + 6.0 * k / 40.0, dom.lower, dom.upper);
      const ExtendedReal exact = f.conjugate(w);
      if (exact.is_finite())
        worst_conj = std::max(worst_conj, std::abs(exact.value() - numeric_conjugate_1d(xs, ys, w)));
    }
    // f** on [−1.5, 1.5] from conjugate samples over its domain.
    const double wlo = std::max(dom.lower, -10.0), whi = std::min(dom.upper, 10.0);
    std::vector<double> ws(samples), cs(samples);
    for (int i = 0; i < samples; ++i) {
      ws[i] = wlo + (whi - wlo) * i / (samples - 1);
      cs[i] = f.conjugate(ws[i]).value();
    }
    for (int k = 0; k <= 30; ++k) {
      const double x = -1.5 + 3.0 * k / 30.0;
      worst_bi = std::max(worst_bi, std::abs(f.value(x).value() - numeric_conjugate_1d(ws, cs, x)));
    }
  }
  r.checks.push_back(at_most("scalar conjugate vs sampled supremum", worst_conj, 1e-5));
  // Conjugate kinks fall between w samples, so the biconjugate error scales
  // with the w spacing.
  r.checks.push_back(at_most("scalar biconjugate round trip", worst_bi, 1e-4));

  // Symplectic polar against the brute-force grid supremum on [−5, 5]².
  const std::vector<std::pair<std::string, ConvexPotential>> polars = {
      {"quadratic", ConvexPotential::quadratic_velocity(1, 1.0)},
      {"dry friction", ConvexPotential::dry_friction(1, 1.0)},
      {"phase quadratic", ConvexPotential::phase_quadratic(1, 1.0, 1.0)}};
  for (const auto& [name, phi] : polars) {
    const ConjugateComparison c = compare_conjugate_with_grid(phi, 5.0, grid_points);
    r.checks.push_back(at_most("phi^*w vs grid supremum (" + name + ")", c.max_finite_error, 5e-2));
    if (c.infinite_nodes > 0)
      r.checks.push_back(at_most("grid supremum grows off dom (" + name + ")", -c.min_growth_margin, 5e-2));
  }
  return r;
}

SuiteResult gradient_suite(std::uint64_t seed) {
  SuiteResult r{"gradients", {}};
  double worst_grad = 0.0, worst_time = 0.0;
  for (const auto& h : hamiltonian_catalogue()) {
    const GradientSelfTestReport g = gradient_selftest(h, 50, seed);
    worst_grad = std::max(worst_grad, g.max_gradient_error);
    worst_time = std::max(worst_time, g.max_time_derivative_error);
  }
  r.checks.push_back(at_most("DH vs central differences", worst_grad, 1e-4));
  r.checks.push_back(at_most("dH/dt vs central differences", worst_time, 1e-4));
  return r;
}

SuiteResult conservative_suite() {
  SuiteResult r{"conservative limit", {}};
  Scenario s = make_scenario(Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::harmonic(1.0)),
                             ConvexPotential::zero(1), 1.0);
  s.horizon = 10.0;
  s.step = 1e-2;
  PhasePoint z0 = PhasePoint::zero(1);
  z0.q[0] = 1.0;
  const Trajectory tr = integrate(s, z0);
  const std::vector<double> energy = energy_series(s, tr);
  double drift = 0.0;
  for (double e : energy) drift = std::max(drift, std::abs(e - energy.front()));
  r.checks.push_back(at_most("energy drift, phi = 0, T = 10", drift, 1e-4));
  double worst_gap = 0.0;
  for (double g : tr.residual_gaps) worst_gap = std::max(worst_gap, g);
  r.checks.push_back(at_most("SBEN gap along the orbit", worst_gap, 1e-8));

  Scenario well = make_scenario(Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::double_well(1.0, 0.5)),
                                ConvexPotential::zero(1), 1.0);
  well.horizon = 2.0;
  well.step = 1e-2;
  PhasePoint w0 = PhasePoint::zero(1);
  w0.q[0] = 0.3;
  w0.p[0] = 0.2;
  r.checks.push_back(
      at_most("|det D(flow map) - 1|, double well", std::abs(flow_map_jacobian_determinant(well, w0) - 1.0), 5e-3));
  return r;
}

SuiteResult sampler_suite(std::uint64_t seed, int draws) {
  SuiteResult r{"sampler statistics", {}};
  Rng rng(seed);
  PhasePoint z = PhasePoint::zero(1);
  z.q[0] = 0.2;
  z.p[0] = 0.8;

  const double c = 0.5, beta = 2.0;
  const Scenario quad = make_scenario(Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::harmonic(1.0)),
                                      ConvexPotential::quadratic_velocity(1, c), beta);
  const auto gauss = DissipativeVelocityDensity::at(quad, 0.0, z);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double eta = sample_dissipative_velocity(gauss, SamplerBackend::ExactGaussian, rng).v_dissipative.p[0];
    sum += eta;
    sum2 += eta * eta;
  }
  const double mean = sum / draws, var = sum2 / draws - mean * mean;
  const double target_mean = -c * z.p[0], target_var = c / beta;
  r.checks.push_back(at_most("gaussian mean (standard errors)",
                             std::abs(mean - target_mean) / std::sqrt(target_var / draws), 4.0));
  r.checks.push_back(at_most("gaussian variance (standard errors)",
                             std::abs(var - target_var) / (target_var * std::sqrt(2.0 / (draws - 1))), 4.0));

  const double k = 1.0;
  const Scenario dry = make_scenario(Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::harmonic(1.0)),
                                     ConvexPotential::dry_friction(1, k), beta);
  const auto texp = DissipativeVelocityDensity::at(dry, 0.0, z);
  sum = sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double eta = sample_dissipative_velocity(texp, SamplerBackend::TruncatedExponential, rng).v_dissipative.p[0];
    sum += eta;
    sum2 += eta * eta;
  }
  const double tmean = sum / draws, tvar = sum2 / draws - tmean * tmean;
  const double expected = truncated_exponential_mean(k, beta * z.p[0]);
  r.checks.push_back(at_most("truncated exponential mean (standard errors)",
                             std::abs(tmean - expected) / std::sqrt(tvar / draws), 4.0));
  return r;
}

SelftestReport run_selftest(const SelftestOps& ops, std::uint64_t seed) {
  SelftestReport report;
  report.suites.push_back(symplectic_suite(ops, seed));
  report.suites.push_back(fenchel_suite(seed));
  report.suites.push_back(conjugate_suite());
  report.suites.push_back(gradient_suite(seed));
  report.suites.push_back(conservative_suite());
  report.suites.push_back(sampler_suite(seed));
  return report;
}

std::vector<double> brute_force_symplectic_conjugate(const ConvexPotential& phi, double half_width, int points) {
  if (phi.dimension() != 1) throw DimensionError("brute-force conjugate is implemented for n = 1");
  if (points < 2 || !(half_width > 0.0)) throw std::invalid_argument("brute-force conjugate: bad grid");
  const auto np = static_cast<std::size_t>(points);
  std::vector<double> axis(np);
  for (std::size_t i = 0; i < np; ++i) axis[i] = -half_width + 2.0 * half_width * static_cast<double>(i) / (points - 1);
  // φ on the grid; +inf entries never attain the supremum.
  std::vector<double> phi_grid(np * np);
  PhasePoint z = PhasePoint::zero(1);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < np; ++j) {
      z.q[0] = axis[i];
      z.p[0] = axis[j];
      phi_grid[i * np + j] = phi.evaluate(z).raw();
    }
  // ω(z', z) = q' p − q p'.
  std::vector<double> out(np * np);
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < np; ++b) {
      const double qp = axis[a], pp = axis[b];
      double best = -INFINITY;
      for (std::size_t i = 0; i < np; ++i) {
        const double row = -axis[i] * pp;
        const double* f = &phi_grid[i * np];
        for (std::size_t j = 0; j < np; ++j) best = std::max(best, qp * axis[j] + row - f[j]);
      }
      out[a * np + b] = best;
    }
  return out;
}

ConjugateComparison compare_conjugate_with_grid(const ConvexPotential& phi, double half_width, int points) {
  const std::vector<double> grid = brute_force_symplectic_conjugate(phi, half_width, points);
  const CoordinateBox dom = phi.symplectic_conjugate_domain();
  ConjugateComparison c;
  c.min_growth_margin = INFINITY;
  PhasePoint zp = PhasePoint::zero(1);
  const auto np = static_cast<std::size_t>(points);
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < np; ++b) {
      zp.q[0] = -half_width + 2.0 * half_width * static_cast<double>(a) / (points - 1);
      zp.p[0] = -half_width + 2.0 * half_width * static_cast<double>(b) / (points - 1);
      const double brute = grid[a * np + b];
      const ExtendedReal exact = symplectic_conjugate(phi, zp);
      if (exact.is_finite()) {
        ++c.finite_nodes;
        c.max_finite_error = std::max(c.max_finite_error, std::abs(exact.value() - brute));
      } else {
        ++c.infinite_nodes;
        const double dist = dom.q[0].distance(zp.q[0]) + dom.p[0].distance(zp.p[0]);
        c.min_growth_margin = std::min(c.min_growth_margin, brute - half_width * dist);
      }
    }
  if (c.infinite_nodes == 0) c.min_growth_margin = 0.0;
  return c;
}

}  // namespace sben
