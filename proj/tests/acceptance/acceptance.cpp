// Acceptance suite: one PASS/FAIL line per criterion with its runtime.
// Usage: sben_acceptance [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "sben/errors.hpp"
#include "sben/liouville.hpp"
#include "sben/run.hpp"
#include "sben/selftest.hpp"
#include "sben/solver.hpp"
#include "sben/stochastic.hpp"
#include "support/oracles.hpp"

namespace {

using namespace sben;
using oracle::point;

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> body;
};

Outcome symplectic_algebra() {
  Outcome o;
  const SuiteResult r = symplectic_suite();
  for (const auto& c : r.checks) o.require(c.passed, fmt::format("{} {:.1e}", c.name, c.observed));
  return o;
}

Outcome conjugate_oracle() {
  Outcome o;
  for (const auto& [name, phi] : {std::pair{"quadratic", ConvexPotential::quadratic_velocity(1, 1.0)},
                                  std::pair{"dry friction", ConvexPotential::dry_friction(1, 1.0)}}) {
    const ConjugateComparison c = compare_conjugate_with_grid(phi, 5.0, 201);
    o.require(c.max_finite_error <= 5e-2, fmt::format("{}: max |analytic - grid| {:.2e} on {} finite nodes", name,
                                                      c.max_finite_error, c.finite_nodes));
    o.require(c.min_growth_margin >= -5e-2,
              fmt::format("{}: off-domain growth margin {:.2e} on {} nodes", name, c.min_growth_margin, c.infinite_nodes));
  }
  return o;
}

Outcome sben_equivalence() {
  Outcome o;
  const Scenario s = oracle::viscous_oscillator();
  const Trajectory tr = integrate(s, point(1.0, 0.0));
  double worst_gap = 0.0;
  int membership_failures = 0;
  for (int k = 0; k < tr.steps(); ++k) {
    worst_gap = std::max(worst_gap, tr.residual_gaps[k]);
    if (!symplectic_subdifferential_check(s.dissipation, tr.velocities[k], tr.dissipative_velocities[k], 1e-6))
      ++membership_failures;
  }
  o.require(worst_gap <= 1e-8, fmt::format("max gap {:.1e} over {} steps", worst_gap, tr.steps()));
  o.require(membership_failures == 0, fmt::format("{} subdifferential failures", membership_failures));

  const double pi_sol = action_functional(s, trajectory_from_states(s, tr.states)).value();
  double min_excess = INFINITY;
  for (int j = 1; j <= 20; ++j) {
    std::vector<Vector> q_path;
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
      const double t = tr.times[k] / s.horizon;
      Vector q = tr.states[k].q;
      q[0] += 0.1 * std::sin(std::numbers::pi * j * t) * std::sin(std::numbers::pi * t);
      q_path.push_back(q);
    }
    const ExtendedReal pi = action_functional(s, trajectory_from_states(s, lift_configuration_path(s, q_path, tr.states.front().p)));
    min_excess = std::min(min_excess, pi.raw() - pi_sol);
  }
  o.require(min_excess >= 0.0, fmt::format("Pi(solution) = {:.8f}, min Pi(perturbed) - Pi(solution) = {:.3e}", pi_sol, min_excess));
  return o;
}

double closed_form_error(double h) {
  const Scenario s = oracle::viscous_oscillator(0.5, 10.0, h);
  const Trajectory tr = integrate(s, point(1.0, 0.0));
  double err = 0.0;
  for (std::size_t k = 0; k < tr.states.size(); ++k)
    err = std::max(err, std::abs(tr.states[k].q[0] - oracle::damped_q(tr.times[k], 0.5)));
  return err;
}

Outcome analytic_ode() {
  Outcome o;
  const double e1 = closed_form_error(1e-3), e2 = closed_form_error(5e-4);
  o.require(e1 <= 5e-3, fmt::format("max |q - q_exact| {:.2e} at h = 1e-3", e1));
  // The default midpoint scheme is second order.
  o.require(e1 / e2 > 3.5 && e1 / e2 < 4.5, fmt::format("error ratio for h/2: {:.3f} (order 2 expects 4)", e1 / e2));
  return o;
}

Outcome sampler_statistics() {
  Outcome o;
  const double c = 0.5, beta = 4.0;
  const Scenario s = oracle::viscous_oscillator(c, 10.0, 1e-3, beta);
  const auto density = DissipativeVelocityDensity::at(s, 0.0, point(0.0, 1.0));
  Rng rng(2024);
  const int n = 100000;
  std::vector<double> exact;
  for (int i = 0; i < n; ++i)
    exact.push_back(sample_dissipative_velocity(density, SamplerBackend::ExactGaussian, rng).v_dissipative.p[0]);
  const double var = c / beta;
  const double mean_se = (oracle::mean(exact) + c) / std::sqrt(var / n);
  const double var_se = (oracle::variance(exact) - var) / (var * std::sqrt(2.0 / (n - 1)));
  o.require(std::abs(mean_se) <= 4.0 && std::abs(var_se) <= 4.0,
            fmt::format("mean {:+.2f} SE, variance {:+.2f} SE over 1e5 draws", mean_se, var_se));

  MetropolisChain chain;
  std::vector<double> mh, ref(exact.begin(), exact.begin() + 20000);
  for (int i = 0; i < 20000; ++i)
    mh.push_back(sample_dissipative_velocity(density, SamplerBackend::Metropolis, rng, &chain).v_dissipative.p[0]);
  const double ks = oracle::ks_distance(ref, mh);
  o.require(ks <= 0.03, fmt::format("Metropolis vs exact KS {:.4f}", ks));

  const Scenario cold = oracle::viscous_oscillator(c, 10.0, 1e-3, 1e6);
  Rng rng2(7);
  const auto st = integrate_stochastic(cold, point(1.0, 0.0), rng2);
  const auto det = integrate(cold, point(1.0, 0.0));
  double sup = 0.0;
  for (std::size_t k = 0; k < det.states.size(); ++k) sup = std::max(sup, max_abs(st.trajectory.states[k] - det.states[k]));
  o.require(sup <= 0.05, fmt::format("beta = 1e6 sup-norm distance {:.2e}", sup));
  return o;
}

GibbsSpec box_spec(const Scenario& s, int resolution) { return GibbsSpec{s.alpha, s.beta, oracle::square(1.0), resolution}; }

Outcome theorem() {
  Outcome o;
  const Scenario s = oracle::viscous_oscillator(0.5, 5.0, 1e-3);
  const CostReport sben = theorem_check(s, box_spec(s, 64), FlowRecipe::sben(), 1);
  o.require(sben.inequality_holds && sben.equality_tight,
            fmt::format("SBEN: mu_T - mu_0 = {:.8f}, beta C = {:.8f}, slack {:.2e}, tol {:.2e}", sben.lhs, sben.rhs,
                        sben.slack, sben.tol_total));
  const CostReport pert = theorem_check(s, box_spec(s, 64), FlowRecipe::perturbed(0.1), 1);
  o.require(pert.cost > sben.cost && pert.slack > 3.0 * pert.tol_total,
            fmt::format("perturbed: C = {:.6f} vs {:.6f}, slack {:.3e} vs 3 tol {:.3e}", pert.cost, sben.cost, pert.slack,
                        3.0 * pert.tol_total));
  return o;
}

Outcome work_pump() {
  Outcome o;
  Vector rate(1);
  rate << 0.3;
  Scenario s = oracle::make_scenario(
      Hamiltonian::forced_separable(1, 1.0, PotentialEnergy::harmonic(1.0), Forcing::ramp(rate)),
      ConvexPotential::quadratic_velocity(1, 0.5), 5.0, 1e-3);
  const WorkPumpReport r = work_pump_check(s, box_spec(s, 64), 1);
  o.require(r.corollary_holds, fmt::format("mu_T - mu_0 = {:.8f} >= work {:.8f} - tol {:.2e}", r.lhs, r.rhs, r.tol_total));
  s.dissipation = s.dissipation.translated(point(0.5, 0.0));
  bool refused = false;
  try {
    work_pump_check(s, box_spec(s, 64), 1);
  } catch (const PreconditionError&) {
    refused = true;
  }
  o.require(refused, "shifted potential refused by the sign-condition gate");
  return o;
}

Outcome conservative_limit() {
  Outcome o;
  Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3);
  s.dissipation = ConvexPotential::zero(1);
  const CostReport r = theorem_check(s, box_spec(s, 16), FlowRecipe::sben(), 1);
  o.require(std::abs(r.cost) <= 1e-12, fmt::format("C = {:.1e}", r.cost));
  o.require(std::abs(r.muT - r.mu0) <= r.tol_total, fmt::format("|mu_T - mu_0| = {:.1e} (tol {:.1e})", std::abs(r.muT - r.mu0), r.tol_total));
  double worst_det = 0.0;
  Scenario well = s;
  well.hamiltonian = Hamiltonian::separable_kinetic(1, 1.0, PotentialEnergy::double_well(1.0, 0.5));
  for (const Scenario* sc : {&s, &well})
    for (const PhasePoint& z : {point(1.0, 0.0), point(-0.4, 0.8), point(0.2, -1.1)})
      worst_det = std::max(worst_det, std::abs(flow_map_jacobian_determinant(*sc, z) - 1.0));
  o.require(worst_det <= 5e-3, fmt::format("max |det DPsi - 1| {:.1e}", worst_det));
  const Trajectory tr = integrate(s, point(1.0, 0.0));
  const auto e = energy_series(s, tr);
  double drift = 0.0;
  for (double v : e) drift = std::max(drift, std::abs(v - e.front()));
  o.require(drift < 1e-4, fmt::format("energy drift {:.1e} over T = 10", drift));
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "sben_acceptance_repro";
  fs::remove_all(root);
  for (const char* name : {"damped_oscillator", "stochastic_oscillator"}) {
    std::vector<RunResult> runs;
    for (const char* copy : {"a", "b"}) {
      RunOverrides ov;
      ov.output = root / name / copy;
      const RunConfig c = load_run_config(fs::path(SBEN_SOURCE_DIR) / "configs" / (std::string(name) + ".json"), ov);
      std::ostringstream log;
      runs.push_back(run(c, log));
    }
    int mismatches = 0;
    for (const auto& artifact : runs[0].artifacts)
      if (slurp(root / name / "a" / artifact) != slurp(root / name / "b" / artifact)) ++mismatches;
    o.require(runs[0].exit_code == 0 && runs[0].artifacts == runs[1].artifacts && mismatches == 0,
              fmt::format("{}: {} artifacts, {} differ", name, runs[0].artifacts.size(), mismatches));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "symplectic algebra suite", 1.0, symplectic_algebra},
      {2, "conjugate oracle equivalence", 10.0, conjugate_oracle},
      {3, "SBEN principle equivalence and minimality", 30.0, sben_equivalence},
      {4, "analytic ODE oracle", 5.0, analytic_ode},
      {5, "stochastic sampler statistics", 60.0, sampler_statistics},
      {6, "dissipation cost inequality, viscous oscillator", 300.0, theorem},
      {7, "work pump bound, ramp forcing", 300.0, work_pump},
      {8, "conservative limit", 60.0, conservative_limit},
      {9, "reproducibility", 10.0, reproducibility},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  double total = 0.0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    total += seconds;
    const bool in_time = seconds < c.limit_seconds;
    const bool passed = o.passed && in_time;
    failures += passed ? 0 : 1;
    std::printf("%s criterion %d: %s (%.2f s, limit %.0f s%s)\n    %s\n", passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                seconds, c.limit_seconds, in_time ? "" : ", OVER TIME", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s: %d failing criteria, total %.1f s\n", failures ? "FAILED" : "ALL PASSED", failures, total);
  return failures ? 1 : 0;
}
