#pragma once

#include <functional>
#include <vector>

#include "sben/scenario.hpp"

namespace sben {

struct SolverOptions {
  /// A step is flagged when its residual gap exceeds this.
  double gap_tolerance = 1e-8;
  /// Projected-subgradient iterations of the generic minimiser.
  int generic_iterations = 500;
  /// Iterations allowed for the implicit evaluation point.
  int fixed_point_iterations = 100;
  double fixed_point_tolerance = 1e-14;
  /// Abort once more than this fraction of the steps is flagged.
  double flagged_fraction_limit = 0.01;
  /// Bypass the structured path (testing the generic minimiser).
  bool force_generic = false;
  /// Extra generalised force added to ṗ. It is not part of XH, so it shows up
  /// in the dissipative velocity and drives the flow off the SBEN solution.
  std::function<Vector(double)> extra_force;
};

/// Outcome of minimising the SBEN gap at a fixed conservative velocity.
struct InclusionSolution {
  PhasePoint velocity;
  double gap = 0.0;
};

/// Velocity minimising φ(v) + φ^{*ω}(v − xh) − ω(v − xh, v).
///
/// For velocity-only φ the minimiser has q̇ = xh_q and −η ∈ ∂Φ(q̇) with
/// η = ṗ − xh_p; where that leaves η undetermined (dry friction at rest) the
/// force balance picks η closest to −(xh_p + extra). Other potentials go
/// through the generic minimiser: projected subgradient with diminishing
/// steps from two starts, then per-coordinate bisection on the (separable)
/// subdifferential.
InclusionSolution solve_inclusion(const ConvexPotential& phi, const PhasePoint& xh, const Vector& extra_force,
                                  const SolverOptions& options = {});

/// Generic path only; exposed for testing.
InclusionSolution minimize_gap_generic(const ConvexPotential& phi, const PhasePoint& xh,
                                       const SolverOptions& options = {});

struct StepResult {
  /// ż on [t, t + h]; the next state is z + h ż.
  PhasePoint velocity;
  /// ż_D = ż − XH(t*, z*).
  PhasePoint dissipative_velocity;
  /// XH(t*, z*).
  PhasePoint conservative_velocity;
  /// Point at which the inclusion is imposed (scheme dependent).
  double eval_time = 0.0;
  PhasePoint eval_point;
  /// SBEN gap of the chosen velocity at the evaluation point (+inf allowed).
  double gap = 0.0;
  bool flagged = false;
  int iterations = 0;
};

/// One step of the discretised inclusion ż − XH(t, z) ∈ ∂^ω φ(ż).
///
/// Kinetic Hamiltonians with velocity-only φ use a prox formulation that
/// resolves stick-slip exactly: momentum-first symplectic Euler sets
/// q̇ = prox_{(h/m)Φ}((p + h F(t, q))/m), the midpoint scheme iterates
/// q̇ = prox_{(h/2m)Φ}((p + (h/2) F(t + h/2, q + (h/2) q̇))/m). Everything
/// else iterates the evaluation point around solve_inclusion.
StepResult solve_step(const Scenario& scenario, double t, const PhasePoint& z, double h,
                      const SolverOptions& options = {});

/// Discretised evolution curve with per-step diagnostics.
struct Trajectory {
  Scheme scheme = Scheme::Midpoint;
  double step = 0.0;
  double gap_tolerance = 0.0;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<PhasePoint> velocities;
  std::vector<PhasePoint> dissipative_velocities;
  std::vector<double> residual_gaps;
  std::vector<double> eval_times;
  std::vector<PhasePoint> eval_points;
  std::vector<unsigned char> flagged;
  int flagged_count = 0;

  int steps() const { return static_cast<int>(velocities.size()); }
};

/// Runs solve_step on the uniform grid of the scenario, calling
/// `on_step(k, t_k, z_k, result)` for every step. Throws NumericalError once
/// the flagged steps exceed the budget.
template <class OnStep>
PhasePoint integrate_each(const Scenario& scenario, const PhasePoint& z0, const SolverOptions& options,
                          OnStep&& on_step);

Trajectory integrate(const Scenario& scenario, const PhasePoint& z0, const SolverOptions& options = {});

/// Only the final state of the flow map z0 ↦ Ψ(T, z0).
PhasePoint flow_map(const Scenario& scenario, const PhasePoint& z0, const SolverOptions& options = {});

/// det DΨ(T, ·) at z0 from central differences with spacing `eps`.
double flow_map_jacobian_determinant(const Scenario& scenario, const PhasePoint& z0, double eps = 1e-5,
                                     const SolverOptions& options = {});

/// Rebuilds the per-step diagnostics of an arbitrary discrete curve on the
/// scenario's grid: ż_k = (z_{k+1} − z_k)/h, evaluation points per scheme.
Trajectory trajectory_from_states(const Scenario& scenario, const std::vector<PhasePoint>& states,
                                  const SolverOptions& options = {});

/// Phase path with q̇_D = 0 in the scheme's sense, from a configuration path
/// q_0..q_K and the initial momentum. Requires a kinetic Hamiltonian.
std::vector<PhasePoint> lift_configuration_path(const Scenario& scenario, const std::vector<Vector>& q_path,
                                                const Vector& p0);

/// Π(z') = Σ_k h [φ(ż'_k) + φ^{*ω}(ż'_{D,k}) − ∂H/∂t(t*_k, z*_k)] + H(T, z'_K),
/// +inf when some ż'_D leaves dom φ^{*ω}. Per-step integrands are evaluated
/// at the scheme's evaluation point, consistent with piecewise-constant ż'.
ExtendedReal action_functional(const Scenario& scenario, const Trajectory& trajectory);

/// H(t_k, z_k) along the trajectory.
std::vector<double> energy_series(const Scenario& scenario, const Trajectory& trajectory);

// ---------------------------------------------------------------------------

namespace detail {
[[noreturn]] void throw_flag_budget(int flagged, int steps, double t);
}

template <class OnStep>
PhasePoint integrate_each(const Scenario& scenario, const PhasePoint& z0, const SolverOptions& options,
                          OnStep&& on_step) {
  validate(z0);
  const int steps = scenario.steps();
  const double h = scenario.effective_step();
  const int budget = static_cast<int>(options.flagged_fraction_limit * steps);
  int flagged = 0;
  PhasePoint z = z0;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    StepResult r = solve_step(scenario, t, z, h, options);
    if (r.flagged && ++flagged > budget) detail::throw_flag_budget(flagged, steps, t);
    on_step(k, t, z, r);
    z.q += h * r.velocity.q;
    z.p += h * r.velocity.p;
  }
  return z;
}

}  // namespace sben
