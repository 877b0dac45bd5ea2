#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sben/solver.hpp"

namespace sben {

/// Gibbs weight exp[−(α + β H(t, Ψ(t, z)))] integrated over a box by the
/// tensor midpoint rule at `resolution` cells per axis.
struct GibbsSpec {
  double alpha = 0.0;
  double beta = 1.0;
  PhaseBox box;
  int resolution = 64;

  /// Throws ConfigError unless β > 0, the box is nondegenerate and
  /// resolution ≥ 8.
  void validate() const;
  /// Same box, `2^level` times the resolution.
  GibbsSpec refined(int level) const;
};

/// How the flow Ψ is generated from the scenario.
struct FlowRecipe {
  std::string tag = "sben";
  SolverOptions solver;

  static FlowRecipe sben();
  /// SBEN dynamics plus the drift amplitude·sin(t) on ṗ₁.
  static FlowRecipe perturbed(double amplitude = 0.1);
};

/// A flow on the quadrature nodes of a box, integrated once and reduced on
/// the fly. Per node it keeps the Gibbs weights at t = 0 and T (with α = 0)
/// and the time integrals of the cost and work densities; states are kept on
/// a subsampled time grid for gibbs_measure.
struct FlowField {
  std::string tag;
  GibbsSpec spec;
  double step = 0.0;
  int steps = 0;
  double horizon = 0.0;
  double cell_volume = 0.0;
  std::vector<PhasePoint> nodes;

  /// Step indices with stored states, ascending, including 0 and K.
  std::vector<int> stored_steps;
  /// stored_states[i][node] = Ψ(t_{stored_steps[i]}, node).
  std::vector<std::vector<PhasePoint>> stored_states;

  std::vector<double> weight_initial;
  std::vector<double> weight_final;
  /// Σ_k h I_k (w_k + w_{k+1})/2 with I = φ(Ψ̇) + φ^{*ω}(Ψ̇_D) − ∂H/∂t.
  std::vector<double> cost;
  /// Σ_k h ⟨ḟ, q*⟩ (w_k + w_{k+1})/2; equals the −∂H/∂t part of the cost.
  std::vector<double> work;
  /// max over steps of the SBEN gap of Ψ̇.
  std::vector<double> max_gap;
  /// max over steps of |⟨⟨DH, Ψ̇⟩⟩ + ω(Ψ̇_D, Ψ̇)|.
  double max_energy_identity_residual = 0.0;
  /// max over steps of |I − (ω(Ψ̇_D, Ψ̇) − ∂H/∂t)|; the SBEN gap of Ψ̇.
  double max_integrand_identity_residual = 0.0;
  /// First node with an infinite cost integrand, if any.
  std::optional<int> infinite_node;

  double time_of_step(int k) const { return k == steps ? horizon : k * step; }
  /// Stored times t_i.
  std::vector<double> stored_times() const;
};

/// Integrates the flow from every midpoint node of spec.box. The scenario's
/// horizon, step and scheme are used; `stored_times` bounds the number of
/// retained time slices.
FlowField compute_flow(const Scenario& scenario, const GibbsSpec& spec, const FlowRecipe& recipe,
                       int stored_times = 101);

/// μ_t(B) = ∫_B exp[−(α + β H(t, Ψ(t, z)))] dz. Throws std::out_of_range
/// unless t is one of the stored times (within 1e−9 T).
double gibbs_measure(const GibbsSpec& spec, const Hamiltonian& h, const FlowField& flow, double t);

/// C(Ψ)(B); +inf when some node leaves dom φ^{*ω}.
ExtendedReal dissipation_cost(const GibbsSpec& spec, const FlowField& flow);

/// β ∫₀ᵀ ⟨ḟ, ∫_B q dμ_t⟩ dt.
double external_work(const GibbsSpec& spec, const FlowField& flow);

/// Estimates at one refinement level (level 0 is the reported one).
struct LevelEstimate {
  int level = 0;
  int resolution = 0;
  double step = 0.0;
  double mu0 = 0.0;
  double muT = 0.0;
  double cost = 0.0;
  double work = 0.0;
};

enum class Verdict { Pass, Fail, Informative };
std::string_view to_string(Verdict v);

struct CostReport {
  std::string flow_tag;
  double alpha = 0.0;
  double beta = 1.0;
  double mu0 = 0.0;
  double muT = 0.0;
  double cost = 0.0;
  /// μ_T − μ₀.
  double lhs = 0.0;
  /// β C.
  double rhs = 0.0;
  /// β C − (μ_T − μ₀).
  double slack = 0.0;
  double err_mu0 = 0.0;
  double err_muT = 0.0;
  double err_cost = 0.0;
  /// |Δμ₀| + |Δμ_T| + β|ΔC| + 1e−8 between level 0 and level 1.
  double tol_total = 0.0;
  bool inequality_holds = false;
  bool equality_tight = false;
  /// Theorem hypotheses not met (nonsmooth flows): verdicts are advisory.
  bool informative = false;
  double max_gap = 0.0;
  double max_energy_identity_residual = 0.0;
  double max_integrand_identity_residual = 0.0;
  std::optional<int> infinite_node;
  std::vector<LevelEstimate> levels;

  /// Pass when the inequality holds, Informative when advisory.
  Verdict verdict() const;
};

/// Both sides of μ_T − μ₀ ≤ β C on the scenario's flow, at level 0 and
/// `refine` further levels (each doubling the resolution and halving h).
/// tol_total compares levels 0 and 1; with refine = 0 it is the 1e−8 floor.
CostReport theorem_check(const Scenario& scenario, const GibbsSpec& spec, const FlowRecipe& recipe, int refine = 1);

struct WorkPumpReport {
  double mu0 = 0.0;
  double muT = 0.0;
  /// μ_T − μ₀.
  double lhs = 0.0;
  /// β ∫ ⟨ḟ, ∫_B q dμ_t⟩ dt.
  double rhs = 0.0;
  double tol_total = 0.0;
  bool corollary_holds = false;
  bool rhs_positive = false;
  /// μ_T ≥ μ₀ − tol, meaningful when rhs_positive.
  bool measure_increases = false;
  HypothesisDReport hypothesis_d;
  std::vector<LevelEstimate> levels;

  Verdict verdict() const;
};

/// Work-pump bound μ_T − μ₀ ≥ β ∫ ⟨ḟ, ∫_B q dμ_t⟩ dt for SBEN flows of a
/// forced separable Hamiltonian. Throws PreconditionError when the
/// dissipation fails the sign condition or H is not forced separable.
WorkPumpReport work_pump_check(const Scenario& scenario, const GibbsSpec& spec, int refine = 1,
                               int d_samples = 20000);

/// μ_t(B) against the pushforward μ₀(Ψ_t⁻¹(B)), the latter from flowing the
/// nodes of a box enlarged by `enlarge` about its centre and summing the
/// initial weights of nodes that land in B.
struct PushforwardWitness {
  double time = 0.0;
  double mu_t = 0.0;
  double pushforward = 0.0;
  double difference = 0.0;
};

PushforwardWitness pushforward_witness(const Scenario& scenario, const GibbsSpec& spec, const FlowRecipe& recipe,
                                       double enlarge = 2.0);

}  // namespace sben
