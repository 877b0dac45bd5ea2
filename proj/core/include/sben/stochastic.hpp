#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "sben/solver.hpp"

namespace sben {

using Rng = std::mt19937_64;

/// Counter-based stream derivation: splitmix64 of master + index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Density of the dissipative velocity at a state (t, z):
///
///   π(v_D) ∝ exp(−β [φ(v_D + XH) + φ^{*ω}(v_D) + ω(XH, v_D)]).
///
/// The bracket is the SBEN gap of v = v_D + XH, so log π ≤ 0 with the
/// supremum attained at SBEN velocities.
class DissipativeVelocityDensity {
 public:
  DissipativeVelocityDensity(const ConvexPotential& phi, double beta, double t, const PhasePoint& z,
                             const PhasePoint& xh);
  static DissipativeVelocityDensity at(const Scenario& scenario, double t, const PhasePoint& z);

  const ConvexPotential& potential() const { return *phi_; }
  double beta() const { return beta_; }
  double time() const { return t_; }
  const PhasePoint& state() const { return z_; }
  const PhasePoint& conservative_velocity() const { return xh_; }

  /// The bracket; +inf outside dom φ^{*ω}.
  ExtendedReal bracket(const PhasePoint& v_dissipative) const;
  /// −β·bracket, −inf outside the support.
  double log_density(const PhasePoint& v_dissipative) const;
  /// dom φ^{*ω}: sampling runs in this box, never by rejection.
  const CoordinateBox& support() const { return support_; }
  /// Deterministic SBEN dissipative velocity (a mode of π).
  PhasePoint mode() const;

 private:
  const ConvexPotential* phi_;
  double beta_;
  double t_;
  PhasePoint z_;
  PhasePoint xh_;
  CoordinateBox support_;
};

enum class SamplerBackend {
  /// Picks the exact backend when one applies, Metropolis otherwise.
  Auto,
  /// Quadratic Φ: η ~ N(−c (q̇ − s), c/β) per coordinate.
  ExactGaussian,
  /// Dry friction: per-coordinate truncated exponential on [−k, k].
  TruncatedExponential,
  /// Random-walk Metropolis on the free coordinates of the support.
  Metropolis,
  /// Degenerate support (φ ≡ 0): v_D = 0.
  PointMass,
};

std::string_view to_string(SamplerBackend b);
SamplerBackend sampler_backend_from_string(std::string_view name);

/// The backend Auto resolves to for this scenario.
SamplerBackend resolve_backend(const Scenario& scenario, SamplerBackend requested);

struct MetropolisSettings {
  int burn_in = 1000;
  int thinning = 50;
  int adapt_interval = 50;
  double target_low = 0.3;
  double target_high = 0.5;
  double initial_scale = 0.5;
  /// Below this acceptance (after adaptation) the draw is flagged.
  double flag_acceptance = 0.01;
};

/// Random-walk Metropolis chain on the free coordinates of the support,
/// reflected into bounded intervals. The chain state and proposal scale
/// persist across calls (warm start along a trajectory).
class MetropolisChain {
 public:
  explicit MetropolisChain(MetropolisSettings settings = {});

  struct Draw {
    PhasePoint v_dissipative;
    double acceptance_rate = 0.0;
    bool flagged = false;
  };

  /// Adaptive burn-in, then `thinning` steps; returns the final state.
  Draw sample(const DissipativeVelocityDensity& density, Rng& rng);

  double scale() const { return scale_; }

 private:
  MetropolisSettings settings_;
  std::optional<PhasePoint> state_;
  double scale_;
};

struct SampledVelocity {
  PhasePoint v_dissipative;
  double acceptance_rate = 1.0;
  bool flagged = false;
};

/// One draw of v_D from π with the chosen backend. `chain` is used (and
/// advanced) by the Metropolis backend only.
SampledVelocity sample_dissipative_velocity(const DissipativeVelocityDensity& density, SamplerBackend backend,
                                            Rng& rng, MetropolisChain* chain = nullptr);

/// Draw of η ∈ [−k, k] with density ∝ exp(−λ η).
double sample_truncated_exponential(double k, double lambda, Rng& rng);
/// Closed-form mean of that law: 1/λ − k coth(λk) (0 at λ = 0).
double truncated_exponential_mean(double k, double lambda);

/// η-density of a kinetic Hamiltonian with velocity-only φ:
/// log π(η) = −β [Φ*(−η) + ⟨η, q̇⟩] + const, q̇ = p/m. The full bracket at
/// v_D = (0, η) differs from the reduced one by Φ(q̇).
class ForceDensity {
 public:
  ForceDensity(const ConvexPotential& phi, double beta, const Vector& qdot);

  const Vector& velocity() const { return qdot_; }
  double beta() const { return beta_; }
  /// Φ*(−η) + ⟨η, q̇⟩; +inf outside dom Φ*(−·).
  ExtendedReal reduced_bracket(const Vector& eta) const;
  double log_density(const Vector& eta) const;
  /// Φ(q̇), the ż_D-independent offset.
  double offset() const { return offset_; }
  /// dom of η per coordinate.
  std::vector<Interval> support() const;

 private:
  const ConvexPotential* phi_;
  double beta_;
  Vector qdot_;
  double offset_;
};

/// Requires a kinetic Hamiltonian with velocity-only dissipation.
ForceDensity reduce_to_force_density(const Scenario& scenario, double t, const PhasePoint& z);

/// max over the η-grid (per coordinate, other coordinates at the centre) of
/// |bracket(0, η) − reduced(η) − Φ(q̇)|, over points in the support.
double force_density_consistency(const Scenario& scenario, double t, const PhasePoint& z,
                                 const std::vector<double>& eta_grid);

struct NormalizationEstimate {
  double value = 0.0;
  /// Half-width of the integration window that met the tolerance.
  double window = 0.0;
  bool diverged = false;
  bool degenerate = false;
};

/// Z = ∫ exp(log π) over a one-dimensional support by trapezoid quadrature
/// on a growing window; reports divergence when the window reaches
/// `max_window` without settling. Cross-validation only; samplers never
/// need Z.
NormalizationEstimate estimate_normalization_1d(const DissipativeVelocityDensity& density,
                                                double max_window = 1e4, double rel_tol = 1e-9);

struct StochasticOptions {
  SamplerBackend backend = SamplerBackend::Auto;
  MetropolisSettings metropolis;
  SolverOptions solver;
};

struct StochasticTrajectory {
  Trajectory trajectory;
  SamplerBackend backend = SamplerBackend::Auto;
  /// η per step (p-part of the sampled v_D).
  std::vector<Vector> eta;
  std::vector<double> acceptance_rates;
  int sampler_flags = 0;
};

/// Per step: π at (t_k, z_k), one independent draw v_D, then
/// ż = XH(t*, z*) + v_D advanced with the deterministic scheme.
/// `residual_gaps` holds the bracket of the drawn velocity.
StochasticTrajectory integrate_stochastic(const Scenario& scenario, const PhasePoint& z0, Rng& rng,
                                          const StochasticOptions& options = {});

}  // namespace sben
