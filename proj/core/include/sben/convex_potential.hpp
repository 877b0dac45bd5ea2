#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sben/extended_real.hpp"
#include "sben/scalar_convex.hpp"
#include "sben/symplectic.hpp"

namespace sben {

/// Axis-aligned box in phase space, lower ≤ upper componentwise.
struct PhaseBox {
  PhasePoint lower;
  PhasePoint upper;

  int dimension() const { return lower.dimension(); }
  /// Throws unless dimensions agree and every side has positive length.
  void validate() const;
  double volume() const;
  bool contains(const PhasePoint& z) const;
};

/// Per-coordinate description of a set of the form {z : z_i ∈ I_i} in
/// phase-space coordinates. Degenerate intervals are affine constraints.
struct CoordinateBox {
  std::vector<Interval> q;
  std::vector<Interval> p;

  bool contains(const PhasePoint& z, double tol = 0.0) const;
  /// Number of coordinates whose interval is not a single point.
  int free_dimension() const;
};

/// A convex lower-semicontinuous potential on N of the separable form
///
///   φ(q, p) = Σᵢ fᵢ(qᵢ) + Σᵢ gᵢ(pᵢ).
///
/// Dissipation potentials of the velocity-only kind φ(ż) = Φ(q̇) have every
/// gᵢ ≡ 0. All oracles are pure; instances are immutable after construction.
class ConvexPotential {
 public:
  ConvexPotential(std::vector<ScalarConvex> q_parts, std::vector<ScalarConvex> p_parts, std::string tag);

  /// φ ≡ 0.
  static ConvexPotential zero(int n);
  /// Φ(q̇) = (c/2)|q̇|².
  static ConvexPotential quadratic_velocity(int n, double c);
  /// Φ(q̇) = k |q̇|₁.
  static ConvexPotential dry_friction(int n, double k);
  /// Φ(q̇) = Σᵢ gridᵢ(q̇ᵢ); one grid shared by every axis.
  static ConvexPotential grid_velocity(int n, const PiecewiseLinearFunction& grid);
  /// φ(q̇, ṗ) = Σ (c/2) q̇ᵢ² + (b/2) ṗᵢ², a full-phase potential.
  static ConvexPotential phase_quadratic(int n, double c, double b);

  /// φ(· − shift) applied to the velocity arguments.
  ConvexPotential translated(const PhasePoint& shift) const;

  int dimension() const { return static_cast<int>(q_parts_.size()); }
  const std::string& tag() const { return tag_; }
  const std::vector<ScalarConvex>& q_parts() const { return q_parts_; }
  const std::vector<ScalarConvex>& p_parts() const { return p_parts_; }

  /// True when φ depends on q̇ only.
  bool is_velocity_only() const;

  ExtendedReal evaluate(const PhasePoint& z) const;
  /// Fenchel conjugate φ*(a) = sup_z ⟨⟨a, z⟩⟩ − φ(z) for a ∈ N*.
  ExtendedReal conjugate(const CotangentPoint& a) const;
  /// argmin_y λ φ(y) + ½|y − z|².
  PhasePoint prox(const PhasePoint& z, double lambda) const;
  /// ∂φ(z) ⊂ N* as a box: `p` holds intervals for the q-derivatives, `q` for
  /// the p-derivatives.
  CoordinateBox subdifferential(const PhasePoint& z) const;
  /// dom φ (all of N for every shape in the catalogue).
  CoordinateBox domain() const;
  /// dom φ^{*ω} in phase coordinates: z' with q'ᵢ ∈ dom gᵢ*, −p'ᵢ ∈ dom fᵢ*.
  CoordinateBox symplectic_conjugate_domain() const;

  std::string describe() const;

 private:
  std::vector<ScalarConvex> q_parts_;
  std::vector<ScalarConvex> p_parts_;
  std::string tag_;
};

/// φ^{*ω}(z') = sup_z {ω(z', z) − φ(z)}, evaluated as φ*(J z').
ExtendedReal symplectic_conjugate(const ConvexPotential& phi, const PhasePoint& z_prime);

/// Fenchel-equality test for z' ∈ ∂^ω φ(z):
/// φ(z) + φ^{*ω}(z') − ω(z', z) ≤ tol. Requires φ(z) < +∞.
bool symplectic_subdifferential_check(const ConvexPotential& phi, const PhasePoint& z, const PhasePoint& z_prime,
                                      double tol);

/// SBEN gap for a candidate velocity v given the conservative velocity xh:
/// φ(v) + φ^{*ω}(v − xh) − ω(v − xh, v). Nonnegative; zero exactly on SBEN
/// velocities.
ExtendedReal sben_gap(const ConvexPotential& phi, const PhasePoint& xh, const PhasePoint& v);

/// The exponent bracket of the dissipative-velocity density,
/// φ(v_D + xh) + φ^{*ω}(v_D) + ω(xh, v_D). Equal to sben_gap at v = v_D + xh.
ExtendedReal dissipation_bracket(const ConvexPotential& phi, const PhasePoint& xh, const PhasePoint& v_dissipative);

struct HypothesisDReport {
  int samples = 0;
  int finite_pairs = 0;
  /// min of φ(z) + φ^{*ω}(z') over sampled pairs with both terms finite.
  double min_value = 0.0;
  PhasePoint argmin_z;
  PhasePoint argmin_z_prime;
  /// The sign condition holds iff 0 minimises φ, i.e. 0 ∈ ∂φ(0).
  bool zero_is_minimizer = true;
  bool violated = false;
};

/// Samples (z, z') pairs in `box` (z' restricted to dom φ^{*ω}) and reports
/// the smallest observed φ(z) + φ^{*ω}(z'). Flags a violation when it drops
/// below −tol or when 0 does not minimise φ.
HypothesisDReport hypothesis_d_check(const ConvexPotential& phi, int samples, const PhaseBox& box,
                                     std::uint64_t seed = 0x5eed, double tol = 1e-10);

}  // namespace sben
