#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "sben/symplectic.hpp"

namespace sben {

/// Potential energy V(q) with its gradient.
struct PotentialEnergy {
  std::string tag;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;

  static PotentialEnergy zero();
  /// V = (k/2)|q|².
  static PotentialEnergy harmonic(double stiffness);
  /// V = Σ (a/4) qᵢ⁴ − (b/2) qᵢ².
  static PotentialEnergy double_well(double a, double b);
  /// V = Σ g (1 − cos qᵢ).
  static PotentialEnergy pendulum(double g);
};

/// External force f(t) with its time derivative.
struct Forcing {
  std::string tag;
  std::function<Vector(double)> value;
  std::function<Vector(double)> rate;

  /// f(t) = t · a.
  static Forcing ramp(const Vector& a);
  /// f(t) = f₀.
  static Forcing constant(const Vector& f0);
  /// f(t) = A sin(ω t).
  static Forcing sinusoid(const Vector& amplitude, double frequency);
};

/// A smooth, possibly time-dependent Hamiltonian H(t, q, p).
class Hamiltonian {
 public:
  enum class Kind { SeparableKinetic, ForcedSeparable, Custom };

  using ValueFn = std::function<double(double, const PhasePoint&)>;
  using GradientFn = std::function<CotangentPoint(double, const PhasePoint&)>;
  using TimeDerivativeFn = std::function<double(double, const PhasePoint&)>;

  /// H = |p|²/(2m) + V(q).
  static Hamiltonian separable_kinetic(int n, double mass, PotentialEnergy potential);
  /// H = |p|²/(2m) + V(q) − ⟨f(t), q⟩.
  static Hamiltonian forced_separable(int n, double mass, PotentialEnergy potential, Forcing forcing);
  /// User-supplied oracles. Missing gradient or time derivative fall back to
  /// central differences with step 1e−5·(1 + |·|).
  static Hamiltonian custom(int n, ValueFn value, GradientFn gradient = {}, TimeDerivativeFn time_derivative = {},
                            std::string tag = "custom", bool time_dependent = true);

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  bool is_time_dependent() const { return time_dependent_; }
  /// m when H has the kinetic form |p|²/(2m) + (terms in t, q).
  std::optional<double> kinetic_mass() const;
  const std::optional<Forcing>& forcing() const { return forcing_; }
  const std::string& tag() const { return tag_; }
  std::string describe() const;

  double value(double t, const PhasePoint& z) const;
  /// DH ∈ N*: `p` slot holds D_qH, `q` slot holds D_pH.
  CotangentPoint gradient(double t, const PhasePoint& z) const;
  /// ∂H/∂t.
  double time_derivative(double t, const PhasePoint& z) const;
  /// −D_qH(t, q) for the separable kinds; throws for Custom.
  Vector position_force(double t, const Vector& q) const;

 private:
  Hamiltonian() = default;

  Kind kind_ = Kind::Custom;
  int dimension_ = 0;
  bool time_dependent_ = false;
  double mass_ = 1.0;
  PotentialEnergy potential_;
  std::optional<Forcing> forcing_;
  ValueFn value_fn_;
  GradientFn gradient_fn_;
  TimeDerivativeFn time_derivative_fn_;
  std::string tag_;
};

/// XH(t, z) = −J* DH(t, z).
PhasePoint symplectic_gradient(const Hamiltonian& h, double t, const PhasePoint& z);

/// Central-difference DH with step 1e−5·(1 + |z|).
CotangentPoint finite_difference_gradient(const Hamiltonian::ValueFn& value, double t, const PhasePoint& z);
/// Central-difference ∂H/∂t with step 1e−5·(1 + |t|).
double finite_difference_time_derivative(const Hamiltonian::ValueFn& value, double t, const PhasePoint& z);

struct GradientSelfTestReport {
  int trials = 0;
  double max_gradient_error = 0.0;
  double max_time_derivative_error = 0.0;
  bool passed = true;
};

/// Compares the analytic oracles of `h` with central differences of its
/// value at random (t, z) draws (t ∈ [0, 10], components in [−2, 2]). Errors
/// are relative with a unit floor; the test fails above `threshold`.
GradientSelfTestReport gradient_selftest(const Hamiltonian& h, int trials, std::uint64_t seed = 7,
                                         double threshold = 1e-4);

}  // namespace sben
