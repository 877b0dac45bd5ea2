#include "sben/hamiltonian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "sben/errors.hpp"

namespace sben {

PotentialEnergy PotentialEnergy::zero() {
  return {"zero", [](const Vector&) { return 0.0; }, [](const Vector& q) -> Vector { return Vector::Zero(q.size()); }};
}

PotentialEnergy PotentialEnergy::harmonic(double stiffness) {
  if (!(stiffness > 0.0)) throw std::invalid_argument("harmonic potential requires stiffness > 0");
  return {fmt::format("harmonic(k={})", stiffness),
          [stiffness](const Vector& q) { return 0.5 * stiffness * q.squaredNorm(); },
          [stiffness](const Vector& q) -> Vector { return stiffness * q; }};
}

PotentialEnergy PotentialEnergy::double_well(double a, double b) {
  if (!(a > 0.0)) throw std::invalid_argument("double-well potential requires a > 0");
  return {fmt::format("double_well(a={}, b={})", a, b),
          [a, b](const Vector& q) {
            double v = 0.0;
            for (Eigen::Index i = 0; i < q.size(); ++i) {
              const double x2 = q[i] * q[i];
              v += 0.25 * a * x2 * x2 - 0.5 * b * x2;
            }
            return v;
          },
          [a, b](const Vector& q) -> Vector {
            Vector g(q.size());
            for (Eigen::Index i = 0; i < q.size(); ++i) g[i] = a * q[i] * q[i] * q[i] - b * q[i];
            return g;
          }};
}

PotentialEnergy PotentialEnergy::pendulum(double g) {
  if (!(g > 0.0)) throw std::invalid_argument("pendulum potential requires g > 0");
  return {fmt::format("pendulum(g={})", g),
          [g](const Vector& q) { return g * (static_cast<double>(q.size()) - q.array().cos().sum()); },
          [g](const Vector& q) -> Vector { return g * q.array().sin().matrix(); }};
}

Forcing Forcing::ramp(const Vector& a) {
  return {"ramp", [a](double t) -> Vector { return t * a; }, [a](double) -> Vector { return a; }};
}

Forcing Forcing::constant(const Vector& f0) {
  return {"constant", [f0](double) -> Vector { return f0; },
          [f0](double) -> Vector { return Vector::Zero(f0.size()); }};
}

Forcing Forcing::sinusoid(const Vector& amplitude, double frequency) {
  return {"sinusoid", [amplitude, frequency](double t) -> Vector { return std::sin(frequency * t) * amplitude; },
          [amplitude, frequency](double t) -> Vector { return frequency * std::cos(frequency * t) * amplitude; }};
}

Hamiltonian Hamiltonian::separable_kinetic(int n, double mass, PotentialEnergy potential) {
  if (n < 1 || n > kMaxDimension) throw DimensionError("Hamiltonian: dimension out of range");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("Hamiltonian: mass must be positive");
  if (!potential.value || !potential.gradient) throw std::invalid_argument("Hamiltonian: potential oracles missing");
  Hamiltonian h;
  h.kind_ = Kind::SeparableKinetic;
  h.dimension_ = n;
  h.mass_ = mass;
  h.potential_ = std::move(potential);
  h.tag_ = "separable_kinetic";
  return h;
}

Hamiltonian Hamiltonian::forced_separable(int n, double mass, PotentialEnergy potential, Forcing forcing) {
  Hamiltonian h = separable_kinetic(n, mass, std::move(potential));
  if (!forcing.value || !forcing.rate) throw std::invalid_argument("Hamiltonian: forcing oracles missing");
  if (forcing.value(0.0).size() != n) throw DimensionError("Hamiltonian: forcing dimension mismatch");
  h.kind_ = Kind::ForcedSeparable;
  h.forcing_ = std::move(forcing);
  h.time_dependent_ = true;
  h.tag_ = "forced_separable";
  return h;
}

Hamiltonian Hamiltonian::custom(int n, ValueFn value, GradientFn gradient, TimeDerivativeFn time_derivative,
                                std::string tag, bool time_dependent) {
  if (n < 1 || n > kMaxDimension) throw DimensionError("Hamiltonian: dimension out of range");
  if (!value) throw std::invalid_argument("Hamiltonian: custom value oracle missing");
  Hamiltonian h;
  h.kind_ = Kind::Custom;
  h.dimension_ = n;
  h.value_fn_ = std::move(value);
  h.gradient_fn_ = std::move(gradient);
  h.time_derivative_fn_ = std::move(time_derivative);
  h.time_dependent_ = time_dependent;
  h.tag_ = std::move(tag);
  return h;
}

std::optional<double> Hamiltonian::kinetic_mass() const {
  if (kind_ == Kind::Custom) return std::nullopt;
  return mass_;
}

std::string Hamiltonian::describe() const {
  switch (kind_) {
    case Kind::SeparableKinetic:
      return fmt::format("separable_kinetic(n={}, m={}, V={})", dimension_, mass_, potential_.tag);
    case Kind::ForcedSeparable:
      return fmt::format("forced_separable(n={}, m={}, V={}, f={})", dimension_, mass_, potential_.tag,
                         forcing_->tag);
    case Kind::Custom:
      break;
  }
  return fmt::format("{}(n={})", tag_, dimension_);
}

double Hamiltonian::value(double t, const PhasePoint& z) const {
  if (kind_ == Kind::Custom) return value_fn_(t, z);
  double h = 0.5 * z.p.squaredNorm() / mass_ + potential_.value(z.q);
  if (forcing_) h -= forcing_->value(t).dot(z.q);
  return h;
}

CotangentPoint Hamiltonian::gradient(double t, const PhasePoint& z) const {
  if (kind_ == Kind::Custom) {
    if (gradient_fn_) return gradient_fn_(t, z);
    return finite_difference_gradient(value_fn_, t, z);
  }
  CotangentPoint dh{potential_.gradient(z.q), z.p / mass_};
  if (forcing_) dh.p -= forcing_->value(t);
  return dh;
}

double Hamiltonian::time_derivative(double t, const PhasePoint& z) const {
  if (kind_ == Kind::Custom) {
    if (!time_dependent_) return 0.0;
    if (time_derivative_fn_) return time_derivative_fn_(t, z);
    return finite_difference_time_derivative(value_fn_, t, z);
  }
  if (!forcing_) return 0.0;
  return -forcing_->rate(t).dot(z.q);
}

Vector Hamiltonian::position_force(double t, const Vector& q) const {
  if (kind_ == Kind::Custom) throw std::logic_error("position_force: Hamiltonian is not separable");
  Vector f = -potential_.gradient(q);
  if (forcing_) f += forcing_->value(t);
  return f;
}

PhasePoint symplectic_gradient(const Hamiltonian& h, double t, const PhasePoint& z) {
  return symplectic_gradient(h.gradient(t, z));
}

CotangentPoint finite_difference_gradient(const Hamiltonian::ValueFn& value, double t, const PhasePoint& z) {
  const int n = z.dimension();
  const double step = 1e-5 * (1.0 + norm(z));
  CotangentPoint dh = CotangentPoint::zero(n);
  PhasePoint probe = z;
  for (int i = 0; i < n; ++i) {
    probe.q[i] = z.q[i] + step;
    const double fq_plus = value(t, probe);
    probe.q[i] = z.q[i] - step;
    const double fq_minus = value(t, probe);
    probe.q[i] = z.q[i];
    dh.p[i] = (fq_plus - fq_minus) / (2.0 * step);

    probe.p[i] = z.p[i] + step;
    const double fp_plus = value(t, probe);
    probe.p[i] = z.p[i] - step;
    const double fp_minus = value(t, probe);
    probe.p[i] = z.p[i];
    dh.q[i] = (fp_plus - fp_minus) / (2.0 * step);
  }
  return dh;
}

double finite_difference_time_derivative(const Hamiltonian::ValueFn& value, double t, const PhasePoint& z) {
  const double step = 1e-5 * (1.0 + std::abs(t));
  return (value(t + step, z) - value(t - step, z)) / (2.0 * step);
}

GradientSelfTestReport gradient_selftest(const Hamiltonian& h, int trials, std::uint64_t seed, double threshold) {
  const int n = h.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0), time(0.0, 10.0);
  const Hamiltonian::ValueFn value = [&h](double t, const PhasePoint& z) { return h.value(t, z); };

  GradientSelfTestReport report;
  report.trials = trials;
  for (int k = 0; k < trials; ++k) {
    const double t = time(rng);
    PhasePoint z = PhasePoint::zero(n);
    for (int i = 0; i < n; ++i) {
      z.q[i] = coord(rng);
      z.p[i] = coord(rng);
    }
    const CotangentPoint analytic = h.gradient(t, z);
    const CotangentPoint numeric = finite_difference_gradient(value, t, z);
    for (int i = 0; i < n; ++i) {
      const double eq = std::abs(analytic.p[i] - numeric.p[i]) / std::max(1.0, std::abs(analytic.p[i]));
      const double ep = std::abs(analytic.q[i] - numeric.q[i]) / std::max(1.0, std::abs(analytic.q[i]));
      report.max_gradient_error = std::max({report.max_gradient_error, eq, ep});
    }
    const double dt = h.time_derivative(t, z);
    const double dt_numeric = finite_difference_time_derivative(value, t, z);
    report.max_time_derivative_error =
        std::max(report.max_time_derivative_error, std::abs(dt - dt_numeric) / std::max(1.0, std::abs(dt)));
  }
  report.passed = report.max_gradient_error <= threshold && report.max_time_derivative_error <= threshold;
  return report;
}

}  // namespace sben
