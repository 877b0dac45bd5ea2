#include "sben/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "sben/errors.hpp"

namespace sben {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Shape>
bool all_q_parts_are(const ConvexPotential& phi) {
  if (!phi.is_velocity_only()) return false;
  return std::all_of(phi.q_parts().begin(), phi.q_parts().end(),
                     [](const ScalarConvex& f) { return std::holds_alternative<Shape>(f.shape()); });
}

// Free coordinates of a support box, q-slots first.
struct FreeCoordinates {
  std::vector<int> index;  // 0..n-1 q-slot, n..2n-1 p-slot
  std::vector<Interval> range;
};

FreeCoordinates free_coordinates(const CoordinateBox& box) {
  FreeCoordinates out;
  const int n = static_cast<int>(box.q.size());
  for (int i = 0; i < n; ++i)
    if (!box.q[static_cast<std::size_t>(i)].is_point()) {
      out.index.push_back(i);
      out.range.push_back(box.q[static_cast<std::size_t>(i)]);
    }
  for (int i = 0; i < n; ++i)
    if (!box.p[static_cast<std::size_t>(i)].is_point()) {
      out.index.push_back(n + i);
      out.range.push_back(box.p[static_cast<std::size_t>(i)]);
    }
  return out;
}

double& slot(PhasePoint& z, int index) {
  const int n = z.dimension();
  return index < n ? z.q[index] : z.p[index - n];
}

// Point of the support with free coordinates taken from `free` and fixed ones
// at their (single) admissible value.
PhasePoint support_point(const CoordinateBox& box, const FreeCoordinates& fc, const std::vector<double>& free) {
  const int n = static_cast<int>(box.q.size());
  PhasePoint z = PhasePoint::zero(n);
  for (int i = 0; i < n; ++i) {
    z.q[i] = box.q[static_cast<std::size_t>(i)].clamp(0.0);
    z.p[i] = box.p[static_cast<std::size_t>(i)].clamp(0.0);
  }
  for (std::size_t j = 0; j < fc.index.size(); ++j) slot(z, fc.index[j]) = free[j];
  return z;
}

double reflect(double x, const Interval& r) {
  if (r.contains(x)) return x;
  if (!r.is_bounded()) {
    if (x < r.lower) return std::isfinite(r.lower) ? 2.0 * r.lower - x : x;
    return std::isfinite(r.upper) ? 2.0 * r.upper - x : x;
  }
  const double width = r.upper - r.lower;
  double u = std::fmod(x - r.lower, 2.0 * width);
  if (u < 0.0) u += 2.0 * width;
  return u <= width ? r.lower + u : r.lower + 2.0 * width - u;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t x = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

DissipativeVelocityDensity::DissipativeVelocityDensity(const ConvexPotential& phi, double beta, double t,
                                                       const PhasePoint& z, const PhasePoint& xh)
    : phi_(&phi), beta_(beta), t_(t), z_(z), xh_(xh), support_(phi.symplectic_conjugate_domain()) {
  if (!(beta > 0.0)) throw std::invalid_argument("density: beta must be positive");
  if (xh.dimension() != phi.dimension()) throw DimensionError("density: dimension mismatch");
}

DissipativeVelocityDensity DissipativeVelocityDensity::at(const Scenario& scenario, double t, const PhasePoint& z) {
  return DissipativeVelocityDensity(scenario.dissipation, scenario.beta, t, z,
                                    symplectic_gradient(scenario.hamiltonian, t, z));
}

ExtendedReal DissipativeVelocityDensity::bracket(const PhasePoint& v_dissipative) const {
  return dissipation_bracket(*phi_, xh_, v_dissipative);
}

double DissipativeVelocityDensity::log_density(const PhasePoint& v_dissipative) const {
  const ExtendedReal b = bracket(v_dissipative);
  return b.is_finite() ? -beta_ * b.raw() : -kInf;
}

PhasePoint DissipativeVelocityDensity::mode() const {
  const PhasePoint v = solve_inclusion(*phi_, xh_, Vector::Zero(xh_.dimension())).velocity;
  PhasePoint d = v - xh_;
  for (std::size_t i = 0; i < support_.q.size(); ++i) {
    d.q[static_cast<Eigen::Index>(i)] = support_.q[i].clamp(d.q[static_cast<Eigen::Index>(i)]);
    d.p[static_cast<Eigen::Index>(i)] = support_.p[i].clamp(d.p[static_cast<Eigen::Index>(i)]);
  }
  return d;
}

std::string_view to_string(SamplerBackend b) {
  switch (b) {
    case SamplerBackend::Auto:
      return "auto";
    case SamplerBackend::ExactGaussian:
      return "exact_gaussian";
    case SamplerBackend::TruncatedExponential:
      return "truncated_exponential";
    case SamplerBackend::Metropolis:
      return "metropolis";
    case SamplerBackend::PointMass:
      return "point_mass";
  }
  return "auto";
}

SamplerBackend sampler_backend_from_string(std::string_view name) {
  for (auto b : {SamplerBackend::Auto, SamplerBackend::ExactGaussian, SamplerBackend::TruncatedExponential,
                 SamplerBackend::Metropolis, SamplerBackend::PointMass})
    if (to_string(b) == name) return b;
  throw std::invalid_argument(
      fmt::format("unknown sampler '{}' (auto | exact_gaussian | truncated_exponential | metropolis | point_mass)",
                  name));
}

SamplerBackend resolve_backend(const Scenario& scenario, SamplerBackend requested) {
  const ConvexPotential& phi = scenario.dissipation;
  const bool kinetic = scenario.hamiltonian.kinetic_mass().has_value();
  const bool degenerate = phi.symplectic_conjugate_domain().free_dimension() == 0;
  switch (requested) {
    case SamplerBackend::Auto:
      if (degenerate) return SamplerBackend::PointMass;
      if (kinetic && all_q_parts_are<QuadraticFunction>(phi)) return SamplerBackend::ExactGaussian;
      if (kinetic && all_q_parts_are<AbsoluteFunction>(phi)) return SamplerBackend::TruncatedExponential;
      return SamplerBackend::Metropolis;
    case SamplerBackend::ExactGaussian:
      if (!all_q_parts_are<QuadraticFunction>(phi))
        throw std::invalid_argument("exact_gaussian sampler needs quadratic velocity-only dissipation");
      return requested;
    case SamplerBackend::TruncatedExponential:
      if (!all_q_parts_are<AbsoluteFunction>(phi))
        throw std::invalid_argument("truncated_exponential sampler needs dry-friction dissipation");
      return requested;
    case SamplerBackend::PointMass:
      if (!degenerate) throw std::invalid_argument("point_mass sampler needs a degenerate support (zero dissipation)");
      return requested;
    case SamplerBackend::Metropolis:
      if (degenerate) throw std::invalid_argument("metropolis sampler needs a support with free coordinates");
      return requested;
  }
  return requested;
}

double sample_truncated_exponential(double k, double lambda, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  if (std::abs(lambda * k) < 1e-12) return -k + 2.0 * k * u;
  // Sample with a positive rate and mirror; keeps exp() from overflowing.
  const double rate = std::abs(lambda);
  const double eta = -k - std::log1p(u * std::expm1(-2.0 * rate * k)) / rate;
  return lambda > 0.0 ? std::clamp(eta, -k, k) : std::clamp(-eta, -k, k);
}

double truncated_exponential_mean(double k, double lambda) {
  const double x = lambda * k;
  if (std::abs(x) < 1e-6) return -lambda * k * k / 3.0;
  return 1.0 / lambda - k / std::tanh(x);
}

MetropolisChain::MetropolisChain(MetropolisSettings settings) : settings_(settings), scale_(settings.initial_scale) {}

MetropolisChain::Draw MetropolisChain::sample(const DissipativeVelocityDensity& density, Rng& rng) {
  const CoordinateBox& box = density.support();
  const FreeCoordinates fc = free_coordinates(box);
  if (fc.index.empty()) return {PhasePoint::zero(density.conservative_velocity().dimension()), 1.0, false};

  auto coordinates_of = [&](const PhasePoint& z) {
    PhasePoint tmp = z;
    std::vector<double> c(fc.index.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = fc.range[j].clamp(slot(tmp, fc.index[j]));
    return c;
  };
  std::vector<double> x = coordinates_of(state_ ? *state_ : density.mode());
  if (!std::isfinite(density.log_density(support_point(box, fc, x)))) x = coordinates_of(density.mode());
  double logp = density.log_density(support_point(box, fc, x));
  if (!std::isfinite(logp)) throw NumericalError("metropolis: starting point outside the support");

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> y(x.size());
  auto step = [&]() {
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = reflect(x[j] + scale_ * normal(rng), fc.range[j]);
    const double logq = density.log_density(support_point(box, fc, y));
    if (std::isfinite(logq) && std::log(unif(rng)) < logq - logp) {
      x.swap(y);
      logp = logq;
      return true;
    }
    return false;
  };

  int window_accepts = 0;
  for (int i = 1; i <= settings_.burn_in; ++i) {
    window_accepts += step() ? 1 : 0;
    if (i % settings_.adapt_interval == 0) {
      const double rate = static_cast<double>(window_accepts) / settings_.adapt_interval;
      if (rate < settings_.target_low) scale_ *= rate < 0.5 * settings_.target_low ? 0.5 : 0.8;
      if (rate > settings_.target_high) scale_ *= rate > 0.5 * (1.0 + settings_.target_high) ? 2.0 : 1.25;
      scale_ = std::clamp(scale_, 1e-12, 1e12);
      window_accepts = 0;
    }
  }
  int accepts = 0;
  for (int i = 0; i < settings_.thinning; ++i) accepts += step() ? 1 : 0;

  Draw d;
  d.v_dissipative = support_point(box, fc, x);
  d.acceptance_rate = settings_.thinning > 0 ? static_cast<double>(accepts) / settings_.thinning : 1.0;
  d.flagged = d.acceptance_rate < settings_.flag_acceptance;
  state_ = d.v_dissipative;
  return d;
}

SampledVelocity sample_dissipative_velocity(const DissipativeVelocityDensity& density, SamplerBackend backend,
                                            Rng& rng, MetropolisChain* chain) {
  const ConvexPotential& phi = density.potential();
  const PhasePoint& xh = density.conservative_velocity();
  const int n = xh.dimension();
  SampledVelocity out;
  out.v_dissipative = PhasePoint::zero(n);
  switch (backend) {
    case SamplerBackend::PointMass:
      if (density.support().free_dimension() != 0) throw std::invalid_argument("point_mass: support is not a point");
      out.v_dissipative = support_point(density.support(), {}, {});
      return out;
    case SamplerBackend::ExactGaussian: {
      const double beta = density.beta();
      for (int i = 0; i < n; ++i) {
        const ScalarConvex& f = phi.q_parts()[static_cast<std::size_t>(i)];
        const auto* quad = std::get_if<QuadraticFunction>(&f.shape());
        if (!quad) throw std::invalid_argument("exact_gaussian: dissipation is not quadratic");
        std::normal_distribution<double> normal(-quad->c * (xh.q[i] - f.center()), std::sqrt(quad->c / beta));
        out.v_dissipative.p[i] = normal(rng);
      }
      return out;
    }
    case SamplerBackend::TruncatedExponential: {
      const double beta = density.beta();
      for (int i = 0; i < n; ++i) {
        const ScalarConvex& f = phi.q_parts()[static_cast<std::size_t>(i)];
        const auto* abs = std::get_if<AbsoluteFunction>(&f.shape());
        if (!abs) throw std::invalid_argument("truncated_exponential: dissipation is not dry friction");
        out.v_dissipative.p[i] = sample_truncated_exponential(abs->k, beta * (xh.q[i] - f.center()), rng);
      }
      return out;
    }
    case SamplerBackend::Metropolis: {
      if (!chain) throw std::invalid_argument("metropolis: chain required");
      const MetropolisChain::Draw d = chain->sample(density, rng);
      out.v_dissipative = d.v_dissipative;
      out.acceptance_rate = d.acceptance_rate;
      out.flagged = d.flagged;
      return out;
    }
    case SamplerBackend::Auto:
      break;
  }
  throw std::invalid_argument("sample_dissipative_velocity: resolve the backend first");
}

ForceDensity::ForceDensity(const ConvexPotential& phi, double beta, const Vector& qdot)
    : phi_(&phi), beta_(beta), qdot_(qdot) {
  if (!phi.is_velocity_only()) throw std::invalid_argument("force density: dissipation must be velocity-only");
  if (qdot.size() != phi.dimension()) throw DimensionError("force density: dimension mismatch");
  offset_ = 0.0;
  for (int i = 0; i < phi.dimension(); ++i) offset_ += phi.q_parts()[static_cast<std::size_t>(i)].value(qdot[i]).value();
}

ExtendedReal ForceDensity::reduced_bracket(const Vector& eta) const {
  ExtendedReal total = 0.0;
  for (int i = 0; i < phi_->dimension(); ++i) {
    total += phi_->q_parts()[static_cast<std::size_t>(i)].conjugate(-eta[i]);
    if (!total.is_finite()) return total;
  }
  return total + eta.dot(qdot_);
}

double ForceDensity::log_density(const Vector& eta) const {
  const ExtendedReal b = reduced_bracket(eta);
  return b.is_finite() ? -beta_ * b.raw() : -kInf;
}

std::vector<Interval> ForceDensity::support() const {
  std::vector<Interval> out;
  for (const ScalarConvex& f : phi_->q_parts()) out.push_back(-f.conjugate_domain());
  return out;
}

ForceDensity reduce_to_force_density(const Scenario& scenario, double t, const PhasePoint& z) {
  const auto mass = scenario.hamiltonian.kinetic_mass();
  if (!mass || !scenario.dissipation.is_velocity_only())
    throw std::invalid_argument("reduce_to_force_density: needs a kinetic Hamiltonian and velocity-only dissipation");
  const PhasePoint xh = symplectic_gradient(scenario.hamiltonian, t, z);
  return ForceDensity(scenario.dissipation, scenario.beta, xh.q);
}

double force_density_consistency(const Scenario& scenario, double t, const PhasePoint& z,
                                 const std::vector<double>& eta_grid) {
  const ForceDensity reduced = reduce_to_force_density(scenario, t, z);
  const DissipativeVelocityDensity full = DissipativeVelocityDensity::at(scenario, t, z);
  const auto support = reduced.support();
  const int n = z.dimension();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (double e : eta_grid) {
      Vector eta = Vector::Zero(n);
      for (int j = 0; j < n; ++j) eta[j] = support[static_cast<std::size_t>(j)].clamp(0.0);
      if (!support[static_cast<std::size_t>(i)].contains(e)) continue;
      eta[i] = e;
      const ExtendedReal a = full.bracket(PhasePoint{Vector::Zero(n), eta});
      const ExtendedReal b = reduced.reduced_bracket(eta);
      if (a.is_finite() != b.is_finite()) return kInf;
      if (a.is_finite()) worst = std::max(worst, std::abs(a.raw() - b.raw() - reduced.offset()));
    }
  }
  return worst;
}

NormalizationEstimate estimate_normalization_1d(const DissipativeVelocityDensity& density, double max_window,
                                                double rel_tol) {
  const CoordinateBox& box = density.support();
  const FreeCoordinates fc = free_coordinates(box);
  NormalizationEstimate est;
  if (fc.index.empty()) {
    est.degenerate = true;
    est.value = 1.0;
    return est;
  }
  if (fc.index.size() != 1) throw std::invalid_argument("estimate_normalization_1d: support must be one-dimensional");
  const Interval range = fc.range.front();
  PhasePoint mode = density.mode();
  const double centre = range.clamp(slot(mode, fc.index.front()));

  auto integrate = [&](double lo, double hi) {
    // Composite Simpson with enough panels for smooth and kinked integrands.
    const int panels = 20000;
    const double step = (hi - lo) / panels;
    auto f = [&](double x) { return std::exp(density.log_density(support_point(box, fc, {x}))); };
    double s = f(lo) + f(hi);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * step);
    return s * step / 3.0;
  };

  double window = 1.0;
  double previous = -1.0;
  while (window <= max_window) {
    const double lo = std::max(range.lower, centre - window);
    const double hi = std::min(range.upper, centre + window);
    const double value = integrate(lo, hi);
    const bool covers = lo == range.lower && hi == range.upper;
    if (covers || (previous >= 0.0 && std::abs(value - previous) <= rel_tol * std::max(value, 1e-300))) {
      est.value = value;
      est.window = window;
      return est;
    }
    previous = value;
    window *= 2.0;
  }
  est.value = previous;
  est.window = max_window;
  est.diverged = true;
  return est;
}

StochasticTrajectory integrate_stochastic(const Scenario& scenario, const PhasePoint& z0, Rng& rng,
                                          const StochasticOptions& options) {
  validate(z0);
  const int n = scenario.dimension();
  const int steps = scenario.steps();
  const double h = scenario.effective_step();

  StochasticTrajectory out;
  out.backend = resolve_backend(scenario, options.backend);
  Trajectory& tr = out.trajectory;
  tr.scheme = scenario.scheme;
  tr.step = h;
  tr.gap_tolerance = options.solver.gap_tolerance;
  MetropolisChain chain(options.metropolis);

  // With the draw fixed, the remaining step is conservative motion plus a
  // prescribed dissipative velocity; kinetic Hamiltonians with velocity-only
  // φ reuse the deterministic step with the draw as an extra force.
  const bool kinetic_path = scenario.hamiltonian.kinetic_mass() && scenario.dissipation.is_velocity_only();
  Scenario conservative = scenario;
  conservative.dissipation = ConvexPotential::zero(n);

  PhasePoint z = z0;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const DissipativeVelocityDensity density = DissipativeVelocityDensity::at(scenario, t, z);
    const SampledVelocity draw = sample_dissipative_velocity(density, out.backend, rng, &chain);
    if (draw.flagged) ++out.sampler_flags;

    StepResult r;
    if (kinetic_path) {
      SolverOptions so = options.solver;
      const Vector eta = draw.v_dissipative.p;
      so.extra_force = [eta](double) { return eta; };
      r = solve_step(conservative, t, z, h, so);
    } else {
      const double ts = scenario.scheme == Scheme::SymplecticEuler ? t : t + 0.5 * h;
      PhasePoint v = density.conservative_velocity() + draw.v_dissipative;
      PhasePoint z_star = z;
      for (int it = 0; it < options.solver.fixed_point_iterations; ++it) {
        z_star = scenario.scheme == Scheme::SymplecticEuler ? PhasePoint{z.q, z.p + h * v.p} : z + (0.5 * h) * v;
        const PhasePoint next = symplectic_gradient(scenario.hamiltonian, ts, z_star) + draw.v_dissipative;
        const double diff = max_abs(next - v);
        v = next;
        if (diff <= options.solver.fixed_point_tolerance * (1.0 + max_abs(v))) break;
      }
      z_star = scenario.scheme == Scheme::SymplecticEuler ? PhasePoint{z.q, z.p + h * v.p} : z + (0.5 * h) * v;
      r.velocity = v;
      r.conservative_velocity = symplectic_gradient(scenario.hamiltonian, ts, z_star);
      r.dissipative_velocity = v - r.conservative_velocity;
      r.eval_time = ts;
      r.eval_point = z_star;
    }
    const ExtendedReal gap = sben_gap(scenario.dissipation, r.conservative_velocity, r.velocity);

    tr.times.push_back(t);
    tr.states.push_back(z);
    tr.velocities.push_back(r.velocity);
    tr.dissipative_velocities.push_back(r.dissipative_velocity);
    tr.residual_gaps.push_back(gap.raw());
    tr.eval_times.push_back(r.eval_time);
    tr.eval_points.push_back(r.eval_point);
    tr.flagged.push_back(draw.flagged ? 1 : 0);
    tr.flagged_count += draw.flagged ? 1 : 0;
    out.eta.push_back(draw.v_dissipative.p);
    out.acceptance_rates.push_back(draw.acceptance_rate);

    z.q += h * r.velocity.q;
    z.p += h * r.velocity.p;
  }
  tr.times.push_back(scenario.horizon);
  tr.states.push_back(z);
  return out;
}

}  // namespace sben
