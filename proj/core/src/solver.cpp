#include "sben/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "sben/errors.hpp"

namespace sben {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector extra_at(const SolverOptions& options, double t, int n) {
  if (!options.extra_force) return Vector::Zero(n);
  Vector f = options.extra_force(t);
  if (f.size() != n) throw DimensionError("extra force dimension mismatch");
  return f;
}

// One coordinate of the separable gap. For a q-coordinate
//   h(u) = fᵢ(u) + gᵢ*(u − X_q) − u X_p,
// for a p-coordinate
//   h(u) = gᵢ(u) + fᵢ*(X_p − u) + u X_q.
struct GapCoordinate {
  const ScalarConvex* own;    // φ-part acting on u
  const ScalarConvex* other;  // part whose conjugate enters
  bool is_q;
  double xq;
  double xp;

  Interval feasible() const {
    const Interval dom = other->conjugate_domain();
    if (is_q) return dom + xq;
    return Interval{xp - dom.upper, xp - dom.lower};
  }

  double value(double u) const {
    const ExtendedReal a = own->value(u);
    const ExtendedReal b = is_q ? other->conjugate(u - xq) : other->conjugate(xp - u);
    if (!a.is_finite() || !b.is_finite()) return kInf;
    return a.raw() + b.raw() + (is_q ? -u * xp : u * xq);
  }

  Interval subgradient(double u) const {
    const Interval a = own->subdifferential(u);
    if (is_q) return a + other->conjugate_subdifferential(u - xq) + (-xp);
    return a + (-other->conjugate_subdifferential(xp - u)) + xq;
  }
};

std::vector<GapCoordinate> gap_coordinates(const ConvexPotential& phi, const PhasePoint& xh) {
  const int n = phi.dimension();
  std::vector<GapCoordinate> out;
  out.reserve(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back({&phi.q_parts()[i], &phi.p_parts()[i], true, xh.q[i], xh.p[i]});
  for (int i = 0; i < n; ++i)
    out.push_back({&phi.p_parts()[i], &phi.q_parts()[i], false, xh.q[i], xh.p[i]});
  return out;
}

// Bisection on the monotone subdifferential of a 1-D convex function.
double polish_coordinate(const GapCoordinate& c, double u0) {
  const Interval dom = c.feasible();
  double u = dom.clamp(u0);
  const Interval g0 = c.subgradient(u);
  if (g0.contains(0.0)) return u;
  const bool left = g0.lower > 0.0;
  double inner = u;
  double outer = u;
  double d = 1e-3 * std::max(1.0, std::abs(u));
  bool bracketed = false;
  for (int j = 0; j < 200; ++j) {
    const double cand = left ? std::max(dom.lower, u - d) : std::min(dom.upper, u + d);
    const Interval g = c.subgradient(cand);
    if (g.contains(0.0)) return cand;
    if (left ? g.upper < 0.0 : g.lower > 0.0) {
      outer = cand;
      bracketed = true;
      break;
    }
    inner = cand;
    if (cand == (left ? dom.lower : dom.upper)) return cand;
    d *= 2.0;
  }
  if (!bracketed) return inner;
  // Invariant: the minimiser lies between inner and outer.
  for (int j = 0; j < 200; ++j) {
    const double m = 0.5 * (inner + outer);
    if (m == inner || m == outer) break;
    const Interval g = c.subgradient(m);
    if (g.contains(0.0)) return m;
    const bool beyond = left ? g.upper < 0.0 : g.lower > 0.0;
    (beyond ? outer : inner) = m;
  }
  const double a = c.value(inner), b = c.value(outer);
  return a <= b ? inner : outer;
}

double total_value(const std::vector<GapCoordinate>& cs, const Eigen::VectorXd& v) {
  double s = 0.0;
  for (std::size_t j = 0; j < cs.size(); ++j) s += cs[j].value(v[static_cast<Eigen::Index>(j)]);
  return s;
}

PhasePoint to_phase_point(const Eigen::VectorXd& v, int n) {
  PhasePoint z = PhasePoint::zero(n);
  z.q = v.head(n);
  z.p = v.tail(n);
  return z;
}

double gap_value(const ConvexPotential& phi, const PhasePoint& xh, const PhasePoint& v) {
  return sben_gap(phi, xh, v).raw();
}

PhasePoint with_extra(PhasePoint xh, const Vector& extra) {
  xh.p += extra;
  return xh;
}

PhasePoint eval_point(Scheme scheme, const PhasePoint& z, const PhasePoint& v, double h) {
  if (scheme == Scheme::SymplecticEuler) return PhasePoint{z.q, z.p + h * v.p};
  return z + (0.5 * h) * v;
}

double eval_time(Scheme scheme, double t, double h) { return scheme == Scheme::SymplecticEuler ? t : t + 0.5 * h; }

StepResult finish_step(const Scenario& s, double t_star, const PhasePoint& z_star, const PhasePoint& v,
                       const PhasePoint& xh, const Vector& extra, const SolverOptions& options, int iterations) {
  StepResult r;
  r.velocity = v;
  r.conservative_velocity = xh;
  r.dissipative_velocity = v - xh;
  r.eval_time = t_star;
  r.eval_point = z_star;
  r.gap = gap_value(s.dissipation, with_extra(xh, extra), v);
  r.flagged = !(r.gap <= options.gap_tolerance);
  r.iterations = iterations;
  return r;
}

// Kinetic H with velocity-only φ: the step reduces to a prox on q̇.
StepResult prox_step(const Scenario& s, double t, const PhasePoint& z, double h, double m,
                     const SolverOptions& options) {
  const ConvexPotential& phi = s.dissipation;
  const int n = z.dimension();
  const Hamiltonian& H = s.hamiltonian;
  // ṗ = applied force + η with η projected onto −∂Φ(q̇); the raw momentum
  // difference carries roundoff that would leave indicator domains.
  auto balanced_force = [&](const Vector& applied, const Vector& pdot_raw, const Vector& qdot) {
    Vector out(n);
    for (int i = 0; i < n; ++i) {
      const Interval eta_set = -phi.q_parts()[static_cast<std::size_t>(i)].subdifferential(qdot[i]);
      out[i] = applied[i] + eta_set.clamp(pdot_raw[i] - applied[i]);
    }
    return out;
  };
  auto prox_velocity = [&](const Vector& x, double lambda) {
    Vector out(n);
    for (int i = 0; i < n; ++i) out[i] = phi.q_parts()[i].prox(x[i], lambda);
    return out;
  };

  if (s.scheme == Scheme::SymplecticEuler) {
    const Vector extra = extra_at(options, t, n);
    const Vector x = (z.p + h * (H.position_force(t, z.q) + extra)) / m;
    const Vector qdot = prox_velocity(x, h / m);
    const PhasePoint z_star{z.q, m * qdot};
    const PhasePoint xh = symplectic_gradient(H, t, z_star);
    const PhasePoint v{xh.q, balanced_force(xh.p + extra, (z_star.p - z.p) / h, qdot)};
    return finish_step(s, t, z_star, v, xh, extra, options, 1);
  }

  const double tm = t + 0.5 * h;
  const Vector extra = extra_at(options, tm, n);
  Vector qdot = z.p / m;
  int it = 0;
  for (; it < options.fixed_point_iterations; ++it) {
    const Vector q_mid = z.q + (0.5 * h) * qdot;
    const Vector x = (z.p + (0.5 * h) * (H.position_force(tm, q_mid) + extra)) / m;
    const Vector next = prox_velocity(x, 0.5 * h / m);
    const double diff = (next - qdot).cwiseAbs().maxCoeff();
    qdot = next;
    if (diff <= options.fixed_point_tolerance * (1.0 + qdot.cwiseAbs().maxCoeff())) {
      ++it;
      break;
    }
  }
  const PhasePoint z_star{z.q + (0.5 * h) * qdot, m * qdot};
  const PhasePoint xh = symplectic_gradient(H, tm, z_star);
  const PhasePoint v{xh.q, balanced_force(xh.p + extra, (2.0 / h) * (z_star.p - z.p), qdot)};
  return finish_step(s, tm, z_star, v, xh, extra, options, it);
}

StepResult fixed_point_step(const Scenario& s, double t, const PhasePoint& z, double h,
                            const SolverOptions& options) {
  const int n = z.dimension();
  const double ts = eval_time(s.scheme, t, h);
  const Vector extra = extra_at(options, ts, n);
  PhasePoint v = symplectic_gradient(s.hamiltonian, ts, z);
  int it = 0;
  for (; it < options.fixed_point_iterations; ++it) {
    const PhasePoint z_star = eval_point(s.scheme, z, v, h);
    const PhasePoint xh = symplectic_gradient(s.hamiltonian, ts, z_star);
    const PhasePoint next = solve_inclusion(s.dissipation, xh, extra, options).velocity;
    const double diff = max_abs(next - v);
    v = next;
    if (diff <= options.fixed_point_tolerance * (1.0 + max_abs(v))) {
      ++it;
      break;
    }
  }
  const PhasePoint z_star = eval_point(s.scheme, z, v, h);
  const PhasePoint xh = symplectic_gradient(s.hamiltonian, ts, z_star);
  return finish_step(s, ts, z_star, v, xh, extra, options, it);
}

}  // namespace

InclusionSolution minimize_gap_generic(const ConvexPotential& phi, const PhasePoint& xh,
                                       const SolverOptions& options) {
  const int n = phi.dimension();
  if (xh.dimension() != n) throw DimensionError("minimize_gap_generic: dimension mismatch");
  const auto cs = gap_coordinates(phi, xh);
  const auto dim = static_cast<Eigen::Index>(cs.size());

  auto project = [&](Eigen::VectorXd v) {
    for (Eigen::Index j = 0; j < dim; ++j) v[j] = cs[static_cast<std::size_t>(j)].feasible().clamp(v[j]);
    return v;
  };

  Eigen::VectorXd start_xh(dim);
  start_xh << xh.q, xh.p;
  const double a = norm(xh) + 1.0;

  Eigen::VectorXd best = project(start_xh);
  double best_value = total_value(cs, best);
  for (const Eigen::VectorXd& start : {start_xh, Eigen::VectorXd(Eigen::VectorXd::Zero(dim))}) {
    Eigen::VectorXd v = project(start);
    for (int k = 1; k <= options.generic_iterations; ++k) {
      const double val = total_value(cs, v);
      if (val < best_value) {
        best_value = val;
        best = v;
      }
      Eigen::VectorXd g(dim);
      for (Eigen::Index j = 0; j < dim; ++j) g[j] = cs[static_cast<std::size_t>(j)].subgradient(v[j]).min_norm_element();
      const double gn = g.norm();
      if (gn == 0.0 || !std::isfinite(gn)) break;
      v = project(v - (a / std::sqrt(static_cast<double>(k))) * (g / gn));
    }
  }
  for (Eigen::Index j = 0; j < dim; ++j) best[j] = polish_coordinate(cs[static_cast<std::size_t>(j)], best[j]);

  InclusionSolution out;
  out.velocity = to_phase_point(best, n);
  out.gap = gap_value(phi, xh, out.velocity);
  return out;
}

InclusionSolution solve_inclusion(const ConvexPotential& phi, const PhasePoint& xh, const Vector& extra_force,
                                  const SolverOptions& options) {
  const int n = phi.dimension();
  if (xh.dimension() != n || extra_force.size() != n) throw DimensionError("solve_inclusion: dimension mismatch");
  const PhasePoint target = with_extra(xh, extra_force);
  if (!phi.is_velocity_only() || options.force_generic) return minimize_gap_generic(phi, target, options);

  InclusionSolution out;
  out.velocity = target;
  for (int i = 0; i < n; ++i) {
    const Interval eta_set = -phi.q_parts()[i].subdifferential(xh.q[i]);
    out.velocity.p[i] += eta_set.clamp(-target.p[i]);
  }
  out.gap = gap_value(phi, target, out.velocity);
  return out;
}

StepResult solve_step(const Scenario& scenario, double t, const PhasePoint& z, double h,
                      const SolverOptions& options) {
  if (z.dimension() != scenario.dimension()) throw DimensionError("solve_step: state dimension mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("solve_step: step must be positive");
  const auto mass = scenario.hamiltonian.kinetic_mass();
  if (mass && scenario.dissipation.is_velocity_only() && !options.force_generic)
    return prox_step(scenario, t, z, h, *mass, options);
  return fixed_point_step(scenario, t, z, h, options);
}

namespace detail {
void throw_flag_budget(int flagged, int steps, double t) {
  throw NumericalError(fmt::format("{} of {} steps exceed the gap tolerance (at t = {}); aborting", flagged, steps, t));
}
}  // namespace detail

Trajectory integrate(const Scenario& scenario, const PhasePoint& z0, const SolverOptions& options) {
  Trajectory tr;
  tr.scheme = scenario.scheme;
  tr.step = scenario.effective_step();
  tr.gap_tolerance = options.gap_tolerance;
  const auto k = static_cast<std::size_t>(scenario.steps());
  tr.times.reserve(k + 1);
  tr.states.reserve(k + 1);
  for (auto* v : {&tr.velocities, &tr.dissipative_velocities, &tr.eval_points}) v->reserve(k);
  const PhasePoint last = integrate_each(scenario, z0, options,
                                         [&](int, double t, const PhasePoint& z, const StepResult& r) {
                                           tr.times.push_back(t);
                                           tr.states.push_back(z);
                                           tr.velocities.push_back(r.velocity);
                                           tr.dissipative_velocities.push_back(r.dissipative_velocity);
                                           tr.residual_gaps.push_back(r.gap);
                                           tr.eval_times.push_back(r.eval_time);
                                           tr.eval_points.push_back(r.eval_point);
                                           tr.flagged.push_back(r.flagged ? 1 : 0);
                                           tr.flagged_count += r.flagged ? 1 : 0;
                                         });
  tr.times.push_back(scenario.horizon);
  tr.states.push_back(last);
  return tr;
}

PhasePoint flow_map(const Scenario& scenario, const PhasePoint& z0, const SolverOptions& options) {
  return integrate_each(scenario, z0, options, [](int, double, const PhasePoint&, const StepResult&) {});
}

double flow_map_jacobian_determinant(const Scenario& scenario, const PhasePoint& z0, double eps,
                                     const SolverOptions& options) {
  const int n = z0.dimension();
  Eigen::MatrixXd jac(2 * n, 2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    PhasePoint plus = z0, minus = z0;
    if (j < n) {
      plus.q[j] += eps;
      minus.q[j] -= eps;
    } else {
      plus.p[j - n] += eps;
      minus.p[j - n] -= eps;
    }
    const PhasePoint d = (1.0 / (2.0 * eps)) * (flow_map(scenario, plus, options) - flow_map(scenario, minus, options));
    jac.col(j) << d.q, d.p;
  }
  return jac.determinant();
}

Trajectory trajectory_from_states(const Scenario& scenario, const std::vector<PhasePoint>& states,
                                  const SolverOptions& options) {
  const int steps = scenario.steps();
  if (static_cast<int>(states.size()) != steps + 1)
    throw DimensionError(fmt::format("trajectory_from_states: expected {} states, got {}", steps + 1, states.size()));
  const double h = scenario.effective_step();
  Trajectory tr;
  tr.scheme = scenario.scheme;
  tr.step = h;
  tr.gap_tolerance = options.gap_tolerance;
  tr.states = states;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const PhasePoint& z = states[static_cast<std::size_t>(k)];
    if (z.dimension() != scenario.dimension()) throw DimensionError("trajectory_from_states: dimension mismatch");
    const PhasePoint v = (1.0 / h) * (states[static_cast<std::size_t>(k) + 1] - z);
    const double ts = eval_time(scenario.scheme, t, h);
    const PhasePoint z_star = eval_point(scenario.scheme, z, v, h);
    const PhasePoint xh = symplectic_gradient(scenario.hamiltonian, ts, z_star);
    const double gap = gap_value(scenario.dissipation, xh, v);
    tr.times.push_back(t);
    tr.velocities.push_back(v);
    tr.dissipative_velocities.push_back(v - xh);
    tr.residual_gaps.push_back(gap);
    tr.eval_times.push_back(ts);
    tr.eval_points.push_back(z_star);
    const bool flag = !(gap <= options.gap_tolerance);
    tr.flagged.push_back(flag ? 1 : 0);
    tr.flagged_count += flag ? 1 : 0;
  }
  tr.times.push_back(scenario.horizon);
  return tr;
}

std::vector<PhasePoint> lift_configuration_path(const Scenario& scenario, const std::vector<Vector>& q_path,
                                                const Vector& p0) {
  const auto mass = scenario.hamiltonian.kinetic_mass();
  if (!mass) throw std::invalid_argument("lift_configuration_path: requires a kinetic Hamiltonian");
  if (static_cast<int>(q_path.size()) != scenario.steps() + 1)
    throw DimensionError("lift_configuration_path: path length must be steps + 1");
  const double h = scenario.effective_step();
  const double m = *mass;
  std::vector<PhasePoint> out;
  out.reserve(q_path.size());
  out.push_back(PhasePoint{q_path.front(), p0});
  for (std::size_t k = 0; k + 1 < q_path.size(); ++k) {
    const Vector vq = (q_path[k + 1] - q_path[k]) / h;
    const Vector p_next = scenario.scheme == Scheme::SymplecticEuler ? Vector(m * vq) : Vector(2.0 * m * vq - out[k].p);
    out.push_back(PhasePoint{q_path[k + 1], p_next});
  }
  return out;
}

ExtendedReal action_functional(const Scenario& scenario, const Trajectory& trajectory) {
  ExtendedReal total = 0.0;
  const double h = trajectory.step;
  for (int k = 0; k < trajectory.steps(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    ExtendedReal integrand = scenario.dissipation.evaluate(trajectory.velocities[i]);
    integrand += symplectic_conjugate(scenario.dissipation, trajectory.dissipative_velocities[i]);
    if (!integrand.is_finite()) return ExtendedReal::infinity();
    integrand -= scenario.hamiltonian.time_derivative(trajectory.eval_times[i], trajectory.eval_points[i]);
    total += h * integrand;
  }
  total += scenario.hamiltonian.value(trajectory.times.back(), trajectory.states.back());
  return total;
}

std::vector<double> energy_series(const Scenario& scenario, const Trajectory& trajectory) {
  std::vector<double> e;
  e.reserve(trajectory.states.size());
  for (std::size_t k = 0; k < trajectory.states.size(); ++k)
    e.push_back(scenario.hamiltonian.value(trajectory.times[k], trajectory.states[k]));
  return e;
}

}  // namespace sben
