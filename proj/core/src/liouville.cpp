#include "sben/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "sben/errors.hpp"

namespace sben {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kMaxNodes = 4L * 1024 * 1024;

std::vector<PhasePoint> midpoint_nodes(const PhaseBox& box, int resolution) {
  const int n = box.dimension();
  const int axes = 2 * n;
  long count = 1;
  for (int a = 0; a < axes; ++a) {
    count *= resolution;
    if (count > kMaxNodes) throw ConfigError("resolution", "quadrature grid exceeds the node budget");
  }
  std::vector<PhasePoint> nodes;
  nodes.reserve(static_cast<std::size_t>(count));
  std::vector<int> idx(static_cast<std::size_t>(axes), 0);
  for (long c = 0; c < count; ++c) {
    long rest = c;
    for (int a = axes - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rest % resolution);
      rest /= resolution;
    }
    PhasePoint z = PhasePoint::zero(n);
    for (int i = 0; i < n; ++i) {
      const double dq = (box.upper.q[i] - box.lower.q[i]) / resolution;
      const double dp = (box.upper.p[i] - box.lower.p[i]) / resolution;
      z.q[i] = box.lower.q[i] + (idx[static_cast<std::size_t>(i)] + 0.5) * dq;
      z.p[i] = box.lower.p[i] + (idx[static_cast<std::size_t>(n + i)] + 0.5) * dp;
    }
    nodes.push_back(std::move(z));
  }
  return nodes;
}

bool nonsmooth(const ConvexPotential& phi) {
  auto kinked = [](const ScalarConvex& f) {
    return std::holds_alternative<AbsoluteFunction>(f.shape()) ||
           std::holds_alternative<PiecewiseLinearFunction>(f.shape());
  };
  return std::any_of(phi.q_parts().begin(), phi.q_parts().end(), kinked) ||
         std::any_of(phi.p_parts().begin(), phi.p_parts().end(), kinked);
}

Scenario with_step(const Scenario& s, double step) {
  Scenario out = s;
  out.step = step;
  return out;
}

double sum_weighted(const std::vector<double>& values, double scale) {
  double s = 0.0;
  for (double v : values) s += v;
  return s * scale;
}

struct LevelFlow {
  LevelEstimate estimate;
  FlowField flow;
};

LevelFlow run_level(const Scenario& scenario, const GibbsSpec& spec, const FlowRecipe& recipe, int level) {
  const GibbsSpec s = spec.refined(level);
  const Scenario sc = with_step(scenario, scenario.effective_step() / std::ldexp(1.0, level));
  LevelFlow out{{}, compute_flow(sc, s, recipe, 2)};
  LevelEstimate& e = out.estimate;
  e.level = level;
  e.resolution = s.resolution;
  e.step = out.flow.step;
  const double scale = std::exp(-s.alpha) * out.flow.cell_volume;
  e.mu0 = sum_weighted(out.flow.weight_initial, scale);
  e.muT = sum_weighted(out.flow.weight_final, scale);
  e.cost = dissipation_cost(s, out.flow).raw();
  e.work = external_work(s, out.flow);
  return out;
}

}  // namespace

void GibbsSpec::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta", "must be > 0");
  if (!std::isfinite(alpha)) throw ConfigError("alpha", "must be finite");
  try {
    box.validate();
  } catch (const std::exception& e) {
    throw ConfigError("box", e.what());
  }
  if (resolution < 8) throw ConfigError("resolution", "must be >= 8");
}

GibbsSpec GibbsSpec::refined(int level) const {
  GibbsSpec s = *this;
  s.resolution = resolution << level;
  return s;
}

FlowRecipe FlowRecipe::sben() { return {}; }

FlowRecipe FlowRecipe::perturbed(double amplitude) {
  FlowRecipe r;
  r.tag = "perturbed";
  r.solver.extra_force = [amplitude](double t) -> Vector {
    Vector f = Vector::Zero(1);
    f[0] = amplitude * std::sin(t);
    return f;
  };
  return r;
}

std::vector<double> FlowField::stored_times() const {
  std::vector<double> out;
  out.reserve(stored_steps.size());
  for (int k : stored_steps) out.push_back(time_of_step(k));
  return out;
}

FlowField compute_flow(const Scenario& scenario, const GibbsSpec& spec, const FlowRecipe& recipe, int stored_times) {
  spec.validate();
  if (spec.box.dimension() != scenario.dimension()) throw DimensionError("compute_flow: box dimension mismatch");
  if (stored_times < 2) throw std::invalid_argument("compute_flow: need at least two stored times");

  SolverOptions options = recipe.solver;
  if (options.extra_force && scenario.dimension() != 1) {
    // Drifts written for n = 1 act on the first coordinate.
    auto base = options.extra_force;
    const int n = scenario.dimension();
    options.extra_force = [base, n](double t) -> Vector {
      const Vector f1 = base(t);
      if (f1.size() == n) return f1;
      Vector f = Vector::Zero(n);
      f.head(f1.size()) = f1;
      return f;
    };
  }

  FlowField flow;
  flow.tag = recipe.tag;
  flow.spec = spec;
  flow.step = scenario.effective_step();
  flow.steps = scenario.steps();
  flow.horizon = scenario.horizon;
  flow.nodes = midpoint_nodes(spec.box, spec.resolution);
  flow.cell_volume = spec.box.volume() / std::pow(static_cast<double>(spec.resolution), 2 * scenario.dimension());

  const int K = flow.steps;
  const int stride = std::max(1, (K + stored_times - 2) / (stored_times - 1));
  for (int k = 0; k < K; k += stride) flow.stored_steps.push_back(k);
  flow.stored_steps.push_back(K);
  flow.stored_states.assign(flow.stored_steps.size(), {});
  for (auto& slice : flow.stored_states) slice.reserve(flow.nodes.size());

  const std::size_t count = flow.nodes.size();
  flow.weight_initial.assign(count, 0.0);
  flow.weight_final.assign(count, 0.0);
  flow.cost.assign(count, 0.0);
  flow.work.assign(count, 0.0);
  flow.max_gap.assign(count, 0.0);

  const Hamiltonian& H = scenario.hamiltonian;
  const ConvexPotential& phi = scenario.dissipation;
  const double beta = spec.beta;
  const double h = flow.step;
  const bool forced = H.forcing().has_value();

  for (std::size_t node = 0; node < count; ++node) {
    double cost = 0.0, work = 0.0, max_gap = 0.0;
    double pending_cost = 0.0, pending_work = 0.0, w_prev = 0.0;
    bool infinite = false;
    std::size_t slice = 0;

    auto on_step = [&](int k, double t, const PhasePoint& z, const StepResult& r) {
      const double w = std::exp(-beta * H.value(t, z));
      if (k == 0) {
        flow.weight_initial[node] = w;
      } else {
        cost += pending_cost * (w_prev + w);
        work += pending_work * (w_prev + w);
      }
      if (slice < flow.stored_steps.size() && flow.stored_steps[slice] == k) {
        flow.stored_states[slice].push_back(z);
        ++slice;
      }
      const PhasePoint& v = r.velocity;
      const PhasePoint& vd = r.dissipative_velocity;
      const PhasePoint& xh = r.conservative_velocity;
      const ExtendedReal phi_v = phi.evaluate(v);
      const ExtendedReal polar = symplectic_conjugate(phi, vd);
      const double dt_h = H.time_derivative(r.eval_time, r.eval_point);
      const double w_vd_v = omega(vd, v);
      const double dh_v = -xh.p.dot(v.q) + xh.q.dot(v.p);
      flow.max_energy_identity_residual = std::max(flow.max_energy_identity_residual, std::abs(dh_v + w_vd_v));
      double integrand = kInf;
      if (phi_v.is_finite() && polar.is_finite()) {
        integrand = phi_v.raw() + polar.raw() - dt_h;
        // On SBEN flows the gap vanishes, leaving I = ω(Ψ̇_D, Ψ̇) − ∂H/∂t.
        const double gap = phi_v.raw() + polar.raw() - w_vd_v;
        max_gap = std::max(max_gap, gap);
        flow.max_integrand_identity_residual =
            std::max(flow.max_integrand_identity_residual, std::abs(integrand - (w_vd_v - dt_h)));
      } else {
        infinite = true;
        max_gap = kInf;
      }
      pending_cost = 0.5 * h * integrand;
      pending_work = forced ? 0.5 * h * H.forcing()->rate(r.eval_time).dot(r.eval_point.q) : 0.0;
      w_prev = w;
    };

    const PhasePoint last = integrate_each(scenario, flow.nodes[node], options, on_step);
    const double wT = std::exp(-beta * H.value(flow.horizon, last));
    cost += pending_cost * (w_prev + wT);
    work += pending_work * (w_prev + wT);
    flow.weight_final[node] = wT;
    flow.stored_states.back().push_back(last);
    flow.cost[node] = infinite ? kInf : cost;
    flow.work[node] = work;
    flow.max_gap[node] = max_gap;
    if (infinite && !flow.infinite_node) flow.infinite_node = static_cast<int>(node);
  }
  return flow;
}

double gibbs_measure(const GibbsSpec& spec, const Hamiltonian& h, const FlowField& flow, double t) {
  const auto times = flow.stored_times();
  const double tol = 1e-9 * std::max(1.0, flow.horizon);
  const auto it = std::find_if(times.begin(), times.end(), [&](double s) { return std::abs(s - t) <= tol; });
  if (it == times.end()) throw std::out_of_range(fmt::format("gibbs_measure: t = {} is not a stored time", t));
  const double ts = *it;
  const auto& states = flow.stored_states[static_cast<std::size_t>(it - times.begin())];
  double sum = 0.0;
  for (const PhasePoint& z : states) sum += std::exp(-(spec.alpha + spec.beta * h.value(ts, z)));
  return sum * flow.cell_volume;
}

ExtendedReal dissipation_cost(const GibbsSpec& spec, const FlowField& flow) {
  if (flow.infinite_node) return ExtendedReal::infinity();
  return sum_weighted(flow.cost, std::exp(-spec.alpha) * flow.cell_volume);
}

double external_work(const GibbsSpec& spec, const FlowField& flow) {
  return spec.beta * sum_weighted(flow.work, std::exp(-spec.alpha) * flow.cell_volume);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Informative:
      return "informative";
  }
  return "fail";
}

Verdict CostReport::verdict() const {
  if (informative) return Verdict::Informative;
  return inequality_holds ? Verdict::Pass : Verdict::Fail;
}

CostReport theorem_check(const Scenario& scenario, const GibbsSpec& spec, const FlowRecipe& recipe, int refine) {
  if (refine < 0) throw std::invalid_argument("theorem_check: refine must be >= 0");
  CostReport report;
  report.flow_tag = recipe.tag;
  report.alpha = spec.alpha;
  report.beta = spec.beta;
  report.informative = nonsmooth(scenario.dissipation);

  for (int level = 0; level <= refine; ++level) {
    LevelFlow lf = run_level(scenario, spec, recipe, level);
    if (level == 0) {
      report.max_gap = *std::max_element(lf.flow.max_gap.begin(), lf.flow.max_gap.end());
      report.max_energy_identity_residual = lf.flow.max_energy_identity_residual;
      report.max_integrand_identity_residual = lf.flow.max_integrand_identity_residual;
      report.infinite_node = lf.flow.infinite_node;
    }
    report.levels.push_back(lf.estimate);
  }

  const LevelEstimate& c = report.levels.front();
  report.mu0 = c.mu0;
  report.muT = c.muT;
  report.cost = c.cost;
  report.lhs = c.muT - c.mu0;
  report.rhs = spec.beta * c.cost;
  report.slack = report.rhs - report.lhs;
  if (report.levels.size() > 1) {
    const LevelEstimate& f = report.levels[1];
    report.err_mu0 = std::abs(c.mu0 - f.mu0);
    report.err_muT = std::abs(c.muT - f.muT);
    report.err_cost = std::abs(c.cost - f.cost);
  }
  report.tol_total = report.err_mu0 + report.err_muT + spec.beta * report.err_cost + 1e-8;
  if (!std::isfinite(report.tol_total)) report.tol_total = kInf;
  report.inequality_holds = report.lhs <= report.rhs + report.tol_total;
  report.equality_tight = std::isfinite(report.slack) && std::abs(report.slack) <= report.tol_total;
  return report;
}

Verdict WorkPumpReport::verdict() const {
  const bool ok = corollary_holds && (!rhs_positive || measure_increases);
  return ok ? Verdict::Pass : Verdict::Fail;
}

WorkPumpReport work_pump_check(const Scenario& scenario, const GibbsSpec& spec, int refine, int d_samples) {
  if (scenario.hamiltonian.kind() != Hamiltonian::Kind::ForcedSeparable)
    throw PreconditionError("work pump: the Hamiltonian must be forced separable");
  if (refine < 0) throw std::invalid_argument("work_pump_check: refine must be >= 0");
  const int n = scenario.dimension();
  PhaseBox sample_box{PhasePoint{Vector::Constant(n, -5.0), Vector::Constant(n, -5.0)},
                      PhasePoint{Vector::Constant(n, 5.0), Vector::Constant(n, 5.0)}};
  WorkPumpReport report;
  report.hypothesis_d = hypothesis_d_check(scenario.dissipation, d_samples, sample_box);
  if (report.hypothesis_d.violated) {
    throw PreconditionError(fmt::format(
        "work pump: the dissipation potential violates the sign condition phi(z) + phi^*w(z') >= 0 "
        "(min sampled value {:.6g}, zero minimises phi: {})",
        report.hypothesis_d.min_value, report.hypothesis_d.zero_is_minimizer ? "yes" : "no"));
  }

  for (int level = 0; level <= refine; ++level)
    report.levels.push_back(run_level(scenario, spec, FlowRecipe::sben(), level).estimate);
  const LevelEstimate& c = report.levels.front();
  report.mu0 = c.mu0;
  report.muT = c.muT;
  report.lhs = c.muT - c.mu0;
  report.rhs = c.work;
  double tol = 1e-8;
  if (report.levels.size() > 1) {
    const LevelEstimate& f = report.levels[1];
    tol += std::abs(c.mu0 - f.mu0) + std::abs(c.muT - f.muT) + std::abs(c.work - f.work);
  }
  report.tol_total = tol;
  report.corollary_holds = report.lhs >= report.rhs - tol;
  report.rhs_positive = report.rhs > 0.0;
  report.measure_increases = report.muT >= report.mu0 - tol;
  return report;
}

PushforwardWitness pushforward_witness(const Scenario& scenario, const GibbsSpec& spec, const FlowRecipe& recipe,
                                       double enlarge) {
  if (!(enlarge >= 1.0)) throw std::invalid_argument("pushforward_witness: enlarge must be >= 1");
  spec.validate();
  const FlowField flow = compute_flow(scenario, spec, recipe, 2);
  PushforwardWitness out;
  out.time = flow.horizon;
  out.mu_t = gibbs_measure(spec, scenario.hamiltonian, flow, flow.horizon);

  GibbsSpec wide = spec;
  const PhasePoint centre = 0.5 * (spec.box.lower + spec.box.upper);
  wide.box.lower = centre + enlarge * (spec.box.lower - centre);
  wide.box.upper = centre + enlarge * (spec.box.upper - centre);
  wide.resolution = static_cast<int>(std::lround(enlarge * spec.resolution));
  const FlowField far = compute_flow(scenario, wide, recipe, 2);
  const auto& final_states = far.stored_states.back();
  double sum = 0.0;
  for (std::size_t i = 0; i < final_states.size(); ++i)
    if (spec.box.contains(final_states[i])) sum += far.weight_initial[i];
  out.pushforward = sum * std::exp(-spec.alpha) * far.cell_volume;
  out.difference = out.mu_t - out.pushforward;
  return out;
}

}  // namespace sben
