#include "sben/run.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <fmt/format.h>

#include "json_fields.hpp"
#include "sben/csv.hpp"
#include "sben/errors.hpp"
#include "sben/liouville.hpp"
#include "sben/selftest.hpp"
#include "sben/svg_plot.hpp"

#ifndef SBEN_VERSION
#define SBEN_VERSION "unknown"
#endif

namespace sben {

namespace {

using detail::json;

constexpr std::string_view kKinds[] = {"deterministic", "stochastic", "liouville", "work_pump", "selftest"};

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(detail::join(path, key), "unknown field");
  }
}

int positive_int(const json& obj, const std::string& key, const std::string& path, int fallback, int minimum = 1) {
  const int v = detail::integer_or(obj, key, path, fallback);
  if (v < minimum) throw ConfigError(detail::join(path, key), fmt::format("must be >= {}", minimum));
  return v;
}

const json* section(const json& root, const std::string& key) {
  const json* s = detail::optional(root, key);
  if (s && !s->is_object()) throw ConfigError(key, "expected an object");
  return s;
}

// Writes artifacts through a single funnel so the manifest lists them all.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void text(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + (dir_ / name).string());
    names_.push_back(name);
  }

  template <typename Fn>
  void stream(const std::string& name, Fn&& fill) {
    std::ostringstream s;
    fill(s);
    text(name, s.str());
  }

  void svg(const std::string& name, const LinePlot& plot) { text(name, render_svg(plot)); }

  std::vector<std::string> names() const {
    auto n = names_;
    std::sort(n.begin(), n.end());
    return n;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

std::vector<double> component(const std::vector<PhasePoint>& states, bool momentum, int i) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& z : states) out.push_back(momentum ? z.p[i] : z.q[i]);
  return out;
}

std::vector<double> clip(std::vector<double> v, std::size_t n) {
  v.resize(std::min(v.size(), n));
  return v;
}

LinePlot state_plot(const std::string& title, const std::vector<double>& times, const std::vector<PhasePoint>& states,
                    bool momentum) {
  LinePlot plot{title, "t", momentum ? "p" : "q", {}, false};
  for (int i = 0; i < states.front().dimension(); ++i)
    plot.series.push_back({fmt::format("{}{}", momentum ? "p" : "q", i), times, component(states, momentum, i), false});
  return plot;
}

std::string state_string(const PhasePoint& z) {
  std::string s = "q = [";
  for (int i = 0; i < z.dimension(); ++i) s += (i ? ", " : "") + fmt::format("{:.10g}", z.q[i]);
  s += "], p = [";
  for (int i = 0; i < z.dimension(); ++i) s += (i ? ", " : "") + fmt::format("{:.10g}", z.p[i]);
  return s + "]";
}

std::string scenario_lines(const Scenario& s) {
  return fmt::format(
      "hamiltonian: {}\ndissipation: {}\nscheme: {}, T = {:.6g}, h = {:.6g} ({} steps), beta = {:.6g}, alpha = {:.6g}\n",
      s.hamiltonian.describe(), s.dissipation.describe(), to_string(s.scheme), s.horizon, s.effective_step(),
      s.steps(), s.beta, s.alpha);
}

std::string manifest(const RunConfig& config, const RunResult& result) {
  json m;
  m["tool"] = "sben";
  m["versions"] = version_string();
  m["kind"] = std::string(to_string(config.kind));
  m["seed"] = config.seed;
  m["config"] = json::parse(config.echo);
  m["artifacts"] = result.artifacts;
  m["exit_code"] = result.exit_code;
  m["message"] = result.message;
  return m.dump(2) + "\n";
}

RunResult run_deterministic(const RunConfig& c, ArtifactWriter& w, std::ostream& log) {
  const Scenario& s = *c.scenario;
  const Trajectory tr = integrate(s, *s.initial, c.solver);
  const std::vector<double> energy = energy_series(s, tr);
  const ExtendedReal action = action_functional(s, tr);
  double max_gap = 0.0;
  for (double g : tr.residual_gaps) max_gap = std::max(max_gap, g);

  w.stream("trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, tr); });
  std::string summary = "Deterministic SBEN run\n" + scenario_lines(s);
  summary += fmt::format("initial: {}\nfinal:   {}\n", state_string(tr.states.front()), state_string(tr.states.back()));
  summary += fmt::format("energy: initial {:.10g}, final {:.10g}\n", energy.front(), energy.back());
  summary += fmt::format("max SBEN gap: {:.3e} (tolerance {:.1e}), flagged steps: {}\n", max_gap, tr.gap_tolerance,
                         tr.flagged_count);
  summary += fmt::format("action Pi: {}\n", action.is_finite() ? fmt::format("{:.10g}", action.value()) : "+inf");
  w.text("summary.txt", summary);
  log << summary;

  if (c.plots) {
    w.svg("q.svg", state_plot("q(t)", tr.times, tr.states, false));
    w.svg("p.svg", state_plot("p(t)", tr.times, tr.states, true));
    w.svg("energy.svg", LinePlot{"H(t, z(t))", "t", "H", {{"H", tr.times, energy, false}}, false});
    w.svg("gap.svg", LinePlot{"SBEN gap per step", "t", "gap", {{"gap", clip(tr.times, tr.steps()), tr.residual_gaps, false}}, true});
  }
  return {kExitSuccess, {}, fmt::format("{} steps, max gap {:.3e}", tr.steps(), max_gap)};
}

RunResult run_stochastic(const RunConfig& c, ArtifactWriter& w, std::ostream& log) {
  const Scenario& s = *c.scenario;
  StochasticOptions opt;
  opt.backend = c.sampler;
  opt.solver = c.solver;
  const Trajectory reference = integrate(s, *s.initial, c.solver);

  std::string summary = "Stochastic SBEN ensemble\n" + scenario_lines(s);
  summary += fmt::format("members: {}, master seed: {}\n", c.ensemble, c.seed);
  LinePlot qplot{"q0(t): ensemble and deterministic SBEN", "t", "q0", {}, false};
  LinePlot eplot{"H(t, z(t)): ensemble and deterministic SBEN", "t", "H", {}, false};
  long flags = 0;
  long draws = 0;
  for (int m = 0; m < c.ensemble; ++m) {
    Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(m)));
    const StochasticTrajectory st = integrate_stochastic(s, *s.initial, rng, opt);
    const std::string name = fmt::format("trajectory_{:03}.csv", m);
    w.stream(name, [&](std::ostream& o) { write_stochastic_csv(o, st); });
    double acc = 0.0;
    for (double a : st.acceptance_rates) acc += a;
    acc /= std::max<std::size_t>(1, st.acceptance_rates.size());
    summary += fmt::format("  member {:3}: backend {}, final {}, mean acceptance {:.3f}, sampler flags {}\n", m,
                           to_string(st.backend), state_string(st.trajectory.states.back()), acc, st.sampler_flags);
    flags += st.sampler_flags;
    draws += static_cast<long>(st.eta.size());
    if (c.plots && m < 8) {
      qplot.series.push_back({fmt::format("member {}", m), st.trajectory.times,
                              component(st.trajectory.states, false, 0), false});
      eplot.series.push_back({fmt::format("member {}", m), st.trajectory.times, energy_series(s, st.trajectory), false});
    }
  }
  summary += fmt::format("deterministic reference final: {}\n", state_string(reference.states.back()));
  w.stream("reference.csv", [&](std::ostream& o) { write_trajectory_csv(o, reference); });
  w.text("summary.txt", summary);
  log << summary;
  if (c.plots) {
    qplot.series.push_back({"deterministic", reference.times, component(reference.states, false, 0), false});
    eplot.series.push_back({"deterministic", reference.times, energy_series(s, reference), false});
    w.svg("q.svg", qplot);
    w.svg("energy.svg", eplot);
  }
  if (static_cast<double>(flags) > c.solver.flagged_fraction_limit * static_cast<double>(std::max(1L, draws)))
    return {kExitNumerical, {}, fmt::format("{} of {} sampler draws flagged (budget {:.1f}%)", flags, draws,
                                            100.0 * c.solver.flagged_fraction_limit)};
  return {kExitSuccess, {}, fmt::format("{} members, {} sampler flags", c.ensemble, flags)};
}

GibbsSpec gibbs_spec(const RunConfig& c) {
  const Scenario& s = *c.scenario;
  GibbsSpec spec{s.alpha, s.beta, *s.box, c.resolution};
  spec.validate();
  return spec;
}

LinePlot levels_plot(const std::string& title, const std::vector<LevelEstimate>& levels, const std::string& rhs_label,
                     bool work) {
  LinePlot plot{title, "refinement level", "value", {}, false};
  PlotSeries lhs{"mu_T - mu_0", {}, {}, true}, rhs{rhs_label, {}, {}, true};
  for (const auto& l : levels) {
    lhs.x.push_back(l.level);
    lhs.y.push_back(l.muT - l.mu0);
    rhs.x.push_back(l.level);
    rhs.y.push_back(work ? l.work : l.cost);
  }
  plot.series = {lhs, rhs};
  return plot;
}

RunResult run_liouville(const RunConfig& c, ArtifactWriter& w, std::ostream& log) {
  const Scenario& s = *c.scenario;
  const GibbsSpec spec = gibbs_spec(c);
  FlowRecipe recipe = c.flow == "sben" ? FlowRecipe::sben() : FlowRecipe::perturbed(c.perturbation);
  auto extra = recipe.solver.extra_force;
  recipe.solver = c.solver;
  recipe.solver.extra_force = extra;

  CostReport report = theorem_check(s, spec, recipe, c.refine);
  w.stream("cost_report.csv", [&](std::ostream& o) { write_cost_report_csv(o, report); });
  w.stream("cost_levels.csv", [&](std::ostream& o) { write_levels_csv(o, report.levels); });
  const std::string text = format_cost_report(report);
  w.text("cost_report.txt", text);
  log << scenario_lines(s) << text;
  if (c.plots) {
    // β C from β-free level costs.
    auto levels = report.levels;
    for (auto& l : levels) l.cost *= s.beta;
    w.svg("liouville.svg", levels_plot("Both sides of mu_T - mu_0 <= beta C", levels, "beta * C", false));
  }

  const bool expect_tight = c.expect_tight.value_or(c.flow == "sben" && !report.informative);
  if (report.verdict() == Verdict::Fail)
    return {kExitVerdict, {}, fmt::format("inequality fails: slack {:.3e} below -tol {:.3e}", report.slack, report.tol_total)};
  if (expect_tight && !report.equality_tight)
    return {kExitVerdict, {}, fmt::format("expected equality: slack {:.3e} exceeds tol {:.3e}", report.slack, report.tol_total)};
  return {kExitSuccess, {}, fmt::format("verdict {}, slack {:.3e}, tol {:.3e}", to_string(report.verdict()), report.slack,
                                        report.tol_total)};
}

RunResult run_work_pump(const RunConfig& c, ArtifactWriter& w, std::ostream& log) {
  const Scenario& s = *c.scenario;
  const GibbsSpec spec = gibbs_spec(c);
  const WorkPumpReport report = work_pump_check(s, spec, c.refine, c.d_samples);
  w.stream("work_pump_report.csv", [&](std::ostream& o) { write_work_pump_csv(o, report); });
  w.stream("work_pump_levels.csv", [&](std::ostream& o) { write_levels_csv(o, report.levels); });
  const std::string text = format_work_pump_report(report);
  w.text("work_pump_report.txt", text);
  log << scenario_lines(s) << text;
  if (c.plots) w.svg("work_pump.svg", levels_plot("Both sides of mu_T - mu_0 >= work bound", report.levels, "work bound", true));
  if (report.verdict() == Verdict::Fail)
    return {kExitVerdict, {}, fmt::format("work bound fails: lhs {:.6g} < rhs {:.6g} - tol", report.lhs, report.rhs)};
  return {kExitSuccess, {}, fmt::format("verdict {}", to_string(report.verdict()))};
}

RunResult run_selftest_kind(const RunConfig& c, ArtifactWriter& w, std::ostream& log) {
  const SelftestReport report = run_selftest({}, c.seed);
  const std::string text = report.format();
  w.text("selftest.txt", text);
  log << text;
  return {report.passed() ? kExitSuccess : kExitVerdict, {}, report.passed() ? "all suites passed" : "selftest failed"};
}

}  // namespace

std::string_view to_string(RunKind k) { return kKinds[static_cast<int>(k)]; }

RunKind run_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kKinds); ++i)
    if (kKinds[i] == name) return static_cast<RunKind>(i);
  throw std::invalid_argument("unknown run kind '" + std::string(name) +
                              "' (deterministic | stochastic | liouville | work_pump | selftest)");
}

std::filesystem::path default_output_root() {
  if (const char* root = std::getenv("SBEN_OUTPUT_ROOT"); root && *root) return root;
  return "sben-out";
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir, const std::string& name,
                           const RunOverrides& overrides) {
  const json root = detail::parse_json(json_text, "config");
  if (!root.is_object()) throw ConfigError("", "config must be a JSON object");
  check_keys(root, "", {"kind", "seed", "output", "plots", "scenario", "solver", "stochastic", "liouville", "work_pump"});

  RunConfig c;
  const std::string kind = detail::as_string(detail::require(root, "kind", ""), "kind");
  try {
    c.kind = run_kind_from_string(kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("kind", e.what());
  }

  json echo;
  echo["kind"] = kind;
  if (c.kind != RunKind::Selftest) {
    const json& sc = detail::require(root, "scenario", "");
    c.scenario = detail::scenario_from_json(sc, base_dir, "scenario");
    c.scenario->validate();
    echo["scenario"] = sc;
  }

  std::uint64_t seed = c.scenario ? c.scenario->seed : 0;
  if (const json* v = detail::optional(root, "seed")) {
    if (!v->is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    seed = v->get<std::uint64_t>();
  }
  c.seed = overrides.seed.value_or(seed);
  if (c.scenario) c.scenario->seed = c.seed;
  echo["seed"] = c.seed;

  c.plots = overrides.plots.value_or(detail::boolean_or(root, "plots", "", false));
  echo["plots"] = c.plots;

  if (overrides.output) {
    c.output_dir = *overrides.output;
  } else if (const json* out = detail::optional(root, "output")) {
    c.output_dir = detail::as_string(*out, "output");
    if (c.output_dir.empty()) throw ConfigError("output", "must not be empty");
  } else {
    c.output_dir = default_output_root() / name;
  }

  if (const json* sv = section(root, "solver")) {
    check_keys(*sv, "solver", {"gap_tolerance", "force_generic", "flagged_fraction_limit", "generic_iterations"});
    c.solver.gap_tolerance = detail::number_or(*sv, "gap_tolerance", "solver", c.solver.gap_tolerance);
    if (!(c.solver.gap_tolerance > 0.0)) throw ConfigError("solver.gap_tolerance", "must be > 0");
    c.solver.force_generic = detail::boolean_or(*sv, "force_generic", "solver", false);
    c.solver.flagged_fraction_limit =
        detail::number_or(*sv, "flagged_fraction_limit", "solver", c.solver.flagged_fraction_limit);
    if (!(c.solver.flagged_fraction_limit >= 0.0 && c.solver.flagged_fraction_limit <= 1.0))
      throw ConfigError("solver.flagged_fraction_limit", "must lie in [0, 1]");
    c.solver.generic_iterations = positive_int(*sv, "generic_iterations", "solver", c.solver.generic_iterations);
  }
  echo["solver"] = {{"gap_tolerance", c.solver.gap_tolerance},
                    {"force_generic", c.solver.force_generic},
                    {"flagged_fraction_limit", c.solver.flagged_fraction_limit},
                    {"generic_iterations", c.solver.generic_iterations}};

  auto need_initial = [&] {
    if (!c.scenario->initial) throw ConfigError("scenario.initial", "required for kind " + kind);
  };
  auto need_box = [&] {
    if (!c.scenario->box) throw ConfigError("scenario.box", "required for kind " + kind);
  };

  switch (c.kind) {
    case RunKind::Deterministic:
      need_initial();
      break;
    case RunKind::Stochastic: {
      need_initial();
      if (const json* st = section(root, "stochastic")) {
        check_keys(*st, "stochastic", {"ensemble", "sampler"});
        c.ensemble = positive_int(*st, "ensemble", "stochastic", c.ensemble);
        if (const json* b = detail::optional(*st, "sampler")) {
          try {
            c.sampler = sampler_backend_from_string(detail::as_string(*b, "stochastic.sampler"));
          } catch (const std::invalid_argument& e) {
            throw ConfigError("stochastic.sampler", e.what());
          }
        }
      }
      try {
        resolve_backend(*c.scenario, c.sampler);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("stochastic.sampler", e.what());
      }
      echo["stochastic"] = {{"ensemble", c.ensemble}, {"sampler", std::string(to_string(c.sampler))}};
      break;
    }
    case RunKind::Liouville: {
      need_box();
      if (const json* lv = section(root, "liouville")) {
        check_keys(*lv, "liouville", {"resolution", "refine", "flow", "perturbation", "expect_tight"});
        c.resolution = positive_int(*lv, "resolution", "liouville", c.resolution, 8);
        c.refine = positive_int(*lv, "refine", "liouville", c.refine, 0);
        if (const json* f = detail::optional(*lv, "flow")) c.flow = detail::as_string(*f, "liouville.flow");
        if (c.flow != "sben" && c.flow != "perturbed")
          throw ConfigError("liouville.flow", "unknown flow '" + c.flow + "' (sben | perturbed)");
        c.perturbation = detail::number_or(*lv, "perturbation", "liouville", c.perturbation);
        if (const json* t = detail::optional(*lv, "expect_tight")) {
          if (!t->is_boolean()) throw ConfigError("liouville.expect_tight", "expected true or false");
          c.expect_tight = t->get<bool>();
        }
      }
      if (overrides.refine) c.refine = *overrides.refine;
      if (c.refine < 0) throw ConfigError("refine", "must be >= 0");
      echo["liouville"] = {{"resolution", c.resolution}, {"refine", c.refine}, {"flow", c.flow},
                           {"perturbation", c.perturbation}};
      if (c.expect_tight) echo["liouville"]["expect_tight"] = *c.expect_tight;
      GibbsSpec{c.scenario->alpha, c.scenario->beta, *c.scenario->box, c.resolution}.validate();
      break;
    }
    case RunKind::WorkPump: {
      need_box();
      if (const json* wp = section(root, "work_pump")) {
        check_keys(*wp, "work_pump", {"resolution", "refine", "d_samples"});
        c.resolution = positive_int(*wp, "resolution", "work_pump", c.resolution, 8);
        c.refine = positive_int(*wp, "refine", "work_pump", c.refine, 0);
        c.d_samples = positive_int(*wp, "d_samples", "work_pump", c.d_samples);
      }
      if (overrides.refine) c.refine = *overrides.refine;
      if (c.refine < 0) throw ConfigError("refine", "must be >= 0");
      echo["work_pump"] = {{"resolution", c.resolution}, {"refine", c.refine}, {"d_samples", c.d_samples}};
      GibbsSpec{c.scenario->alpha, c.scenario->beta, *c.scenario->box, c.resolution}.validate();
      break;
    }
    case RunKind::Selftest:
      break;
  }
  c.echo = echo.dump();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, const RunOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path(), path.stem().string(), overrides);
}

RunResult run(const RunConfig& config, std::ostream& log) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    log << fmt::format("error: output: cannot create directory {} ({})\n", config.output_dir.string(), ec.message());
    return {kExitValidation, {}, "output directory not writable"};
  }
  ArtifactWriter writer(config.output_dir);
  RunResult result;
  try {
    switch (config.kind) {
      case RunKind::Deterministic: result = run_deterministic(config, writer, log); break;
      case RunKind::Stochastic: result = run_stochastic(config, writer, log); break;
      case RunKind::Liouville: result = run_liouville(config, writer, log); break;
      case RunKind::WorkPump: result = run_work_pump(config, writer, log); break;
      case RunKind::Selftest: result = run_selftest_kind(config, writer, log); break;
    }
  } catch (const ConfigError& e) {
    result = {kExitValidation, {}, e.what()};
  } catch (const PreconditionError& e) {
    result = {kExitValidation, {}, e.what()};
  } catch (const NumericalError& e) {
    result = {kExitNumerical, {}, e.what()};
  } catch (const std::runtime_error& e) {
    result = {kExitValidation, {}, e.what()};
  }
  result.artifacts = writer.names();
  result.artifacts.push_back("manifest.json");
  std::sort(result.artifacts.begin(), result.artifacts.end());
  try {
    std::ofstream out(config.output_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest(config, result);
  } catch (const std::exception& e) {
    log << "error: cannot write manifest: " << e.what() << "\n";
    if (result.exit_code == kExitSuccess) result.exit_code = kExitValidation;
  }
  log << fmt::format("{}: {} (exit {})\n", result.exit_code == kExitSuccess ? "done" : "failed", result.message,
                     result.exit_code);
  return result;
}

std::string version_string() {
  return fmt::format("sben {}; Eigen {}.{}.{}; fmt {}; nlohmann_json {}.{}.{}", SBEN_VERSION, EIGEN_WORLD_VERSION,
                     EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION, FMT_VERSION, NLOHMANN_JSON_VERSION_MAJOR,
                     NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH);
}

std::string export_schema() {
  const json vec = {{"type", "array"}, {"items", {{"type", "number"}}}};
  const json point = {{"type", "object"}, {"required", {"q", "p"}}, {"properties", {{"q", vec}, {"p", vec}}}};
  const json schema = {
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "sben run config"},
      {"type", "object"},
      {"required", {"kind"}},
      {"additionalProperties", false},
      {"properties",
       {{"kind", {{"enum", {"deterministic", "stochastic", "liouville", "work_pump", "selftest"}}}},
        {"seed", {{"type", "integer"}, {"minimum", 0}}},
        {"output", {{"type", "string"}}},
        {"plots", {{"type", "boolean"}}},
        {"scenario",
         {{"type", "object"},
          {"required", {"dimension", "hamiltonian", "dissipation", "horizon", "step", "beta"}},
          {"properties",
           {{"dimension", {{"type", "integer"}, {"minimum", 1}, {"maximum", kMaxDimension}}},
            {"hamiltonian",
             {{"type", "object"},
              {"required", {"type", "mass", "potential"}},
              {"properties",
               {{"type", {{"enum", {"separable_kinetic", "forced_separable"}}}},
                {"mass", {{"type", "number"}, {"exclusiveMinimum", 0}}},
                {"potential",
                 {{"type", "object"},
                  {"required", {"type"}},
                  {"properties",
                   {{"type", {{"enum", {"zero", "harmonic", "double_well", "pendulum"}}}},
                    {"stiffness", {{"type", "number"}}},
                    {"a", {{"type", "number"}}},
                    {"b", {{"type", "number"}}},
                    {"g", {{"type", "number"}}}}}}},
                {"forcing",
                 {{"type", "object"},
                  {"required", {"type"}},
                  {"properties",
                   {{"type", {{"enum", {"ramp", "constant", "sinusoid"}}}},
                    {"rate", vec},
                    {"value", vec},
                    {"amplitude", vec},
                    {"frequency", {{"type", "number"}}}}}}}}}}},
            {"dissipation",
             {{"type", "object"},
              {"required", {"type"}},
              {"properties",
               {{"type", {{"enum", {"zero", "quadratic_velocity", "dry_friction", "grid", "phase_quadratic"}}}},
                {"c", {{"type", "number"}}},
                {"k", {{"type", "number"}}},
                {"b", {{"type", "number"}}},
                {"file", {{"type", "string"}}},
                {"samples", {{"type", "array"}, {"items", {{"type", "array"}, {"minItems", 2}, {"maxItems", 2}}}}},
                {"shift", {{"type", "object"}, {"properties", {{"q", vec}, {"p", vec}}}}}}}}},
            {"horizon", {{"type", "number"}, {"exclusiveMinimum", 0}}},
            {"step", {{"type", "number"}, {"exclusiveMinimum", 0}}},
            {"scheme", {{"enum", {"midpoint", "symplectic_euler"}}}},
            {"beta", {{"type", "number"}, {"exclusiveMinimum", 0}}},
            {"alpha", {{"type", "number"}}},
            {"seed", {{"type", "integer"}, {"minimum", 0}}},
            {"initial", point},
            {"box",
             {{"type", "object"},
              {"required", {"q_lower", "p_lower", "q_upper", "p_upper"}},
              {"properties", {{"q_lower", vec}, {"p_lower", vec}, {"q_upper", vec}, {"p_upper", vec}}}}}}}}},
        {"solver",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties",
           {{"gap_tolerance", {{"type", "number"}}},
            {"force_generic", {{"type", "boolean"}}},
            {"flagged_fraction_limit", {{"type", "number"}}},
            {"generic_iterations", {{"type", "integer"}}}}}}},
        {"stochastic",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties",
           {{"ensemble", {{"type", "integer"}, {"minimum", 1}}},
            {"sampler", {{"enum", {"auto", "exact_gaussian", "truncated_exponential", "metropolis", "point_mass"}}}}}}}},
        {"liouville",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties",
           {{"resolution", {{"type", "integer"}, {"minimum", 8}}},
            {"refine", {{"type", "integer"}, {"minimum", 0}}},
            {"flow", {{"enum", {"sben", "perturbed"}}}},
            {"perturbation", {{"type", "number"}}},
            {"expect_tight", {{"type", "boolean"}}}}}}},
        {"work_pump",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties",
           {{"resolution", {{"type", "integer"}, {"minimum", 8}}},
            {"refine", {{"type", "integer"}, {"minimum", 0}}},
            {"d_samples", {{"type", "integer"}, {"minimum", 1}}}}}}}}}};
  return schema.dump(2) + "\n";
}

}  // namespace sben
