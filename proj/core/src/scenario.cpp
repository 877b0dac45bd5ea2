#include "sben/scenario.hpp"

#include <cmath>

#include "json_fields.hpp"

namespace sben {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::Midpoint:
      return "midpoint";
    case Scheme::SymplecticEuler:
      return "symplectic_euler";
  }
  return "midpoint";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "midpoint") return Scheme::Midpoint;
  if (name == "symplectic_euler") return Scheme::SymplecticEuler;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (midpoint | symplectic_euler)");
}

int Scenario::steps() const {
  const double ratio = horizon / step;
  const int k = static_cast<int>(std::ceil(ratio - 1e-9));
  return std::max(k, 1);
}

double Scenario::effective_step() const { return horizon / steps(); }

void Scenario::validate() const {
  const int n = dimension();
  if (dissipation.dimension() != n) throw ConfigError("scenario.dissipation", "dimension differs from the Hamiltonian");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("scenario.horizon", "must be > 0");
  if (!(step > 0.0) || step > horizon) throw ConfigError("scenario.step", "must satisfy 0 < step <= horizon");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("scenario.beta", "must be > 0");
  if (!std::isfinite(alpha)) throw ConfigError("scenario.alpha", "must be finite");
  if (initial) {
    try {
      sben::validate(*initial);
    } catch (const std::exception& e) {
      throw ConfigError("scenario.initial", e.what());
    }
    if (initial->dimension() != n) throw ConfigError("scenario.initial", "dimension mismatch");
  }
  if (box) {
    try {
      box->validate();
    } catch (const std::exception& e) {
      throw ConfigError("scenario.box", e.what());
    }
    if (box->dimension() != n) throw ConfigError("scenario.box", "dimension mismatch");
  }
}

namespace detail {

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", what + ": malformed JSON (" + e.what() + ")");
  }
}

namespace {

PotentialEnergy potential_from_json(const json& obj, const std::string& path) {
  const std::string type = as_string(require(obj, "type", path), join(path, "type"));
  if (type == "zero") return PotentialEnergy::zero();
  if (type == "harmonic") return PotentialEnergy::harmonic(positive(obj, "stiffness", path));
  if (type == "double_well") {
    const double a = positive(obj, "a", path);
    return PotentialEnergy::double_well(a, number(obj, "b", path));
  }
  if (type == "pendulum") return PotentialEnergy::pendulum(positive(obj, "g", path));
  throw ConfigError(join(path, "type"), "unknown potential '" + type + "' (zero | harmonic | double_well | pendulum)");
}

Forcing forcing_from_json(const json& obj, int n, const std::string& path) {
  const std::string type = as_string(require(obj, "type", path), join(path, "type"));
  if (type == "ramp") return Forcing::ramp(vector_of(require(obj, "rate", path), n, join(path, "rate")));
  if (type == "constant") return Forcing::constant(vector_of(require(obj, "value", path), n, join(path, "value")));
  if (type == "sinusoid") {
    return Forcing::sinusoid(vector_of(require(obj, "amplitude", path), n, join(path, "amplitude")),
                             number(obj, "frequency", path));
  }
  throw ConfigError(join(path, "type"), "unknown forcing '" + type + "' (ramp | constant | sinusoid)");
}

Hamiltonian hamiltonian_from_json(const json& obj, int n, const std::string& path) {
  const std::string type = as_string(require(obj, "type", path), join(path, "type"));
  if (type != "separable_kinetic" && type != "forced_separable")
    throw ConfigError(join(path, "type"), "unknown hamiltonian '" + type + "' (separable_kinetic | forced_separable)");
  const double mass = positive(obj, "mass", path);
  PotentialEnergy potential = potential_from_json(require(obj, "potential", path), join(path, "potential"));
  if (type == "separable_kinetic") return Hamiltonian::separable_kinetic(n, mass, std::move(potential));
  Forcing forcing = forcing_from_json(require(obj, "forcing", path), n, join(path, "forcing"));
  return Hamiltonian::forced_separable(n, mass, std::move(potential), std::move(forcing));
}

PiecewiseLinearFunction grid_from_json(const json& obj, const std::filesystem::path& base_dir,
                                       const std::string& path) {
  if (const json* file = optional(obj, "file")) {
    std::filesystem::path p = as_string(*file, join(path, "file"));
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    try {
      return load_grid_potential_csv(p.string());
    } catch (const ConfigError& e) {
      throw ConfigError(join(path, "file"), e.what());
    }
  }
  const json& samples = require(obj, "samples", path);
  const std::string spath = join(path, "samples");
  if (!samples.is_array()) throw ConfigError(spath, "expected an array of [x, value] pairs");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string ipath = spath + "[" + std::to_string(i) + "]";
    if (!samples[i].is_array() || samples[i].size() != 2) throw ConfigError(ipath, "expected [x, value]");
    xs.push_back(as_number(samples[i][0], ipath));
    ys.push_back(as_number(samples[i][1], ipath));
  }
  try {
    return PiecewiseLinearFunction(std::move(xs), std::move(ys));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(spath, e.what());
  }
}

ConvexPotential dissipation_from_json(const json& obj, int n, const std::filesystem::path& base_dir,
                                      const std::string& path) {
  const std::string type = as_string(require(obj, "type", path), join(path, "type"));
  auto build = [&]() -> ConvexPotential {
    if (type == "zero") return ConvexPotential::zero(n);
    if (type == "quadratic_velocity") return ConvexPotential::quadratic_velocity(n, positive(obj, "c", path));
    if (type == "dry_friction") return ConvexPotential::dry_friction(n, positive(obj, "k", path));
    if (type == "grid") return ConvexPotential::grid_velocity(n, grid_from_json(obj, base_dir, path));
    if (type == "phase_quadratic")
      return ConvexPotential::phase_quadratic(n, positive(obj, "c", path), positive(obj, "b", path));
    throw ConfigError(join(path, "type"),
                      "unknown dissipation '" + type + "' (zero | quadratic_velocity | dry_friction | grid | "
                      "phase_quadratic)");
  };
  ConvexPotential phi = build();
  if (const json* shift = optional(obj, "shift")) {
    const std::string spath = join(path, "shift");
    PhasePoint s = PhasePoint::zero(n);
    if (const json* q = optional(*shift, "q")) s.q = vector_of(*q, n, join(spath, "q"));
    if (const json* p = optional(*shift, "p")) s.p = vector_of(*p, n, join(spath, "p"));
    phi = phi.translated(s);
  }
  return phi;
}

}  // namespace

Scenario scenario_from_json(const json& obj, const std::filesystem::path& base_dir, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const json& dim = require(obj, "dimension", path);
  if (!dim.is_number_integer() || dim.get<int>() < 1 || dim.get<int>() > kMaxDimension)
    throw ConfigError(join(path, "dimension"), "expected an integer in [1, " + std::to_string(kMaxDimension) + "]");
  const int n = dim.get<int>();

  auto guarded = [&](const std::string& key, auto&& fn) {
    try {
      return fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(join(path, key), e.what());
    }
  };

  Hamiltonian h = guarded("hamiltonian", [&] {
    return hamiltonian_from_json(require(obj, "hamiltonian", path), n, join(path, "hamiltonian"));
  });
  ConvexPotential phi = guarded("dissipation", [&] {
    return dissipation_from_json(require(obj, "dissipation", path), n, base_dir, join(path, "dissipation"));
  });

  Scenario s{.hamiltonian = std::move(h), .dissipation = std::move(phi), .initial = {}, .box = {}};
  s.horizon = positive(obj, "horizon", path);
  s.step = positive(obj, "step", path);
  s.beta = positive(obj, "beta", path);
  s.alpha = number_or(obj, "alpha", path, 0.0);
  if (const json* scheme = optional(obj, "scheme")) {
    s.scheme = guarded("scheme", [&] { return scheme_from_string(as_string(*scheme, join(path, "scheme"))); });
  }
  if (const json* init = optional(obj, "initial")) {
    const std::string ipath = join(path, "initial");
    s.initial = PhasePoint{vector_of(require(*init, "q", ipath), n, join(ipath, "q")),
                           vector_of(require(*init, "p", ipath), n, join(ipath, "p"))};
  }
  if (const json* box = optional(obj, "box")) {
    const std::string bpath = join(path, "box");
    PhaseBox b{PhasePoint{vector_of(require(*box, "q_lower", bpath), n, join(bpath, "q_lower")),
                          vector_of(require(*box, "p_lower", bpath), n, join(bpath, "p_lower"))},
               PhasePoint{vector_of(require(*box, "q_upper", bpath), n, join(bpath, "q_upper")),
                          vector_of(require(*box, "p_upper", bpath), n, join(bpath, "p_upper"))}};
    s.box = std::move(b);
  }
  if (const json* seed = optional(obj, "seed")) {
    if (!seed->is_number_unsigned()) throw ConfigError(join(path, "seed"), "expected a nonnegative integer");
    s.seed = seed->get<std::uint64_t>();
  }
  s.validate();
  return s;
}

}  // namespace detail

Scenario build_scenario(std::string_view json_text, const std::filesystem::path& base_dir,
                        const std::string& field_prefix) {
  return detail::scenario_from_json(detail::parse_json(json_text, "scenario"), base_dir, field_prefix);
}

}  // namespace sben
