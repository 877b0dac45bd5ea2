#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sben/convex_potential.hpp"
#include "sben/hamiltonian.hpp"

namespace sben {

/// Time discretisation of the inclusion.
enum class Scheme {
  /// Implicit midpoint: velocity solved at (t + h/2, (z_k + z_{k+1})/2).
  Midpoint,
  /// Momentum-first symplectic Euler: velocity solved at (t, (q_k, p_{k+1})).
  SymplecticEuler,
};

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

/// A Hamiltonian paired with a dissipation potential plus the run parameters
/// every pipeline needs.
struct Scenario {
  Hamiltonian hamiltonian;
  ConvexPotential dissipation;
  double horizon = 1.0;
  double step = 1e-3;
  Scheme scheme = Scheme::Midpoint;
  std::optional<PhasePoint> initial;
  std::optional<PhaseBox> box;
  double beta = 1.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;

  int dimension() const { return hamiltonian.dimension(); }
  /// Number of uniform steps K with K·h_eff = T.
  int steps() const;
  /// T / K.
  double effective_step() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Builds a scenario from the JSON text of a `scenario` block (schema in
/// configs/README.md). Relative file references resolve against `base_dir`.
/// Errors are ConfigError with a dotted field path prefixed by `field_prefix`.
Scenario build_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {},
                        const std::string& field_prefix = "scenario");

}  // namespace sben
