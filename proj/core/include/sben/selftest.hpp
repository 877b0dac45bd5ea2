#pragma once

// Bundled invariant suites, runnable from the CLI on a fresh build.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sben/convex_potential.hpp"
#include "sben/symplectic.hpp"

namespace sben {

/// The structure maps the symplectic suite exercises. Tests swap in a
/// broken J to check the suite notices.
struct SelftestOps {
  std::function<CotangentPoint(const PhasePoint&)> J = to_cotangent;
  std::function<PhasePoint(const CotangentPoint&)> J_star = to_phase;
};

struct SuiteCheck {
  std::string name;
  bool passed = true;
  /// Worst observed deviation and the threshold it was held to.
  double observed = 0.0;
  double threshold = 0.0;
};

struct SuiteResult {
  std::string name;
  std::vector<SuiteCheck> checks;

  bool passed() const;
};

struct SelftestReport {
  std::vector<SuiteResult> suites;

  bool passed() const;
  /// One line per suite, then indented check lines; deterministic bytes.
  std::string format() const;
};

SuiteResult symplectic_suite(const SelftestOps& ops = {}, std::uint64_t seed = 1);
SuiteResult fenchel_suite(std::uint64_t seed = 1);
SuiteResult conjugate_suite(int grid_points = 101);
SuiteResult gradient_suite(std::uint64_t seed = 1);
SuiteResult conservative_suite();
SuiteResult sampler_suite(std::uint64_t seed = 1, int draws = 20000);

SelftestReport run_selftest(const SelftestOps& ops = {}, std::uint64_t seed = 1);

/// Grid supremum sup_z {ω(z', z) − φ(z)} over z on the square
/// [−half_width, half_width]² with `points` nodes per axis, for every z' on
/// the same grid (n = 1). Row-major in (q', p'): index i·points + j is
/// (q'_i, p'_j).
std::vector<double> brute_force_symplectic_conjugate(const ConvexPotential& phi, double half_width, int points);

/// Compares the analytic φ^{*ω} with brute_force_symplectic_conjugate on the
/// grid. Where the analytic value is finite the two must agree within
/// `tol`; elsewhere the grid supremum must grow at least like
/// half_width · (l1 distance of z' to dom φ^{*ω}) − tol.
struct ConjugateComparison {
  double max_finite_error = 0.0;
  /// min over off-domain nodes of grid value − half_width·distance (≥ −tol).
  double min_growth_margin = 0.0;
  int finite_nodes = 0;
  int infinite_nodes = 0;
};

ConjugateComparison compare_conjugate_with_grid(const ConvexPotential& phi, double half_width, int points);

}  // namespace sben
