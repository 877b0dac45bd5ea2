#include <benchmark/benchmark.h>

#include "sben/liouville.hpp"
#include "sben/solver.hpp"
#include "sben/stochastic.hpp"
#include "support/oracles.hpp"

namespace {

using namespace sben;

void BM_SolveStepViscous(benchmark::State& state) {
  const Scenario s = oracle::viscous_oscillator();
  const PhasePoint z = oracle::point(1.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_step(s, 0.0, z, s.step));
}
BENCHMARK(BM_SolveStepViscous);

void BM_SolveStepDryFriction(benchmark::State& state) {
  Scenario s = oracle::viscous_oscillator();
  s.dissipation = ConvexPotential::dry_friction(1, 1.0);
  const PhasePoint z = oracle::point(2.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_step(s, 0.0, z, s.step));
}
BENCHMARK(BM_SolveStepDryFriction);

void BM_SolveStepGenericPath(benchmark::State& state) {
  Scenario s = oracle::viscous_oscillator();
  s.dissipation = ConvexPotential::phase_quadratic(1, 0.5, 2.0);
  const PhasePoint z = oracle::point(1.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_step(s, 0.0, z, s.step));
}
BENCHMARK(BM_SolveStepGenericPath);

void BM_SbenGap(benchmark::State& state) {
  const auto phi = ConvexPotential::quadratic_velocity(1, 0.5);
  const PhasePoint xh = oracle::point(0.7, -0.4), v = oracle::point(0.7, -0.75);
  for (auto _ : state) benchmark::DoNotOptimize(sben_gap(phi, xh, v));
}
BENCHMARK(BM_SbenGap);

void BM_IntegrateOscillatorT10(benchmark::State& state) {
  const Scenario s = oracle::viscous_oscillator();
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, oracle::point(1.0, 0.0)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.horizon / s.step));
}
BENCHMARK(BM_IntegrateOscillatorT10)->Unit(benchmark::kMillisecond);

void BM_Sampler(benchmark::State& state) {
  const auto backend = static_cast<SamplerBackend>(state.range(0));
  Scenario s = oracle::viscous_oscillator(0.5, 10.0, 1e-3, 4.0);
  if (backend == SamplerBackend::TruncatedExponential) s.dissipation = ConvexPotential::dry_friction(1, 1.0);
  const auto density = DissipativeVelocityDensity::at(s, 0.0, oracle::point(0.0, 1.0));
  Rng rng(1);
  MetropolisChain chain;
  for (auto _ : state) benchmark::DoNotOptimize(sample_dissipative_velocity(density, backend, rng, &chain));
  state.SetLabel(std::string(to_string(backend)));
}
BENCHMARK(BM_Sampler)
    ->Arg(static_cast<int>(SamplerBackend::ExactGaussian))
    ->Arg(static_cast<int>(SamplerBackend::TruncatedExponential))
    ->Arg(static_cast<int>(SamplerBackend::Metropolis));

void BM_ComputeFlow(benchmark::State& state) {
  const Scenario s = oracle::viscous_oscillator(0.5, 0.5, 1e-3);
  const GibbsSpec spec{s.alpha, s.beta, oracle::square(1.0), static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(compute_flow(s, spec, FlowRecipe::sben(), 2));
}
BENCHMARK(BM_ComputeFlow)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
