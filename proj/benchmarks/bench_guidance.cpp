#include <benchmark/benchmark.h>

#include <random>

#include "ldg/braking_burn.hpp"
#include "ldg/config.hpp"
#include "ldg/design_opt.hpp"
#include "ldg/mission.hpp"
#include "ldg/peg_flat.hpp"
#include "ldg/polynomial_guidance.hpp"

using namespace ldg;

static void BM_CubicCoefficients(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  DescentBoundary b;
  b.r0 = {u(rng), u(rng), u(rng)};
  b.v0 = {u(rng), u(rng), u(rng)};
  b.rf = {u(rng), u(rng), u(rng)};
  b.tf = 40.0;
  for (auto _ : state) benchmark::DoNotOptimize(cubic_coefficients(b));
}
BENCHMARK(BM_CubicCoefficients);

static void BM_BrakingSolve5(benchmark::State& state) {
  const MissionConfig cfg;
  BrakingTarget target;
  target.x_f = pga_target(published_design(cfg.moon));
  target.z0 = mbb_state(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(solve_braking_5(target, cfg.engine, cfg.moon));
}
BENCHMARK(BM_BrakingSolve5)->Unit(benchmark::kMillisecond);

static void BM_AssembleNominal(benchmark::State& state) {
  const MissionConfig cfg;
  const MissionDesign d = published_design(cfg.moon);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(d, DivertScenario{"N", 0.0, 0.0}, cfg));
}
BENCHMARK(BM_AssembleNominal)->Unit(benchmark::kMillisecond);

static void BM_FitnessWarm(benchmark::State& state) {
  const MissionConfig cfg;
  const MissionDesign d = published_design(cfg.moon);
  const FitnessBreakdown seed = evaluate_design(d, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_design(d, cfg, seed.braking_law));
}
BENCHMARK(BM_FitnessWarm)->Unit(benchmark::kMillisecond);

static void BM_FlatPeg(benchmark::State& state) {
  const FlatPegProblem p = flat_peg_demo();
  for (auto _ : state) benchmark::DoNotOptimize(solve_flat_peg(p));
}
BENCHMARK(BM_FlatPeg)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
