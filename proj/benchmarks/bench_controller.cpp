#include <benchmark/benchmark.h>

#include "dto/controller.hpp"
#include "dto/penalty.hpp"
#include "dto/sim.hpp"

namespace {

using namespace dto;

std::vector<Vector> start_states() {
  return {Vector::Constant(1, -2.0), Vector::Constant(1, -1.0), Vector::Constant(1, 1.0),
          Vector::Constant(1, 3.0)};
}

void BM_PenalizedDerivatives(benchmark::State& state) {
  const ProblemInstance inst = scenario_a();
  const Vector x = Vector::Constant(1, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(penalized_derivatives(inst.agent(0), x, 1.5));
  }
}
BENCHMARK(BM_PenalizedDerivatives);

void BM_NominalControl(benchmark::State& state) {
  const ProblemInstance inst = scenario_a();
  const std::vector<Vector> x = start_states();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        nominal_control(1, x, 0.7, inst.graph(), inst.agent(1), experiment_gains().beta));
  }
}
BENCHMARK(BM_NominalControl);

void BM_Step(benchmark::State& state) {
  const SimConfig cfg(scenario_a(), experiment_gains());
  const std::vector<Vector> x = start_states();
  const std::vector<ControllerState> z(4, ControllerState::zero(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(x, z, 0.0, 1e-4, cfg));
  }
}
BENCHMARK(BM_Step);

void BM_OptimalTrajectory(benchmark::State& state) {
  const ProblemInstance inst = scenario_a();
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_trajectory(inst, 2.0));
  }
}
BENCHMARK(BM_OptimalTrajectory);

void BM_RunOneSecond(benchmark::State& state) {
  SimConfig cfg(scenario_a(), experiment_gains());
  cfg.t_end = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
}
BENCHMARK(BM_RunOneSecond)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
