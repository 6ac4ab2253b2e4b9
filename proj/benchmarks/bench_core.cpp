// Timings for the hot paths on the reference grid.

#include <benchmark/benchmark.h>

#include "hsc/closed_forms.hpp"
#include "hsc/energy.hpp"
#include "hsc/nehari.hpp"
#include "hsc/radial_grid.hpp"
#include "hsc/solvers.hpp"

using namespace hsc;

namespace {

ProblemParams coupled_params() {
  ProblemParams p;
  p.N = 4;
  p.s = 0.5;
  p.lambda1 = 0.3;
  p.lambda2 = 0.1;
  p.alpha = 1.6;
  p.beta = 1.4;
  p.nu = 0.7;
  return p;
}

StatePair extremal_pair(const GridPtr& g, const ProblemParams& p) {
  return {exact_solution(g, p.lambda1, p.s), exact_solution(g, p.lambda2, p.s, 3.0)};
}

GridPtr grid_of(const benchmark::State& state) {
  return build_grid(4, 1e-6, 1e6, static_cast<std::size_t>(state.range(0)));
}

void BM_Energy(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  const EnergyModel model(g, coupled_params());
  const StatePair z = extremal_pair(g, model.params());
  for (auto _ : state) benchmark::DoNotOptimize(model.total(z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Energy)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_Gradient(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  const EnergyModel model(g, coupled_params());
  const StatePair z = extremal_pair(g, model.params());
  for (auto _ : state) benchmark::DoNotOptimize(model.gradient(z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_SobolevGradient(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  const EnergyModel model(g, coupled_params());
  const StatePair z = extremal_pair(g, model.params());
  for (auto _ : state) benchmark::DoNotOptimize(model.sobolev_gradient(z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SobolevGradient)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_LambdaSolve(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  const LambdaOperator op(g, 0.3);
  const std::vector<double> rhs(g->size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(op.solve(rhs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LambdaSolve)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_Projection(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  const EnergyModel model(g, coupled_params());
  const StatePair z = extremal_pair(g, model.params()).scaled(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(project(model, z).t_star);
}
BENCHMARK(BM_Projection)->Arg(4096);

void BM_DecoupledGroundState(benchmark::State& state) {
  ProblemParams p = coupled_params();
  p.nu = 0.0;
  const GridPtr g = reference_grid(4);
  const RadialFunction z = exact_solution(g, p.lambda1, p.s, 2.0);
  const StatePair init{z, RadialFunction(g)};
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(p, init).energy);
}
BENCHMARK(BM_DecoupledGroundState)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
