#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "capquad/geometry.hpp"
#include "capquad/point_sets.hpp"
#include "capquad/poly_space.hpp"
#include "capquad/rho_ball.hpp"

namespace {

using namespace capquad;

void BM_GreedyMaximalSet(benchmark::State& state) {
  const Cap cap(SpherePoint::pole(2), 1.0);
  const int n = static_cast<int>(state.range(0));
  std::size_t count = 0;
  for (auto _ : state) {
    const NodeSet nodes = maximal_node_set(cap, n, 0.5, 42);
    count = nodes.points.size();
    benchmark::DoNotOptimize(nodes.points.data());
  }
  state.counters["nodes"] = static_cast<double>(count);
  state.SetComplexityN(static_cast<benchmark::IterationCount>(count));
}
BENCHMARK(BM_GreedyMaximalSet)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond)->Complexity();

void BM_EvalBasis(benchmark::State& state) {
  const PolySpace space(2, static_cast<int>(state.range(0)));
  const SpherePoint x(0.3, -0.4, std::sqrt(0.75));
  std::vector<double> out(dim(space));
  for (auto _ : state) {
    eval_basis_into(space, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}
BENCHMARK(BM_EvalBasis)->RangeMultiplier(2)->Range(8, 128);

void BM_RhoBallVolume(benchmark::State& state) {
  const Cap cap(SpherePoint::pole(2), 0.5);
  const RhoBall ball(cap, SpherePoint(0.2, 0.1, std::sqrt(0.95)), 0.3);
  const int resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rho_ball_volume(ball, resolution));
}
BENCHMARK(BM_RhoBallVolume)->Arg(32)->Arg(64)->Arg(128);

}  // namespace
