#include <benchmark/benchmark.h>

#include "capquad/cubature.hpp"

namespace {

using namespace capquad;

// Node generation stays outside the timed loop.
void BM_SolveWeights(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NodeSet nodes = maximal_node_set(Cap(SpherePoint::pole(2), 1.0), n, 0.25, 42);
  for (auto _ : state) {
    SolveResult r = solve_weights(nodes, n);
    benchmark::DoNotOptimize(r);
  }
  state.counters["nodes"] = static_cast<double>(nodes.points.size());
}
BENCHMARK(BM_SolveWeights)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SolveCollar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NodeSet nodes = maximal_node_set(Collar(SpherePoint::pole(2), 0.5, 1.0), n, 0.25, 42);
  for (auto _ : state) {
    SolveResult r = solve_weights(nodes, n);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SolveCollar)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
