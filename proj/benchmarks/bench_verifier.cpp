#include <benchmark/benchmark.h>

#include <map>
#include <stdexcept>

#include "capquad/cubature.hpp"
#include "capquad/verifier.hpp"

namespace {

using namespace capquad;

const CubatureRule& rule_at(int n) {
  static std::map<int, CubatureRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    SolveResult r = build_cubature(Cap(SpherePoint::pole(2), 1.0), n, 0.25, 42);
    if (!std::holds_alternative<CubatureRule>(r)) throw std::runtime_error("no rule");
    it = cache.emplace(n, std::get<CubatureRule>(std::move(r))).first;
  }
  return it->second;
}

void BM_MzBracket(benchmark::State& state) {
  const CubatureRule& rule = rule_at(static_cast<int>(state.range(0)));
  const double p = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mz_bracket(rule, p, 10, 7));
}
BENCHMARK(BM_MzBracket)->Args({8, 2})->Args({8, 1})->Args({16, 2})->Unit(benchmark::kMillisecond);

void BM_BernsteinSup(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bernstein_sup_d1(0.5, n, DoublingWeight::constant()));
  }
}
BENCHMARK(BM_BernsteinSup)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
