// Serial reference vs OpenMP kernels on the same inputs.
#include <benchmark/benchmark.h>

#include <vector>

#include "carnot/classify.hpp"
#include "carnot/cone.hpp"
#include "carnot/monotone.hpp"
#include "carnot/multiexp.hpp"
#include "carnot/random.hpp"

using namespace carnot;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_MonotoneCheck(benchmark::State& state) {
  const GroupSpec g = hr_product();
  const SetOracle e = oracles::halfspace(g, (Vector(4) << 0.3, -0.5, 0.7, 0.2).finished(), 0.1);
  ConvexityParams p;
  p.n_pairs = 20000;
  p.box = Box::cube(4, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(monotone_check(g, e, p, exec_of(state)).pairs_tested);
  label(state);
}

void BM_ConeTest(benchmark::State& state) {
  const GroupSpec g = heisenberg(1);
  const SetOracle e = oracles::halfspace(g, (Vector(3) << 1, 0, -1).finished(), 0.0);
  ConeParams p;
  p.samples = 512;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cone_test(g, e, Point::identity(g), Vector::Unit(2, 0), 0.25, p, exec_of(state)).violations);
  }
  label(state);
}

void BM_GammaBatch(benchmark::State& state) {
  const GroupSpec g = free_step2(4);
  const GammaSolver solver(g);
  const std::size_t n = 20000;
  std::vector<Point> targets;
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(1, i);
    targets.emplace_back(rng.normal_vector(g.m()), rng.normal_vector(g.ell()));
  }
  std::vector<double> res(n);
  const Vector xi = Vector::Unit(4, 0);
  for (auto _ : state) {
    for_each_index(n, exec_of(state), [&](std::size_t i) { res[i] = solver.solve(xi, targets[i]).residual; });
    benchmark::DoNotOptimize(res.data());
  }
  label(state);
}

void BM_ClassifyGrid(benchmark::State& state) {
  const GroupSpec g = hr_product();
  const SetOracle e = oracles::halfspace(g, (Vector(4) << -2, 1, 1, -3).finished(), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_boundary(g, e, Point::identity(g), {}, exec_of(state)).residual);
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_MonotoneCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConeTest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GammaBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClassifyGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
