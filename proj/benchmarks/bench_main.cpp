#include <random>

#include <benchmark/benchmark.h>

#include "hjlab/atlas.hpp"
#include "hjlab/checks.hpp"
#include "hjlab/variational.hpp"

using namespace hjlab;

namespace {

Jet random_jet(JetOrder o, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet j(o, {0.2, 0.1});
  for (int a = 0; a <= o.z; ++a)
    for (int b = 0; b <= o.zbar; ++b)
      for (int c = 0; c <= o.t; ++c) j.coeff(a, b, c) = {u(rng), u(rng)};
  j.coeff(0, 0, 0) = 2.0;
  return j;
}

void BM_JetMul(benchmark::State& st) {
  const JetOrder o{static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 1};
  const Jet a = random_jet(o, 1), b = random_jet(o, 2);
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMul)->Args({1, 1})->Args({3, 1})->Args({6, 1})->Args({5, 5});

void BM_Reciprocal(benchmark::State& st) {
  const JetOrder o{static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 1};
  const Jet a = random_jet(o, 3);
  for (auto _ : st) benchmark::DoNotOptimize(reciprocal(a));
}
BENCHMARK(BM_Reciprocal)->Args({1, 1})->Args({6, 1})->Args({5, 5});

void BM_Compose(benchmark::State& st) {
  const Jet a = random_jet({4, 4, 1}, 4);
  const std::vector<cplx> outer{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125};
  for (auto _ : st) benchmark::DoNotOptimize(jet_compose(outer, a));
}
BENCHMARK(BM_Compose);

void BM_IteratedD(benchmark::State& st) {
  const AtlasCase c = make_case(st.range(0) == 0 ? "veronese-s4" : "veronese-sequence-cp2");
  const MapGerm p = evaluate(c.map, Chart::kNorth, {0.3, 0.2}, {6, 1, 0});
  for (auto _ : st) benchmark::DoNotOptimize(iterated_D(p, 5));
}
BENCHMARK(BM_IteratedD)->Arg(0)->Arg(1);

void BM_TensionGrid(benchmark::State& st) {
  const AtlasCase c = make_case("veronese-sequence-cp2");
  const QuadratureGrid g = make_sphere_grid(32, 64);
  for (auto _ : st) {
    double m = 0.0;
    for (const GridNode& n : g.nodes) m = std::max(m, max_abs_value(tension_complex(evaluate(c.map, n.chart, n.u, {1, 1, 0})).comps));
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_TensionGrid)->Unit(benchmark::kMillisecond);

void BM_Energy(benchmark::State& st) {
  const AtlasCase c = make_case("rational-d3-cp2");
  const QuadratureGrid g = make_sphere_grid(32, 64);
  const Executor ex(1);
  for (auto _ : st) benchmark::DoNotOptimize(energy(c.map, g, ex).energy);
}
BENCHMARK(BM_Energy)->Unit(benchmark::kMillisecond);

void BM_Check(benchmark::State& st) {
  Scenario s;
  s.cases = {"veronese-s4"};
  s.checks = {check_names()[static_cast<std::size_t>(st.range(0))]};
  st.SetLabel(s.checks[0]);
  const Executor ex(1);
  for (auto _ : st) benchmark::DoNotOptimize(run_scenario(s, ex).results.size());
}
BENCHMARK(BM_Check)->DenseRange(0, 13)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
