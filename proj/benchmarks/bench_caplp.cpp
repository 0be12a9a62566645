#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <numbers>

#include "caplp/audit.hpp"
#include "caplp/rotsym.hpp"
#include "caplp/samples.hpp"
#include "caplp/solver.hpp"

using namespace caplp;

namespace {

constexpr double kTheta = std::numbers::pi / 3;

CapField test_field(int nb) {
  return CapField::sample(make_grid(nb, 2 * nb, kTheta), random_convex_test_function(kTheta, 1, 0.3));
}

}  // namespace

static void BM_TauSharp(benchmark::State& state) {
  const CapField s = test_field(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tau_sharp(s));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.grid().size()));
}
BENCHMARK(BM_TauSharp)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_Linearize(benchmark::State& state) {
  const CapField s = test_field(static_cast<int>(state.range(0)));
  const std::vector<double> rhs(s.grid().size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(linearize(s, 1.5, rhs, 2));
}
BENCHMARK(BM_Linearize)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SolveRotsym(benchmark::State& state) {
  const CapParams P{2, 1, 1.5, std::numbers::pi / 4};
  const RotsymExpr phi{{1.0, 0.3}};
  for (auto _ : state) benchmark::DoNotOptimize(solve_rotsym(phi, static_cast<int>(state.range(0)), P));
}
BENCHMARK(BM_SolveRotsym)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_SolvePath(benchmark::State& state) {
  const CapParams P{2, 1, 1.5, kTheta};
  const int nb = static_cast<int>(state.range(0));
  const GridPtr g = make_grid(nb, 2 * nb, kTheta);
  const CapField phi = CapField::sample(
      g, [&](double b, double) { return 2 * std::sqrt(1.3) / std::sqrt(ell(kTheta, b)); }, true);
  for (auto _ : state) benchmark::DoNotOptimize(solve_path(phi, P));
}
BENCHMARK(BM_SolvePath)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_MixedVolume(benchmark::State& state) {
  const CapQuadrature q{kTheta, 2, 96};
  const CapSamples a = samples_from_function(random_convex_test_function(kTheta, 2, 0.3), q);
  const CapSamples b = samples_from_function(random_convex_test_function(kTheta, 3, 0.3), q);
  const CapSamples c = samples_from_function(random_convex_test_function(kTheta, 4, 0.3), q);
  const std::array<const CapSamples*, 3> args{&a, &b, &c};
  for (auto _ : state) benchmark::DoNotOptimize(mixed_volume(args));
}
BENCHMARK(BM_MixedVolume)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
