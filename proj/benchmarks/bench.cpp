#include <benchmark/benchmark.h>

#include "dirac/clifford.hpp"
#include "dirac/fields.hpp"
#include "dirac/grid.hpp"
#include "dirac/radial.hpp"

using namespace dirac;

static void BM_BuildDiracRep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_dirac_rep(d));
}
BENCHMARK(BM_BuildDiracRep)->Arg(3)->Arg(5)->Arg(7)->Arg(9);

static void BM_RadialAssemble(benchmark::State& state) {
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(p));
}
BENCHMARK(BM_RadialAssemble)->Arg(1024)->Arg(4096);

static void BM_RadialSolveWindow(benchmark::State& state) {
  RadialProblem p;
  p.nu = -0.5;
  p.m = 1.0;
  p.n = static_cast<int>(state.range(0));
  p.r_max = 200.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, -0.999, 0.999));
}
BENCHMARK(BM_RadialSolveWindow)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_StencilDiff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const BoxGrid g(8.0, n);
  Eigen::VectorXcd u = Eigen::VectorXcd::Ones(1);
  const Field f = sample_envelope(TestSpinor::gaussian(u, {0.2, 0.1, -0.3}, 1.0), g);
  for (auto _ : state) benchmark::DoNotOptimize(diff(g, f, 0, order));
}
BENCHMARK(BM_StencilDiff)->Args({64, 2})->Args({64, 8})->Args({128, 8})
    ->Unit(benchmark::kMillisecond);

static void BM_SupWeights(benchmark::State& state) {
  const DiracRep rep = build_dirac_rep(3);
  const PotentialSpec spec = PotentialSpec::matrix_coulomb(3, -0.5, 0.1, 0.05);
  const MagneticSpec az = MagneticSpec::azimuthal(RadialProfile::power_law(0.2, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(sup_weights(spec, az, rep));
}
BENCHMARK(BM_SupWeights);

BENCHMARK_MAIN();
