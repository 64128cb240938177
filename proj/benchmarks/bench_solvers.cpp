#include <benchmark/benchmark.h>

#include "deltanls/approx1d.hpp"
#include "deltanls/charge.hpp"
#include "deltanls/field.hpp"
#include "deltanls/specfun.hpp"

namespace {

using namespace deltanls;

void BM_VolterraKernel(benchmark::State& state) {
  double t = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(volterra_kernel(t));
    t = t < 100.0 ? t * 1.01 : 0.37;
  }
}
BENCHMARK(BM_VolterraKernel);

// O(N^2) in the number of steps
void BM_NonlinearCharge(benchmark::State& state) {
  const Dim d = dim_from_int(static_cast<int>(state.range(0)));
  const std::size_t steps = static_cast<std::size_t>(state.range(1));
  const DeltaModel model = DeltaModel::nonlinear(d, -1.0, 1.0);
  const Gaussian g{0.5, 1.0};
  const double h = 1.0 / static_cast<double>(steps);
  for (auto _ : state) benchmark::DoNotOptimize(solve_nonlinear(model, g, 1.0, h).q.back());
}
BENCHMARK(BM_NonlinearCharge)->ArgsProduct({{1, 2, 3}, {250, 500, 1000}})->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const DeltaModel model = DeltaModel::nonlinear(Dim::One, -1.0, 1.0);
  const Gaussian g{0.5, 1.0};
  const auto traj = solve_nonlinear(model, g, 0.5, 1e-3);
  const SpatialGrid grid = gauss_grid(Dim::One, 20.0, 32, 12);
  ReconstructOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(traj, g, traj.q.size() - 1, grid, opt).values.data());
}
BENCHMARK(BM_Reconstruct)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SplitStep(benchmark::State& state) {
  const PeriodicGrid grid{20.0, static_cast<std::size_t>(state.range(0))};
  SplitStepOptions opt;
  opt.dt = 1e-4;
  opt.frames = 1;
  const auto V = PotentialProfile::gaussian(-1.0);
  for (auto _ : state) benchmark::DoNotOptimize(splitstep_solve(V, 0.1, 1.0, Gaussian{}, 0.01, grid, opt).size());
}
BENCHMARK(BM_SplitStep)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
