#include <benchmark/benchmark.h>

#include <cmath>

#include "gfbm/kernel.hpp"
#include "gfbm/kernels.hpp"
#include "gfbm/spectral.hpp"

using namespace gfbm;

namespace {

ProjectionInput projection_input(int n_modes) {
  ProjectionInput in;
  in.symbol = [](double u) { return u * u * std::exp(-u * u); };
  in.cutoff = hermite_cutoff(n_modes);
  in.n_modes = n_modes;
  for (int j = 0; j <= 100; ++j) in.times.push_back(j / 100.0);
  return in;
}

template <ProjectionTable (*Projection)(const ProjectionInput&)>
void BM_HermiteProjection(benchmark::State& state) {
  const ProjectionInput in = projection_input(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Projection(in));
}

template <std::vector<double> (*Synthesis)(const SynthesisInput&)>
void BM_SynthesizePaths(benchmark::State& state) {
  const int n_modes = 200;
  const std::size_t n_times = 101;
  std::vector<double> coefficients(n_modes * n_times);
  for (std::size_t i = 0; i < coefficients.size(); ++i) coefficients[i] = std::sin(0.37 * static_cast<double>(i));
  SynthesisInput in;
  in.coefficients = &coefficients;
  in.n_modes = n_modes;
  in.n_times = n_times;
  in.n_paths = static_cast<std::size_t>(state.range(0));
  in.seed = 42;
  for (auto _ : state) benchmark::DoNotOptimize(Synthesis(in));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <std::vector<double> (*Table)(const PairFunction&, const std::vector<double>&)>
void BM_KernelTable(benchmark::State& state) {
  const SpectralDensity m = make_fbm_density(0.75);
  const PairFunction k = [&m](double t, double s) { return kernel_eval(m, t, s).value; };
  std::vector<double> x;
  for (int i = 1; i <= state.range(0); ++i) x.push_back(2.0 * i / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Table(k, x));
}

}  // namespace

BENCHMARK(BM_HermiteProjection<serial::hermite_projection>)->Name("hermite_projection/serial")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HermiteProjection<omp::hermite_projection>)->Name("hermite_projection/omp")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SynthesizePaths<serial::synthesize_paths>)->Name("synthesize_paths/serial")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SynthesizePaths<omp::synthesize_paths>)->Name("synthesize_paths/omp")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelTable<serial::kernel_table>)->Name("kernel_table/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelTable<omp::kernel_table>)->Name("kernel_table/omp")->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
