#include <benchmark/benchmark.h>

#include <cmath>

#include "fdlab/cauchy.hpp"
#include "fdlab/mittag_leffler.hpp"
#include "fdlab/profiles.hpp"

using namespace fdlab;

namespace {

// One evaluation per regime; the argument picks |z|.
void BM_MittagLeffler(benchmark::State& state) {
  const MittagLeffler f({0.6, 1.0});
  const cplx z = std::polar(static_cast<double>(state.range(0)), 0.8 * 3.141592653589793);
  for (auto _ : state) benchmark::DoNotOptimize(f.value(z));
}
BENCHMARK(BM_MittagLeffler)->Arg(2)->Arg(20)->Arg(200);

void BM_ForwardInverse(benchmark::State& state) {
  const auto g = make_grid(1, static_cast<int>(state.range(0)), 20.0);
  const Field a = gaussian_datum(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(to_physical(to_spectral(a)));
}
BENCHMARK(BM_ForwardInverse)->Arg(512)->Arg(4096)->Arg(32768);

void BM_ContourConstantPotential(benchmark::State& state) {
  const auto g = make_grid(1, static_cast<int>(state.range(0)), 20.0);
  const CauchyProblem pr({0.5, 0.5, 0.0}, gaussian_datum(g, 1.0), constant_potential(g, -1.0));
  for (auto _ : state) benchmark::DoNotOptimize(contour_invert(pr, 100.0));
}
BENCHMARK(BM_ContourConstantPotential)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ContourVariablePotential(benchmark::State& state) {
  const auto g = make_grid(1, 128, 10.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  for (auto _ : state) benchmark::DoNotOptimize(contour_invert(pr, 1.0));
}
BENCHMARK(BM_ContourVariablePotential)->Unit(benchmark::kMillisecond);

void BM_Picard(benchmark::State& state) {
  const auto g = make_grid(1, 128, 10.0);
  const CauchyProblem pr({0.5, 1.5, 0.0}, gaussian_datum(g, 1.0), cosine_potential(g, -1.0, -0.5));
  PicardOptions opt;
  opt.max_iterates = 400;
  for (auto _ : state) benchmark::DoNotOptimize(picard_solve(pr, SectorPoint(cplx(1.0, 0.0)), 1e-10, opt));
}
BENCHMARK(BM_Picard)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
