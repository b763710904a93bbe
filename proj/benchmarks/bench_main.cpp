#include <benchmark/benchmark.h>

#include "semical/comass.hpp"
#include "semical/demo.hpp"
#include "semical/field.hpp"
#include "semical/rng.hpp"

using namespace semical;

namespace {

Matrix gaussian(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

MetricTensor metric(Rng& rng, int n) {
  const Matrix m = gaussian(rng, n, n);
  return MetricTensor(m.transpose() * m / n + 0.5 * Matrix::Identity(n, n));
}

void BM_ConstructPoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const MetricTensor g = metric(rng, n);
  const TwoForm w = TwoForm(gaussian(rng, n, n));
  for (auto _ : state) benchmark::DoNotOptimize(construct_point(g, w));
}
BENCHMARK(BM_ConstructPoint)->Arg(4)->Arg(8)->Arg(16);

void BM_Pfaffian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const Matrix a = TwoForm(gaussian(rng, n, n)).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(pfaffian(a));
}
BENCHMARK(BM_Pfaffian)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_ComassBruteforce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  Rng rng(3);
  const MetricTensor g = metric(rng, n);
  const PowerForm form(TwoForm(gaussian(rng, n, n)), p);
  for (auto _ : state) benchmark::DoNotOptimize(comass_bruteforce(g, form, {10000, 4, 0}));
}
BENCHMARK(BM_ComassBruteforce)->Args({4, 1})->Args({8, 1})->Args({8, 2})->Unit(benchmark::kMillisecond);

void BM_ProcessField(benchmark::State& state) {
  const FieldGrid grid = parse_calfield(demo_calfield("standard"));
  for (auto _ : state) benchmark::DoNotOptimize(process_field(grid));
}
BENCHMARK(BM_ProcessField);

}  // namespace
BENCHMARK_MAIN();
