// Parallel tensor kernels against the serial enumeration oracle.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "terzatic/fuzz.hpp"
#include "terzatic/oracle.hpp"

namespace {

using namespace terzatic;

GeneralInstance<double> instance(std::size_t n) {
  const FuzzShape shape{.k = {3, 3}, .n = {n, n}};
  return gen_general<double>(shape, 1.0, 42, true);
}

const auto kFunction = FunctionModel<double>::power(3.5);

void BM_GeneralizedJensenParallel(benchmark::State& state) {
  const auto g = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generalized_jensen(kFunction, g, WeightFamily::p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_multi_indices(g.extents())));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_GeneralizedJensenSerial(benchmark::State& state) {
  const auto g = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_generalized_jensen(kFunction, g, WeightFamily::p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_multi_indices(g.extents())));
}

void BM_TensorBoundParallel(benchmark::State& state) {
  const auto g = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lemma5_rhs(kFunction, 0.5, g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_multi_indices(g.extents())));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_TensorBoundSerial(benchmark::State& state) {
  const auto g = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_lemma5_rhs(kFunction, 0.5, g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count_multi_indices(g.extents())));
}

void BM_RatioExtremaFactored(benchmark::State& state) {
  const auto g = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ratio_extrema(g));
}

void BM_RatioExtremaEnumerated(benchmark::State& state) {
  const auto g = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_ratio_extrema(g, kDefaultEnumerationCap));
}

// n points per block, k = 3: 1000, 8000, 27000 and 64000 multi-indices.
BENCHMARK(BM_GeneralizedJensenParallel)->Arg(10)->Arg(20)->Arg(30)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GeneralizedJensenSerial)->Arg(10)->Arg(20)->Arg(30)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TensorBoundParallel)->Arg(10)->Arg(20)->Arg(30)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TensorBoundSerial)->Arg(10)->Arg(20)->Arg(30)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RatioExtremaFactored)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RatioExtremaEnumerated)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
