#include <benchmark/benchmark.h>

#include <random>

#include "wxbits/analytics.hpp"

namespace {

using namespace wxbits;

void BM_Decompose(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ForecastRecord> records(static_cast<std::size_t>(state.range(0)));
  for (auto& r : records) {
    r.f = static_cast<double>(1 + rng() % 99) / 100.0;
    r.observed = u(rng) < r.f;
  }
  for (auto _ : state) benchmark::DoNotOptimize(decompose(records));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Decompose)->Arg(1000)->Arg(100000);

}  // namespace
