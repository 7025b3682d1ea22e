#include <benchmark/benchmark.h>

#include <random>

#include "wxbits/baseline.hpp"
#include "wxbits/text.hpp"

namespace {

using namespace wxbits;

// A full superensemble run: every variable, `members` members each.
std::vector<SuperensembleSample> run(int members) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto t = parse_utc_time("2024-03-01T12:00:00Z");
  std::vector<SuperensembleSample> out;
  for (auto kind : kAllVariables) {
    const auto spec = VariableSpec::of(kind);
    const bool precip = kind == VariableKind::PrecipAccum;
    for (int m = 0; m < members; ++m) {
      double v = (precip ? 0.2 : 60.0) + (precip ? 0.2 : 8.0) * g(rng);
      if (spec.non_negative) v = std::max(0.0, v);
      v = std::round(v * spec.steps_per_unit) / spec.steps_per_unit;
      out.push_back({"SREF", m, spec, v, false, t});
    }
  }
  return out;
}

void BM_BuildBaselineSet(benchmark::State& state) {
  const auto samples = run(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_baseline_set(samples));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(samples.size()));
}
BENCHMARK(BM_BuildBaselineSet)->Arg(25)->Arg(30)->Arg(200);

void BM_Percentile(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = static_cast<double>(rng() % 1000);
  for (auto _ : state) benchmark::DoNotOptimize(percentile(v, 0.9));
}
BENCHMARK(BM_Percentile)->Arg(30)->Arg(1000);

}  // namespace
