#include <benchmark/benchmark.h>

#include <random>

#include "wxbits/scoring.hpp"

namespace {

using namespace wxbits;

const Clamp kBins = Clamp::for_members(25, kBinArity);

std::vector<CreditAllocation> random_allocations(std::size_t n) {
  std::mt19937_64 rng(1);
  std::vector<CreditAllocation> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> credits(kBinArity, 0);
    for (int c = 0; c < 100; ++c) ++credits[rng() % kBinArity];
    out.emplace_back(credits);
  }
  return out;
}

void BM_CreditsToPmf(benchmark::State& state) {
  const auto allocs = random_allocations(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(credits_to_pmf(allocs[i++ & 1023], kBins));
  }
}
BENCHMARK(BM_CreditsToPmf);

void BM_RankedInfoGain(benchmark::State& state) {
  const auto allocs = random_allocations(1024);
  std::vector<Pmf> pmfs;
  for (const auto& a : allocs) pmfs.push_back(credits_to_pmf(a, kBins));
  const Pmf baseline(std::vector<double>(kBinArity, 0.1), kBins);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& f = pmfs[i & 1023];
    benchmark::DoNotOptimize(ranked_info_gain(f, baseline, i % kBinArity));
    ++i;
  }
}
BENCHMARK(BM_RankedInfoGain);

void BM_InfoGain(benchmark::State& state) {
  double f = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(info_gain(f, 0.5));
    f = f > 0.9 ? 0.1 : f + 1e-3;
  }
}
BENCHMARK(BM_InfoGain);

}  // namespace
