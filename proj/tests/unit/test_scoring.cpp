#include "wxbits/scoring.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "support.hpp"

namespace wxbits {
namespace {

const auto kTemp = VariableSpec::of(VariableKind::TempMax);
const auto kWind = VariableSpec::of(VariableKind::WindMax);
const auto kPrecip = VariableSpec::of(VariableKind::PrecipAccum);
const Clamp kPair30 = Clamp::for_members(30, kOverUnderArity);
const Clamp kBins30 = Clamp::for_members(30, kBinArity);

Observation obs(const VariableSpec& spec, double value, bool trace = false) {
  return Observation{spec, value, trace, "2024-03-02"};
}

Pmf uniform_bins() { return Pmf(std::vector<double>(kBinArity, 0.1), kBins30); }

TEST(Brier, Examples) {
  EXPECT_DOUBLE_EQ(brier(1.0, true), 0.0);
  EXPECT_NEAR(brier(0.7, true), 0.09, 1e-15);
  EXPECT_NEAR(brier(0.7, false), 0.49, 1e-15);
  EXPECT_WX_ERROR(brier(1.2, true), ErrorCode::DomainError);
}

TEST(Ignorance, Examples) {
  EXPECT_EQ(ignorance(1.0), 0.0);
  EXPECT_EQ(ignorance(0.5), 1.0);
  EXPECT_EQ(ignorance(0.25), 2.0);
  EXPECT_WX_ERROR(ignorance(0.0), ErrorCode::DomainError);
}

TEST(InfoGain, CoinExamples) {
  EXPECT_NEAR(info_gain(0.8, 0.5), 0.6781, 1e-4);
  EXPECT_NEAR(info_gain(0.2, 0.5), -1.3219, 1e-4);
  EXPECT_NEAR(info_gain(0.8, 0.5), oracle::log2_of(1.6), 1e-15);
  EXPECT_EQ(info_gain(0.37, 0.37), 0.0);
}

TEST(InfoGain, ClampedFormRejectsOutOfBounds) {
  EXPECT_WX_ERROR(info_gain(0.001, 0.5, kPair30), ErrorCode::DomainError);
  EXPECT_WX_ERROR(info_gain(0.5, 0.999, kPair30), ErrorCode::DomainError);
  EXPECT_NO_THROW(info_gain(1.0 / 120.0, 119.0 / 120.0, kPair30));
  EXPECT_WX_ERROR(info_gain(0.0, 0.5), ErrorCode::DomainError);
}

TEST(InfoGain, IgnoranceDifferenceIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(kPair30.p_min, kPair30.p_max);
  for (int i = 0; i < 10000; ++i) {
    const double f = u(rng);
    const double b = u(rng);
    EXPECT_NEAR(info_gain(f, b, kPair30), ignorance(b) - ignorance(f), 1e-12);
  }
}

TEST(ContingencyCell, Examples) {
  EXPECT_EQ(contingency_cell(0.3, 0.3, true), 0.0);
  EXPECT_EQ(contingency_cell(0.3, 0.3, false), 0.0);
  EXPECT_NEAR(contingency_cell(0.8, 0.5, true), 0.678, 1e-3);
  EXPECT_NEAR(contingency_cell(0.05, 0.1, false), 1.0, 1e-12);
}

TEST(ContingencyCell, ObservedAndUnobservedCellsCancel) {
  for (int i = 1; i < 100; ++i) {
    const double f = i / 100.0;
    EXPECT_EQ(contingency_cell(f, 0.5, true), -contingency_cell(f, 0.5, false));
  }
}

TEST(OverUnder, CoinExampleOnTemperature) {
  const auto s = score_over_under(CreditAllocation({80, 20}), 72.0, 0.5,
                                  obs(kTemp, 75.0), kPair30);
  EXPECT_FALSE(s.pushed);
  EXPECT_EQ(s.verified_side, kOver);
  EXPECT_DOUBLE_EQ(s.f, 0.8);
  EXPECT_NEAR(s.ig_bits, 0.678, 1e-3);

  const auto under = score_over_under(CreditAllocation({80, 20}), 72.0, 0.5,
                                      obs(kTemp, 60.0), kPair30);
  EXPECT_EQ(under.verified_side, kUnder);
  EXPECT_NEAR(under.ig_bits, -1.3219, 1e-4);
}

TEST(OverUnder, EvenSplitAgainstEvenBaselineIsZero) {
  const auto s = score_over_under(CreditAllocation({50, 50}), 72.0, 0.5,
                                  obs(kTemp, 90.0), kPair30);
  EXPECT_EQ(s.ig_bits, 0.0);
}

TEST(OverUnder, ObservationOnThresholdPushes) {
  const auto s = score_over_under(CreditAllocation({100, 0}), 72.0, 0.5,
                                  obs(kTemp, 72.0), kPair30);
  EXPECT_TRUE(s.pushed);
  EXPECT_EQ(s.ig_bits, 0.0);
  EXPECT_FALSE(s.verified_side.has_value());
  // Quantized to the reporting resolution before comparing.
  EXPECT_TRUE(score_over_under(CreditAllocation({100, 0}), 72.0, 0.5,
                               obs(kTemp, 71.6), kPair30)
                  .pushed);
  EXPECT_FALSE(score_over_under(CreditAllocation({100, 0}), 72.0, 0.5,
                                obs(kTemp, 72.5), kPair30)
                   .pushed);
}

TEST(OverUnder, TraceCountsAsZero) {
  const auto s = score_over_under(CreditAllocation({30, 70}), 0.01, 0.4,
                                  obs(kPrecip, 0.0, true), kPair30);
  EXPECT_EQ(s.verified_side, kUnder);
  EXPECT_NEAR(s.ig_bits, oracle::log2_of(0.7 / 0.6), 1e-12);
}

TEST(OverUnder, AllInUsesClampedProbability) {
  const auto s = score_over_under(CreditAllocation({0, 100}), 72.0, 0.5,
                                  obs(kTemp, 75.0), kPair30);
  EXPECT_NEAR(s.f, 1.0 / 120.0, 1e-15);
  EXPECT_NEAR(s.ig_bits, oracle::log2_of((1.0 / 120.0) / 0.5), 1e-12);
}

TEST(OverUnder, Errors) {
  EXPECT_WX_ERROR(score_over_under(CreditAllocation({50, 50}), 72.0, 0.0,
                                   obs(kTemp, 75.0), kPair30),
                  ErrorCode::DomainError);
  EXPECT_WX_ERROR(score_over_under(uniform_bins(), 72.0, uniform_bins(), obs(kTemp, 75.0)),
                  ErrorCode::ArityMismatch);
  EXPECT_WX_ERROR(score_over_under(CreditAllocation({50, 50}), 0.05, 0.5,
                                   obs(kPrecip, -0.01), kPair30),
                  ErrorCode::DomainError);
}

TEST(RankedInfoGain, BaselineAllocationScoresZeroInEveryBin) {
  const auto pmf = credits_to_pmf(CreditAllocation(std::vector<int>(kBinArity, 10)), kBins30);
  for (std::size_t obs_bin = 0; obs_bin < kBinArity; ++obs_bin) {
    const auto s = ranked_info_gain(pmf, uniform_bins(), obs_bin);
    for (double bits : s.per_bin_bits) EXPECT_EQ(bits, 0.0);
    EXPECT_EQ(s.total_bits, 0.0);
  }
}

TEST(RankedInfoGain, AllInCorrect) {
  const auto pmf = credits_to_pmf(CreditAllocation::all_in(kBinArity, 3), kBins30);
  const auto s = ranked_info_gain(pmf, uniform_bins(), 3);
  EXPECT_NEAR(s.total_bits, 35.474, 1e-3);
  EXPECT_NEAR(s.total_bits,
              oracle::rig({pmf.probs().begin(), pmf.probs().end()},
                          std::vector<double>(kBinArity, 0.1), 3),
              1e-12);
  EXPECT_EQ(s.observed_bin, 3u);
  EXPECT_GT(s.per_bin_bits[3], 0.0);
  EXPECT_GT(s.per_bin_bits[0], 0.0);
}

TEST(RankedInfoGain, AllInWrong) {
  const auto pmf = credits_to_pmf(CreditAllocation::all_in(kBinArity, 3), kBins30);
  const auto s = ranked_info_gain(pmf, uniform_bins(), 4);
  EXPECT_NEAR(s.total_bits,
              oracle::rig({pmf.probs().begin(), pmf.probs().end()},
                          std::vector<double>(kBinArity, 0.1), 4),
              1e-12);
  EXPECT_LT(s.per_bin_bits[3], 0.0);
}

TEST(RankedInfoGain, AllInCorrectIsTheMaximum) {
  const auto best = ranked_info_gain(
      credits_to_pmf(CreditAllocation::all_in(kBinArity, 0), kBins30), uniform_bins(), 0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const auto pmf = credits_to_pmf(
        CreditAllocation(testing::random_composition(rng, kBinArity)), kBins30);
    const auto obs_bin = static_cast<std::size_t>(rng() % kBinArity);
    EXPECT_LE(ranked_info_gain(pmf, uniform_bins(), obs_bin).total_bits,
              best.total_bits + 1e-9);
  }
}

TEST(RankedInfoGain, MatchesOracleOnRandomPmfs) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto f = credits_to_pmf(
        CreditAllocation(testing::random_composition(rng, kBinArity)), kBins30);
    const auto b = credits_to_pmf(
        CreditAllocation(testing::random_composition(rng, kBinArity)), kBins30);
    const auto k = static_cast<std::size_t>(rng() % kBinArity);
    EXPECT_NEAR(ranked_info_gain(f, b, k).total_bits,
                oracle::rig({f.probs().begin(), f.probs().end()},
                            {b.probs().begin(), b.probs().end()}, k),
                1e-9);
  }
}

TEST(RankedInfoGain, Errors) {
  const Pmf pair({0.5, 0.5}, kPair30);
  EXPECT_WX_ERROR(ranked_info_gain(pair, pair, 0), ErrorCode::ArityMismatch);
  EXPECT_WX_ERROR(ranked_info_gain(uniform_bins(), uniform_bins(), 10), ErrorCode::DomainError);
}

TEST(Legacy, Examples) {
  EXPECT_EQ(legacy_error_points(75, obs(kTemp, 72), kTemp).error_points, 3.0);
  EXPECT_EQ(legacy_error_points(18, obs(kWind, 22), kWind).error_points, 2.0);
  EXPECT_EQ(legacy_error_points(0.0, obs(kPrecip, 0.05), kPrecip).error_points, 2.0);
  EXPECT_EQ(legacy_error_points(0.0, obs(kPrecip, 0.15), kPrecip).error_points, 5.5);
  EXPECT_EQ(legacy_error_points(0.05, obs(kPrecip, 0.30), kPrecip).error_points, 7.5);
  EXPECT_EQ(legacy_error_points(0.0, obs(kPrecip, 0.0, true), kPrecip).error_points, 0.0);
}

TEST(Legacy, PrecipMatchesTierSumAndIsSymmetric) {
  for (int f = 0; f <= 120; f += 3) {
    for (int o = 0; o <= 120; o += 7) {
      const double expected = oracle::precip_points(f, o);
      const auto got = legacy_error_points(f / 100.0, obs(kPrecip, o / 100.0), kPrecip);
      EXPECT_NEAR(got.error_points, expected, 1e-12) << f << " vs " << o;
      EXPECT_EQ(got.error_points,
                legacy_error_points(o / 100.0, obs(kPrecip, f / 100.0), kPrecip).error_points);
    }
  }
}

TEST(Legacy, UnitMismatch) {
  EXPECT_WX_ERROR(legacy_error_points(10, obs(kWind, 10), kTemp), ErrorCode::UnitMismatch);
}

TEST(Aggregates, PushesAreExcludedFromMeans) {
  std::vector<BinaryEventScore> events(3);
  events[0].ig_bits = 1.0;
  events[1].ig_bits = -1.0;
  events[2].pushed = true;
  EXPECT_EQ(total_bits(events), 0.0);
  ASSERT_TRUE(mean_bits(events).has_value());
  EXPECT_EQ(*mean_bits(events), 0.0);
  events.erase(events.begin(), events.begin() + 2);
  EXPECT_FALSE(mean_bits(events).has_value());
}

TEST(Aggregates, TotalIsSumOfEventsAcrossVariables) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> credit(0, 100);
  std::uniform_real_distribution<double> base(0.05, 0.95);
  std::vector<BinaryEventScore> events;
  double direct = 0.0;
  for (int i = 0; i < 400; ++i) {
    const auto& spec = i % 3 == 0 ? kTemp : i % 3 == 1 ? kWind : kPrecip;
    const int c = credit(rng);
    const double threshold = spec.kind == VariableKind::PrecipAccum ? 0.1 : 20.0;
    const double value = spec.kind == VariableKind::PrecipAccum ? (rng() % 30) / 100.0
                                                                 : static_cast<double>(rng() % 40);
    const auto s = score_over_under(CreditAllocation({c, 100 - c}), threshold, base(rng),
                                    obs(spec, value), kPair30);
    events.push_back(s);
    direct += s.ig_bits;
  }
  EXPECT_NEAR(total_bits(events), direct, 1e-12);
}

TEST(TaylorRelation, LogLossNearCertainty) {
  for (int i = 0; i < 100; ++i) {
    const double f = 0.9 + 0.1 * i / 99.0;
    const double d = 1.0 - f;
    EXPECT_LE(std::abs(std::log(1.0 / f) - (d + d * d / 2.0)), d * d * d + 1e-15) << f;
  }
}

// Expected over/under information gain of issuing credits c when the event
// occurs with probability p.
double expected_pair_ig(int c, double p, double b_over) {
  const auto pmf = credits_to_pmf(CreditAllocation({c, 100 - c}), kPair30);
  return oracle::expected_ig(p, pmf[kOver], b_over);
}

TEST(Properness, OverUnderLatticeOptimumIsTheBracketingNeighbour) {
  std::vector<double> lattice{1.0 / 120.0};
  for (int c = 1; c <= 99; ++c) lattice.push_back(c / 100.0);
  lattice.push_back(119.0 / 120.0);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = u(rng);
    int best = 0;
    for (int c = 1; c <= 100; ++c) {
      if (expected_pair_ig(c, p, 0.5) > expected_pair_ig(best, p, 0.5)) best = c;
    }
    const auto issued = credits_to_pmf(CreditAllocation({best, 100 - best}), kPair30);
    EXPECT_NEAR(issued[kOver], oracle::best_lattice_value(lattice, p), 1e-12) << p;
    // And it never strays more than one credit from the belief.
    EXPECT_LE(std::abs(best - 100.0 * std::clamp(p, 0.01, 0.99)), 1.0 + 1e-9) << p;
  }
}

// Expected log score of a ten-bin allocation under truth p.
double expected_log_score(const std::vector<int>& credits, const std::vector<double>& p) {
  const auto pmf = credits_to_pmf(CreditAllocation(credits), kBins30);
  double e = 0.0;
  for (std::size_t k = 0; k < kBinArity; ++k) e += p[k] * std::log(pmf[k]);
  return e;
}

// With every bin holding at least one credit the clamp is the identity and
// the objective is separable concave in the credits, so handing out credits
// one at a time by marginal gain reaches the lattice optimum.
std::vector<int> greedy_log_optimum(const std::vector<double>& p) {
  std::vector<int> c(kBinArity, 1);
  for (int step = 0; step < 90; ++step) {
    std::size_t best = 0;
    double best_gain = -1.0;
    for (std::size_t k = 0; k < kBinArity; ++k) {
      const double gain = p[k] * std::log((c[k] + 1.0) / c[k]);
      if (gain > best_gain) {
        best_gain = gain;
        best = k;
      }
    }
    ++c[best];
  }
  return c;
}

std::vector<double> random_truth(std::mt19937_64& rng, double floor) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> p(kBinArity);
  for (auto& v : p) v = g(rng);
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v = floor + (1.0 - floor * kBinArity) * v / sum;
  return p;
}

TEST(Properness, TenBinLogScoreHillCheck) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_truth(rng, 0.03);
    const auto best = greedy_log_optimum(p);
    const double best_score = expected_log_score(best, p);
    for (std::size_t k = 0; k < kBinArity; ++k) {
      EXPECT_LE(std::abs(best[k] - 100.0 * p[k]), 1.5) << k;
    }
    // No single-credit move improves on it.
    for (std::size_t from = 0; from < kBinArity; ++from) {
      for (std::size_t to = 0; to < kBinArity; ++to) {
        if (from == to || best[from] == 0) continue;
        auto moved = best;
        --moved[from];
        ++moved[to];
        EXPECT_LE(expected_log_score(moved, p), best_score + 1e-12);
      }
    }
    for (int i = 0; i < 200; ++i) {
      EXPECT_LE(expected_log_score(testing::random_composition(rng, kBinArity), p),
                best_score + 1e-12);
    }
  }
}

// Expected ranked score: sum over outcomes of p_j times the score if j verifies.
double expected_rig(const Pmf& f, const Pmf& b, const std::vector<double>& p) {
  double e = 0.0;
  for (std::size_t j = 0; j < kBinArity; ++j) e += p[j] * ranked_info_gain(f, b, j).total_bits;
  return e;
}

TEST(Properness, RankedScoreRewardsAllInOnTheMode) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_truth(rng, 0.02);
    const auto mode = static_cast<std::size_t>(
        std::max_element(p.begin(), p.end()) - p.begin());
    const auto all_in = credits_to_pmf(CreditAllocation::all_in(kBinArity, mode), kBins30);
    const double all_in_score = expected_rig(all_in, uniform_bins(), p);
    const auto honest = clamp_pmf(p, kBins30);
    EXPECT_GT(all_in_score, expected_rig(honest, uniform_bins(), p));
    for (int i = 0; i < 200; ++i) {
      const auto f = credits_to_pmf(
          CreditAllocation(testing::random_composition(rng, kBinArity)), kBins30);
      EXPECT_LE(expected_rig(f, uniform_bins(), p), all_in_score + 1e-9);
    }
  }
}

}  // namespace
}  // namespace wxbits
