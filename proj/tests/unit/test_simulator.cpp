#include "wxbits/simulator.hpp"

#include <cmath>
#include <numeric>

#include "support.hpp"
#include "wxbits/analytics.hpp"
#include "wxbits/codec.hpp"
#include "wxbits/engine.hpp"
#include "wxbits/event_log.hpp"

namespace wxbits {
namespace {

std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n) {
  std::gamma_distribution<double> g(0.7, 1.0);
  std::vector<double> p(n);
  for (auto& x : p) x = g(rng);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= s;
  return p;
}

TEST(LargestRemainder, AlwaysSumsToBudget) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_pmf(rng, i % 2 == 0 ? 2 : 10);
    const auto c = largest_remainder_credits(p);
    EXPECT_EQ(std::accumulate(c.begin(), c.end(), 0), 100);
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_LT(std::abs(c[k] - 100.0 * p[k]), 1.0);
  }
}

TEST(LargestRemainder, TiesGoToLowerIndex) {
  const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_EQ(largest_remainder_credits(third), (std::vector<int>{34, 33, 33}));
  const std::vector<double> exact{0.25, 0.75};
  EXPECT_EQ(largest_remainder_credits(exact), (std::vector<int>{25, 75}));
}

TEST(GeometricMix, Endpoints) {
  std::mt19937_64 rng(3);
  const auto t = random_pmf(rng, 10);
  const auto b = random_pmf(rng, 10);
  EXPECT_EQ(geometric_mix(b, t, 1.0), t);
  EXPECT_EQ(geometric_mix(b, t, 0.0), b);
  const std::vector<double> left{1.0, 0.0};
  const std::vector<double> right{0.0, 1.0};
  EXPECT_EQ(geometric_mix(left, right, 0.5), right);
}

TEST(GeometricMix, HalfwayIsStrictlyBetweenForTwoOutcomes) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto t = random_pmf(rng, 2);
    const auto b = random_pmf(rng, 2);
    const auto m = geometric_mix(b, t, 0.5);
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_GT(m[k], std::min(t[k], b[k]));
      EXPECT_LT(m[k], std::max(t[k], b[k]));
    }
  }
}

TEST(GeometricMix, HalfwayIsStrictlyBetweenOnMildTenBinFixture) {
  const std::vector<double> t{0.04, 0.06, 0.08, 0.09, 0.11, 0.12, 0.14, 0.13, 0.12, 0.11};
  const std::vector<double> b(10, 0.1);
  const auto m = geometric_mix(b, t, 0.5);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_GT(m[k], std::min(t[k], b[k])) << k;
    EXPECT_LT(m[k], std::max(t[k], b[k])) << k;
  }
}

TEST(GeometricMix, TenBinsCanLeaveTheInterval) {
  // Renormalising lifts bins where truth and baseline nearly agree above both.
  const std::vector<double> t{0.5, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.1};
  const std::vector<double> b{0.05, 0.5, 0.051, 0.049, 0.05, 0.05, 0.05, 0.05, 0.05, 0.1};
  const auto m = geometric_mix(b, t, 0.5);
  EXPECT_GT(m[2], std::max(t[2], b[2]));
}

TEST(IssuedPmf, HonestReproducesTruth) {
  std::mt19937_64 rng(5);
  const SyntheticPlayer honest{"h", 1.0, 0.0, Strategy::Honest};
  for (int i = 0; i < 100; ++i) {
    const auto t = random_pmf(rng, 10);
    const auto b = random_pmf(rng, 10);
    EXPECT_EQ(issued_pmf(honest, t, b, rng), t);
    EXPECT_EQ(largest_remainder_credits(issued_pmf(honest, t, b, rng)),
              largest_remainder_credits(t));
  }
}

TEST(IssuedPmf, BaselinePlayerCreditsAreTheCounts) {
  std::mt19937_64 rng(6);
  const SyntheticPlayer base{"b", 0.0, 0.0, Strategy::Honest};
  for (int i = 0; i < 200; ++i) {
    std::vector<int> counts(10, 0);
    for (int m = 0; m < 25; ++m) ++counts[rng() % 10];
    std::vector<double> empirical;
    for (int c : counts) empirical.push_back(c / 25.0);
    const auto credits = largest_remainder_credits(issued_pmf(base, random_pmf(rng, 10), empirical, rng));
    for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(credits[k], 4 * counts[k]);
  }
}

TEST(IssuedPmf, StrategiesShapeThePmf) {
  std::mt19937_64 rng(7);
  const std::vector<double> t{0.7, 0.3};
  const std::vector<double> b{0.5, 0.5};
  const auto hedged = issued_pmf({"x", 1.0, 0.0, Strategy::Hedger}, t, b, rng);
  EXPECT_NEAR(hedged[0], 0.6, 1e-15);
  const auto all_in = issued_pmf({"y", 1.0, 0.0, Strategy::AllIn}, t, b, rng);
  EXPECT_EQ(all_in, (std::vector<double>{1.0, 0.0}));
  const auto noisy = issued_pmf({"z", 1.0, 0.5, Strategy::Honest}, t, b, rng);
  EXPECT_NEAR(noisy[0] + noisy[1], 1.0, 1e-12);
  EXPECT_NE(noisy, t);
}

TEST(Truth, DistributionsAreNormalisedAndSampleInSupport) {
  std::mt19937_64 rng(8);
  for (int day = 0; day < 50; ++day) {
    const auto truth = draw_truth(rng);
    ASSERT_EQ(truth.variables.size(), 4u);
    for (const auto& t : truth.variables) {
      EXPECT_NEAR(std::accumulate(t.probs.begin(), t.probs.end(), 0.0), 1.0, 1e-9);
      EXPECT_TRUE(std::is_sorted(t.steps.begin(), t.steps.end()));
      const double v = t.sample(uniform01(rng));
      if (t.variable.non_negative) EXPECT_GE(v, 0.0);
      const auto ou = t.over_under(v);
      EXPECT_NEAR(ou[0] + ou[1], 1.0, 1e-12);
    }
  }
}

TEST(Truth, MembersAndObservations) {
  std::mt19937_64 rng(9);
  const auto truth = draw_truth(rng);
  const auto run = parse_utc_time("2024-01-01T12:00:00Z");
  const auto members = draw_members(truth, 25, 0.0, run, rng);
  EXPECT_EQ(members.size(), 100u);
  for (const auto& m : members) {
    EXPECT_EQ(m.run_time, run);
    EXPECT_EQ(quantize_to_resolution(m.value, m.variable), m.value);
  }
  const auto set = build_baseline_set(members);
  for (const auto& spec : set.variables) {
    if (!spec.has_bins()) continue;
    const auto masses = truth.at(spec.variable.kind).bin_masses(spec);
    EXPECT_NEAR(std::accumulate(masses.begin(), masses.end(), 0.0), 1.0, 1e-9);
  }
  const auto obs = draw_observation(truth.at(VariableKind::PrecipAccum),
                                    parse_utc_day("2024-01-02"), rng);
  EXPECT_NO_THROW(obs.validate());
  EXPECT_EQ(obs.valid_day, "2024-01-02");
}

TEST(Population, StrategiesRotate) {
  SeasonConfig config;
  config.players = 6;
  const auto players = make_population(config);
  ASSERT_EQ(players.size(), 6u);
  EXPECT_EQ(players[0].id, "honest-000");
  EXPECT_EQ(players[1].strategy, Strategy::Hedger);
  EXPECT_EQ(players[2].id, "allin-002");
  EXPECT_EQ(players[2].lambda, 1.0);
  EXPECT_EQ(players[2].sigma, 0.0);
  for (const auto& p : players) {
    EXPECT_GE(p.lambda, 0.8);
    EXPECT_LE(p.lambda, 1.2);
    EXPECT_GE(p.sigma, 0.0);
    EXPECT_LE(p.sigma, 0.3);
    EXPECT_EQ(parse_strategy(to_string(p.strategy)), p.strategy);
  }
  EXPECT_WX_ERROR(parse_strategy("bold"), ErrorCode::ConfigError);
}

TEST(Config, Validation) {
  const auto bad = [](auto mutate) {
    SeasonConfig c;
    mutate(c);
    EXPECT_WX_ERROR(c.validate(), ErrorCode::ConfigError);
  };
  bad([](SeasonConfig& c) { c.players = 0; });
  bad([](SeasonConfig& c) { c.days = 0; });
  bad([](SeasonConfig& c) { c.members = 5; });
  bad([](SeasonConfig& c) { c.clamp_factor = 0.0; });
  bad([](SeasonConfig& c) { c.member_bias = NAN; });
  bad([](SeasonConfig& c) { c.threads = -1; });
  bad([](SeasonConfig& c) { c.site = ""; });
  SeasonConfig ok;
  ok.days = 1;
  EXPECT_WX_ERROR(simulate_season(ok, {{"a", 3.0, 0.0, Strategy::Honest}}), ErrorCode::ConfigError);
  EXPECT_WX_ERROR(simulate_season(ok, {{"a", 1.0, -1.0, Strategy::Honest}}), ErrorCode::ConfigError);
  EXPECT_WX_ERROR(simulate_season(ok, {{"a", 1.0, 0.0, Strategy::Honest},
                                       {"a", 1.0, 0.0, Strategy::AllIn}}),
                  ErrorCode::ConfigError);
  EXPECT_WX_ERROR(simulate_season(ok, {}), ErrorCode::ConfigError);
}

TEST(Season, DeterministicAcrossThreadCounts) {
  SeasonConfig config;
  config.players = 9;
  config.days = 12;
  config.threads = 1;
  const auto a = simulate_season(config);
  config.threads = 4;
  const auto b = simulate_season(config);
  EXPECT_EQ(to_json_lines(a.events), to_json_lines(b.events));
  EXPECT_EQ(leaderboard_to_json(a.leaderboard, RankBy::AllGames),
            leaderboard_to_json(b.leaderboard, RankBy::AllGames));
  config.seed = 8;
  EXPECT_NE(to_json_lines(simulate_season(config).events), to_json_lines(a.events));
}

TEST(Season, ReplayReproducesTheLeaderboard) {
  SeasonConfig config;
  config.players = 6;
  config.days = 5;
  const auto season = simulate_season(config);
  Engine engine;
  engine.replay(season.events);
  EXPECT_EQ(leaderboard_to_json(engine.leaderboard(), RankBy::AllGames).dump(),
            leaderboard_to_json(season.leaderboard, RankBy::AllGames).dump());
}

class SeasonPopulation : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SeasonConfig config;
    config.days = 200;
    config.seed = 11;
    season_ = new SeasonResult(simulate_season(
        config, {{"baseline", 0.0, 0.0, Strategy::Honest},
                 {"honest", 1.0, 0.0, Strategy::Honest},
                 {"timid", 0.4, 0.0, Strategy::Honest},
                 {"allin", 1.0, 0.0, Strategy::AllIn}}));
  }
  static void TearDownTestSuite() {
    delete season_;
    season_ = nullptr;
  }
  static const LeaderboardRow& row(const std::string& player) {
    for (const auto& r : season_->leaderboard) {
      if (r.player == player) return r;
    }
    throw std::runtime_error("no row for " + player);
  }
  static SeasonResult* season_;
};

SeasonResult* SeasonPopulation::season_ = nullptr;

TEST_F(SeasonPopulation, BaselinePlayerScoresExactlyZero) {
  std::size_t n = 0;
  for (const auto& r : season_->scores) {
    if (r.player != "baseline" || !r.counts_for_bits()) continue;
    EXPECT_EQ(r.bits, 0.0) << r.game_id << " " << r.event_label();
    ++n;
  }
  EXPECT_GT(n, 1000u);
  const auto& b = row("baseline");
  EXPECT_EQ(*b.mean_bits, 0.0);
  EXPECT_LE(std::abs(*b.mean_bits), 3.0 / std::sqrt(static_cast<double>(b.n_events)));
}

TEST_F(SeasonPopulation, HonestBeatsAllInOnOverUnder) {
  EXPECT_GT(*row("honest").mean_bits_game1, *row("allin").mean_bits_game1);
  EXPECT_GT(*row("honest").mean_bits_game1, 0.0);
}

TEST(Calibration, PullingTowardAFlatBaselineRaisesReliability) {
  std::mt19937_64 rng(13);
  const SyntheticPlayer honest{"honest", 1.0, 0.0, Strategy::Honest};
  const SyntheticPlayer timid{"timid", 0.4, 0.0, Strategy::Honest};
  const std::vector<double> flat{0.5, 0.5};
  const auto clamp = Clamp::for_members(25, kOverUnderArity);
  std::vector<ForecastRecord> a;
  std::vector<ForecastRecord> b;
  for (int i = 0; i < 20000; ++i) {
    const double p = 0.02 + 0.96 * uniform01(rng);
    const std::vector<double> truth{p, 1.0 - p};
    const bool hit = uniform01(rng) < p;
    const auto issue = [&](const SyntheticPlayer& player) {
      const CreditAllocation credits(largest_remainder_credits(issued_pmf(player, truth, flat, rng)));
      return credits_to_pmf(credits, clamp)[0];
    };
    a.push_back({issue(honest), hit});
    b.push_back({issue(timid), hit});
  }
  EXPECT_GT(decompose(b).rel_bits, decompose(a).rel_bits);
  EXPECT_EQ(decompose(b).unc_bits, decompose(a).unc_bits);
}

}  // namespace
}  // namespace wxbits
