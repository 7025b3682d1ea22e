#pragma once

// Synthetic seasons: per-day truth distributions, superensemble members drawn
// from them, and a population of players with known calibration.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wxbits/baseline.hpp"
#include "wxbits/game.hpp"
#include "wxbits/standings.hpp"

namespace wxbits {

enum class Strategy { Honest, Hedger, AllIn };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

struct SyntheticPlayer {
  std::string id;
  // 1 honest, < 1 pulled toward the baseline, > 1 sharpened.
  double lambda = 1.0;
  // Standard deviation of log-space noise on the issued probabilities.
  double sigma = 0.0;
  Strategy strategy = Strategy::Honest;
};

// Distribution of one variable on its reporting lattice.
struct TruthDistribution {
  VariableSpec variable;
  std::vector<std::int64_t> steps;  // ascending
  std::vector<double> probs;        // same length, sums to 1

  // Probability of the quantized value landing strictly above / strictly
  // below the threshold, renormalised over non-push outcomes; {0.5, 0.5}
  // when the threshold carries all the mass.
  std::vector<double> over_under(double threshold) const;
  // Mass in each published bin.
  std::vector<double> bin_masses(const BaselineSpec& spec) const;
  // Inverse CDF at u in [0, 1).
  double sample(double u) const;
};

struct DayTruth {
  std::vector<TruthDistribution> variables;  // kAllVariables order

  const TruthDistribution& at(VariableKind kind) const;
};

struct SeasonConfig {
  int players = 36;
  int days = 120;
  std::uint64_t seed = 7;
  int members = 25;
  double clamp_factor = kDefaultClampFactor;
  UtcDay start_day = UtcDay{std::chrono::year{2024} / 1 / 1};
  std::string site = "KSIM";
  // Added to every member, in units of the variable.
  double member_bias = 0.0;
  // 0 picks the hardware concurrency.
  int threads = 0;

  // Throws ConfigError.
  void validate() const;
};

// Uniform on [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);
double standard_normal(std::mt19937_64& rng);

// Every third player is Honest, Hedger, AllIn in turn, with ids such as
// "honest-007". Honest and Hedger draw lambda in [0.8, 1.2] and sigma in
// [0, 0.3]; AllIn players know the truth exactly.
std::vector<SyntheticPlayer> make_population(const SeasonConfig& config);

DayTruth draw_truth(std::mt19937_64& rng);

// Members sampled from the truth, shifted by `bias`, as a 1200 UTC run.
std::vector<SuperensembleSample> draw_members(const DayTruth& truth, int members,
                                              double bias, UtcTime run_time,
                                              std::mt19937_64& rng);

Observation draw_observation(const TruthDistribution& truth, UtcDay day,
                             std::mt19937_64& rng);

// Normalised b^(1 - lambda) * t^lambda. Falls back to t when the supports
// are disjoint.
std::vector<double> geometric_mix(std::span<const double> baseline,
                                  std::span<const double> truth, double lambda);

// The player's pmf for one event before rounding to credits.
std::vector<double> issued_pmf(const SyntheticPlayer& player, std::span<const double> truth,
                               std::span<const double> baseline, std::mt19937_64& rng);

// Largest-remainder rounding of a pmf to integer credits summing to 100.
// Ties in the remainder go to the lower index.
std::vector<int> largest_remainder_credits(std::span<const double> pmf);

// Unclamped count fractions behind a published baseline.
std::vector<double> empirical_over_under(const Game1Threshold& threshold, int n_members);
std::vector<double> empirical_bins(const BaselineSpec& spec);

Submission make_player_submission(const SyntheticPlayer& player, const DayTruth& truth,
                                  const BaselineSet& baseline, std::mt19937_64& rng);

struct SeasonResult {
  std::vector<SyntheticPlayer> players;
  std::vector<GameEvent> events;
  std::vector<ScoreRecord> scores;
  std::vector<LeaderboardRow> leaderboard;
};

// One game per day: create, publish, open, submit, lock, observe, verify.
// Identical configs give identical results.
SeasonResult simulate_season(const SeasonConfig& config);
SeasonResult simulate_season(const SeasonConfig& config,
                             const std::vector<SyntheticPlayer>& players);

}  // namespace wxbits
